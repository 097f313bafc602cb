//! Optical damping, effective bath occupation and rate-equation phonon numbers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::langevin::Model;
use crate::noise::{diffusion_coefficients, DiffusionSet};
use crate::optimize::golden_section;
use crate::params::{DriveSpec, LaserParams, MechanicsParams};
use crate::spectra::{snn, Method};
use crate::steady_state::{derive_working_point, WorkingPoint};

/// |Γ_opt| below this fraction of G²S_nn(ω_m) counts as vanishing.
pub const VANISHING_DAMPING: f64 = 1e-9;
/// The κ̃ approximations refuse |κ̃| below this fraction of κ.
pub const KAPPA_GUARD: f64 = 1e-3;

/// Which spectrum feeds the cooling formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Route {
    pub model: Model,
    pub method: Method,
    pub include_fpar: bool,
}

impl Route {
    pub fn new(model: Model, method: Method) -> Self {
        Self { model, method, include_fpar: false }
    }

    pub fn with_fpar(mut self, include_fpar: bool) -> Self {
        self.include_fpar = include_fpar;
        self
    }

    pub fn snn(&self, wp: &WorkingPoint, noise: &DiffusionSet, omega: f64) -> Result<f64> {
        snn(self.model, wp, noise, omega, self.method, self.include_fpar)
    }

    /// (S_nn(ω), S_nn(−ω)).
    pub fn sidebands(&self, wp: &WorkingPoint, noise: &DiffusionSet, omega: f64) -> Result<(f64, f64)> {
        Ok((self.snn(wp, noise, omega)?, self.snn(wp, noise, -omega)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoolingBranch {
    /// Γ_opt > 0: weighted average of optical and thermal occupations.
    Cooling,
    /// Γ_opt ≈ 0: the oscillator only sees the optical noise as extra heating.
    Vanishing,
    /// Γ_opt < 0 with Γ_opt + Γ_m > 0.
    Heating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoolingResult {
    pub gamma_opt: f64,
    pub n_opt: Option<f64>,
    pub n_m: f64,
    pub optical_part: f64,
    pub thermal_part: f64,
    /// ω_m / ln((n_opt + 1)/n_opt) with ħ = k_B = 1.
    pub t_opt: Option<f64>,
    pub s_plus: f64,
    pub s_minus: f64,
    pub branch: CoolingBranch,
}

/// Γ_opt = G²[S_nn(ω) − S_nn(−ω)].
pub fn gamma_opt(route: Route, wp: &WorkingPoint, noise: &DiffusionSet, omega: f64) -> Result<f64> {
    let (sp, sm) = route.sidebands(wp, noise, omega)?;
    Ok(wp.mech.coupling.powi(2) * (sp - sm))
}

/// Effective optical bath occupation from the sideband ratio.
pub fn n_opt(route: Route, wp: &WorkingPoint, noise: &DiffusionSet, omega_m: f64) -> Result<f64> {
    let (sp, sm) = route.sidebands(wp, noise, omega_m)?;
    n_opt_from_sidebands(sp, sm)
}

fn n_opt_from_sidebands(s_plus: f64, s_minus: f64) -> Result<f64> {
    if s_plus <= s_minus {
        return Err(Error::HeatingConfiguration { s_plus, s_minus });
    }
    Ok(1.0 / (s_plus / s_minus - 1.0))
}

fn check_kappa(wp: &WorkingPoint) -> Result<()> {
    let guard = KAPPA_GUARD * wp.laser.kappa;
    if wp.kappa_tilde.abs() < guard {
        Err(Error::NearSingularKappa { kappa_tilde: wp.kappa_tilde, guard })
    } else {
        Ok(())
    }
}

/// n_opt ≈ [WN_g + 2(κ − κ̃)]/(4κ̃).
pub fn n_opt_approx(wp: &WorkingPoint) -> Result<f64> {
    check_kappa(wp)?;
    let l = &wp.laser;
    Ok((wp.w * l.n_g + 2.0 * (l.kappa - wp.kappa_tilde)) / (4.0 * wp.kappa_tilde))
}

/// Lorentzian approximation to Γ_opt(ω) valid when Θ is dominated by its
/// cavity factor.
pub fn gamma_opt_lorentzian(wp: &WorkingPoint, omega: f64) -> Result<f64> {
    check_kappa(wp)?;
    let (kt, dt) = (wp.kappa_tilde, wp.delta_tilde);
    let k2 = kt * kt;
    Ok(-8.0 * wp.mech.coupling.powi(2) * wp.n_bar * omega * dt * kt
        / ((k2 + (omega - dt).powi(2)) * (k2 + (omega + dt).powi(2))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxDamping {
    pub gamma_opt: f64,
    /// Δ̃_Lr at which the maximum is attained: −ω_m for κ̃ > 0, +ω_m for κ̃ < 0.
    pub required_delta_tilde: f64,
}

/// Maximal optical damping 2G²n̄/|κ̃|·[1 + (κ̃/2ω_m)²]⁻¹.
pub fn gamma_opt_max(wp: &WorkingPoint, omega_m: f64) -> Result<MaxDamping> {
    check_kappa(wp)?;
    let kt = wp.kappa_tilde;
    let value = 2.0 * wp.mech.coupling.powi(2) * wp.n_bar / kt.abs() / (1.0 + (kt / (2.0 * omega_m)).powi(2));
    Ok(MaxDamping { gamma_opt: value, required_delta_tilde: -kt.signum() * omega_m })
}

/// Steady-state phonon number from the rate equations.
pub fn phonon_number_rate(route: Route, wp: &WorkingPoint, noise: &DiffusionSet) -> Result<CoolingResult> {
    let m = &wp.mech;
    let (sp, sm) = route.sidebands(wp, noise, m.omega_m)?;
    cooling_from_sidebands(m, sp, sm)
}

/// Rate-equation summary given S_nn(±ω_m).
pub fn cooling_from_sidebands(m: &MechanicsParams, s_plus: f64, s_minus: f64) -> Result<CoolingResult> {
    let g2 = m.coupling * m.coupling;
    let gamma_opt = g2 * (s_plus - s_minus);
    let threshold = VANISHING_DAMPING * g2 * s_plus.abs();
    let thermal = m.gamma_m * m.n_th;

    if gamma_opt.abs() <= threshold {
        let optical_part = g2 * s_minus / m.gamma_m;
        return Ok(CoolingResult {
            gamma_opt,
            n_opt: None,
            n_m: optical_part + m.n_th,
            optical_part,
            thermal_part: m.n_th,
            t_opt: None,
            s_plus,
            s_minus,
            branch: CoolingBranch::Vanishing,
        });
    }

    let total = gamma_opt + m.gamma_m;
    if total <= 0.0 {
        return Err(Error::MechanicalInstability { total_damping: total });
    }
    if gamma_opt > 0.0 {
        let n_opt = n_opt_from_sidebands(s_plus, s_minus)?;
        let optical_part = gamma_opt * n_opt / total;
        let thermal_part = thermal / total;
        Ok(CoolingResult {
            gamma_opt,
            n_opt: Some(n_opt),
            n_m: (gamma_opt * n_opt + thermal) / total,
            optical_part,
            thermal_part,
            t_opt: Some(m.omega_m / ((n_opt + 1.0) / n_opt).ln()),
            s_plus,
            s_minus,
            branch: CoolingBranch::Cooling,
        })
    } else {
        // Detailed balance n = Γ↑/(Γ↓ − Γ↑) with Γ↑ = G²S(−ω_m) + Γ_m n_th.
        let optical_part = g2 * s_minus / total;
        let thermal_part = thermal / total;
        Ok(CoolingResult {
            gamma_opt,
            n_opt: None,
            n_m: optical_part + thermal_part,
            optical_part,
            thermal_part,
            t_opt: None,
            s_plus,
            s_minus,
            branch: CoolingBranch::Heating,
        })
    }
}

/// κ̃ at which the optical and thermal contributions balance.
pub fn optimal_kappa_tilde(laser: &LaserParams, mech: &MechanicsParams, n_bar: f64) -> f64 {
    let bath = laser.stimulated_emission_rate() * laser.n_g + 2.0 * laser.kappa;
    (mech.coupling.powi(2) * n_bar * bath / (2.0 * mech.gamma_m * mech.n_th)).sqrt()
}

/// Phonon number at that balance (geometric mean of the two contributions).
pub fn optimal_phonon_number(laser: &LaserParams, mech: &MechanicsParams, n_bar: f64) -> f64 {
    let bath = laser.stimulated_emission_rate() * laser.n_g + 2.0 * laser.kappa;
    (bath * mech.gamma_m * mech.n_th / (2.0 * mech.coupling.powi(2) * n_bar)).sqrt() - 0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PumpOptimum {
    pub d0: f64,
    pub d0_over_dth: f64,
    pub kappa_tilde: f64,
    pub n_m: f64,
    pub cooling: CoolingResult,
    /// Upper end of the search interval after the κ̃ > 0 restriction.
    pub d0_upper: f64,
    pub predicted_kappa_tilde: f64,
    pub predicted_n_m: f64,
}

/// Minimize the rate-equation phonon number over D0 at fixed n̄, with the
/// cavity detuned to the red sideband (Δ_Lr = −ω_m).
pub fn optimize_pump(
    template: &LaserParams,
    mech: &MechanicsParams,
    n_target: f64,
    d0_bounds: (f64, f64),
) -> Result<PumpOptimum> {
    let mut laser = *template;
    laser.delta_lr = -mech.omega_m;
    let probe = LaserParams { d0: 0.0, ..laser };
    probe.validate()?;
    mech.validate()?;
    DriveSpec::SeededPhotonNumber { n_target }.validate()?;
    if laser.g == 0.0 {
        return Err(Error::ZeroGain("the pump has no effect when g = 0"));
    }

    let d_th = laser.threshold_inversion();
    let xi = n_target / laser.saturation_photon_number();
    let kappa_limit = (1.0 + xi) * (1.0 - KAPPA_GUARD) * d_th;
    let (lo, hi) = d0_bounds;
    let lo = lo.max(-laser.n_g);
    let hi = hi.min(laser.n_g).min(kappa_limit);
    if !(lo < hi) {
        return Err(Error::NoMinimumInBounds(format!(
            "empty D0 interval [{lo:e}, {hi:e}] after requiring kappa_tilde > {KAPPA_GUARD}*kappa"
        )));
    }

    let route = Route::new(Model::Seeded, Method::Matrix);
    let evaluate = |d0: f64| -> Result<(WorkingPoint, CoolingResult)> {
        let l = LaserParams { d0, ..laser };
        let wp = derive_working_point(&l, mech, &DriveSpec::SeededPhotonNumber { n_target })?;
        let noise = diffusion_coefficients(&wp);
        let res = phonon_number_rate(route, &wp, &noise)?;
        Ok((wp, res))
    };
    let best = golden_section(
        |d0| evaluate(d0).map(|(_, r)| r.n_m).unwrap_or(f64::INFINITY),
        lo,
        hi,
        1e-4 * d_th,
    )
    .ok_or_else(|| Error::NoMinimumInBounds("phonon number is undefined on the whole interval".into()))?;
    let (wp, cooling) = evaluate(best.x)?;

    Ok(PumpOptimum {
        d0: best.x,
        d0_over_dth: best.x / d_th,
        kappa_tilde: wp.kappa_tilde,
        n_m: cooling.n_m,
        cooling,
        d0_upper: hi,
        predicted_kappa_tilde: optimal_kappa_tilde(&laser, mech, n_target),
        predicted_n_m: optimal_phonon_number(&laser, mech, n_target),
    })
}
