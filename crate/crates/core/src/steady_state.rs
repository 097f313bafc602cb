//! Classical steady states of the laser with and without a coherent seed.
//!
//! All fluctuation models are linearized around a [`WorkingPoint`]. The
//! field amplitude is always re-phased to be real and non-negative; the
//! phase it had relative to the seed is kept in `field_phase`.

use num_complex::Complex64;
use serde::Serialize;

use crate::cubic;
use crate::error::{Error, Result};
use crate::params::{DriveSpec, LaserParams, MechanicsParams};

/// Derived steady-state quantities plus the inputs they came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkingPoint {
    pub laser: LaserParams,
    pub mech: MechanicsParams,
    pub drive: DriveSpec,
    /// Stimulated emission rate W.
    pub w: f64,
    pub n_sat: f64,
    pub d_th: f64,
    /// Saturation factor ξ = n̄ / n_sat.
    pub xi: f64,
    /// Saturated inversion D̄.
    pub d_bar: f64,
    pub n_bar: f64,
    /// |ā| (the re-phased, real amplitude).
    pub a_bar: f64,
    /// Phase of ā relative to the seed before re-phasing.
    pub field_phase: f64,
    /// Seed amplitude, if seeded.
    pub omega_s: Option<f64>,
    pub kappa_tilde: f64,
    pub delta_tilde: f64,
    /// Relaxation frequencies (ω₊, ω₋).
    pub omega_pm: [Complex64; 2],
    /// More than one positive steady state exists for this seed.
    pub bistable: bool,
}

impl WorkingPoint {
    pub fn is_seeded(&self) -> bool {
        self.drive.is_seeded()
    }

    /// W·D̄, the gain experienced by cavity fluctuations (2κ when unseeded).
    pub fn gain(&self) -> f64 {
        self.w * self.d_bar
    }
}

/// One positive steady state of the seeded cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeededRoot {
    pub n_bar: f64,
    /// ā as it comes out of the field equation, before re-phasing.
    pub a_bar_raw: Complex64,
    /// Re-phased amplitude, |ā|.
    pub a_bar: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeededSteadyStates {
    /// Sorted by ascending photon number.
    pub roots: Vec<SeededRoot>,
    /// More than one non-negative root.
    pub multiple: bool,
}

/// Laser frequency fixed by γ⊥Δ_Lr + κΔ_La = 0.
pub fn line_pulling_frequency(omega_r: f64, omega_a: f64, kappa: f64, gamma_perp: f64) -> f64 {
    (gamma_perp * omega_r + kappa * omega_a) / (gamma_perp + kappa)
}

/// Cavity detuning Δ_Lr consistent with line pulling for a given Δ_La.
pub fn line_pulling_cavity_detuning(delta_la: f64, kappa: f64, gamma_perp: f64) -> f64 {
    -kappa * delta_la / gamma_perp
}

/// Whether (Δ_La, Δ_Lr) satisfy the line-pulling relation to within `tol` (GHz·GHz).
pub fn satisfies_line_pulling(
    delta_la: f64,
    delta_lr: f64,
    kappa: f64,
    gamma_perp: f64,
    tol: f64,
) -> bool {
    (gamma_perp * delta_lr + kappa * delta_la).abs() <= tol
}

/// Unseeded laser above threshold: returns (D̄, n̄) with D̄ clamped to D_th.
pub fn unseeded_steady_state(laser: &LaserParams) -> Result<(f64, f64)> {
    if laser.g == 0.0 {
        return Err(Error::ZeroGain("an unseeded laser needs g > 0"));
    }
    let d_th = laser.threshold_inversion();
    if laser.d0 <= d_th {
        return Err(Error::BelowThreshold { d0: laser.d0, d_th });
    }
    let n_bar = laser.saturation_photon_number() * (laser.d0 / d_th - 1.0);
    Ok((d_th, n_bar))
}

/// (κ̃, Δ̃_Lr) for a given saturated inversion.
pub fn effective_decay_and_detuning(laser: &LaserParams, d_bar: f64) -> (f64, f64) {
    let half_gain = laser.stimulated_emission_rate() * d_bar / 2.0;
    let kappa_tilde = laser.kappa - half_gain;
    let delta_tilde = laser.delta_lr + half_gain / laser.gamma_perp * laser.delta_la;
    (kappa_tilde, delta_tilde)
}

fn saturated_inversion(laser: &LaserParams, n_bar: f64) -> f64 {
    let w = laser.stimulated_emission_rate();
    laser.d0 / (1.0 + 2.0 * w * n_bar / laser.gamma_par)
}

/// Seed amplitude |Ω_s| that produces mean photon number `n_target`.
pub fn seeding_amplitude(laser: &LaserParams, n_target: f64) -> f64 {
    let d_bar = saturated_inversion(laser, n_target);
    let (kt, dt) = effective_decay_and_detuning(laser, d_bar);
    (n_target * (dt * dt + kt * kt)).sqrt()
}

/// All non-negative steady-state photon numbers for seed amplitude Ω_s.
///
/// The field equation ā(iΔ̃_Lr − κ̃) = iΩ_s, with D̄ = D0/(1+ξ), becomes a
/// cubic in ξ after taking the squared modulus and clearing (1+ξ)².
pub fn seeded_photon_number(laser: &LaserParams, omega_s: f64) -> SeededSteadyStates {
    let w = laser.stimulated_emission_rate();
    let om2 = omega_s * omega_s;
    let half_pump = w * laser.d0 / 2.0;
    // κ̃(1+ξ) = beta + κξ, Δ̃(1+ξ) = alpha + Δ_Lr ξ
    let alpha = laser.delta_lr + half_pump * laser.delta_la / laser.gamma_perp;
    let beta = laser.kappa - half_pump;
    let (dlr, k) = (laser.delta_lr, laser.kappa);

    let n_values: Vec<f64> = if w == 0.0 {
        vec![om2 / (alpha * alpha + beta * beta)]
    } else {
        let n_sat = laser.gamma_par / (2.0 * w);
        let s = om2 / n_sat;
        let c3 = dlr * dlr + k * k;
        let c2 = 2.0 * (alpha * dlr + beta * k) - s;
        let c1 = alpha * alpha + beta * beta - 2.0 * s;
        let c0 = -s;
        cubic::real_roots(c3, c2, c1, c0)
            .into_iter()
            .map(|xi| xi * n_sat)
            .collect()
    };

    let scale = n_values.iter().fold(1.0f64, |m, n| m.max(n.abs()));
    let mut roots: Vec<SeededRoot> = n_values
        .into_iter()
        .filter(|&n| n >= -1e-12 * scale)
        .map(|n| {
            let n = n.max(0.0);
            let d_bar = saturated_inversion(laser, n);
            let (kt, dt) = effective_decay_and_detuning(laser, d_bar);
            let denom = Complex64::new(-kt, dt);
            let a_raw = if omega_s == 0.0 {
                Complex64::new(n.sqrt(), 0.0)
            } else {
                Complex64::new(0.0, omega_s) / denom
            };
            SeededRoot { n_bar: n, a_bar_raw: a_raw, a_bar: n.sqrt() }
        })
        .collect();
    roots.sort_by(|a, b| a.n_bar.total_cmp(&b.n_bar));
    roots.dedup_by(|a, b| (a.n_bar - b.n_bar).abs() <= 1e-9 * b.n_bar.max(1.0));
    let multiple = roots.len() > 1;
    SeededSteadyStates { roots, multiple }
}

/// Relaxation frequencies ω± = −iγ∥/2 [(1+ξ) ± √((1+ξ)² − 4ξWD̄/γ∥)].
/// Unseeded, WD̄ = 2κ and this is the usual laser result.
pub fn relaxation_frequencies(gamma_par: f64, xi: f64, gain: f64) -> [Complex64; 2] {
    let s = 1.0 + xi;
    let root = Complex64::new(s * s - 4.0 * xi * gain / gamma_par, 0.0).sqrt();
    let pre = Complex64::new(0.0, -gamma_par / 2.0);
    [pre * (s + root), pre * (s - root)]
}

pub fn derive_working_point(
    laser: &LaserParams,
    mech: &MechanicsParams,
    drive: &DriveSpec,
) -> Result<WorkingPoint> {
    laser.validate()?;
    mech.validate()?;
    drive.validate()?;

    let w = laser.stimulated_emission_rate();
    let n_sat = laser.saturation_photon_number();
    let d_th = laser.threshold_inversion();

    let (d_bar, n_bar, field_phase, omega_s, bistable) = match *drive {
        DriveSpec::Unseeded => {
            let (d_bar, n_bar) = unseeded_steady_state(laser)?;
            (d_bar, n_bar, 0.0, None, false)
        }
        DriveSpec::SeededPhotonNumber { n_target } => {
            let omega_s = seeding_amplitude(laser, n_target);
            let d_bar = saturated_inversion(laser, n_target);
            let (kt, dt) = effective_decay_and_detuning(laser, d_bar);
            let phase = (Complex64::new(0.0, omega_s) / Complex64::new(-kt, dt)).arg();
            let states = seeded_photon_number(laser, omega_s);
            (d_bar, n_target, phase, Some(omega_s), states.multiple)
        }
        DriveSpec::SeededAmplitude { omega_s, branch } => {
            let states = seeded_photon_number(laser, omega_s);
            let count = states.roots.len();
            let root = match (branch, count) {
                (_, 0) => return Err(Error::NoSuchBranch { branch: branch.unwrap_or(0), count }),
                (None, 1) => states.roots[0],
                (None, _) => return Err(Error::AmbiguousSteadyState { count }),
                (Some(b), _) if b < count => states.roots[b],
                (Some(b), _) => return Err(Error::NoSuchBranch { branch: b, count }),
            };
            let d_bar = saturated_inversion(laser, root.n_bar);
            (d_bar, root.n_bar, root.a_bar_raw.arg(), Some(omega_s), states.multiple)
        }
    };

    let xi = if w == 0.0 { 0.0 } else { n_bar / n_sat };
    let (kappa_tilde, delta_tilde) = match drive {
        // D̄ = D_th makes κ̃ vanish identically.
        DriveSpec::Unseeded => (0.0, laser.delta_lr + laser.kappa * laser.delta_la / laser.gamma_perp),
        _ => effective_decay_and_detuning(laser, d_bar),
    };

    Ok(WorkingPoint {
        laser: *laser,
        mech: *mech,
        drive: *drive,
        w,
        n_sat,
        d_th,
        xi,
        d_bar,
        n_bar,
        a_bar: n_bar.sqrt(),
        field_phase,
        omega_s,
        kappa_tilde,
        delta_tilde,
        omega_pm: relaxation_frequencies(laser.gamma_par, xi, w * d_bar),
        bistable,
    })
}
