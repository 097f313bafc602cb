//! Phonon spectrum with radiation-pressure back-action.
//!
//! Uses the (δa, δa†, δD, b, b†) model with the polarization adiabatically
//! eliminated. S_b†b(ω) = ∫⟨b†(t) b(0)⟩e^{iωt}dt peaks near ω = −ω_m.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{linspace, local_maxima, parabolic_peak};
use crate::langevin::{LinearLangevinSystem, Model};
use crate::noise::DiffusionSet;
use crate::params::MechanicsParams;
use crate::quadrature::{integrate_panels, GaussLegendre};
use crate::spectra::build_system;
use crate::steady_state::WorkingPoint;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Response of b(ω) to each Langevin force.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SusceptibilitySet {
    pub chi_a: Complex64,
    pub chi_adag: Complex64,
    /// Response to the inversion noise F_∥.
    pub chi_par: Complex64,
    pub chi_b: Complex64,
    pub chi_bdag: Complex64,
    /// Bare mechanical response [i(ω_m − ω) + Γ_m/2]⁻¹.
    pub chi_m: Complex64,
    /// Effective cavity response [i(Δ̃_Lr − ω) + κ̃]⁻¹.
    pub chi_r: Complex64,
}

pub fn chi_m(mech: &MechanicsParams, omega: f64) -> Complex64 {
    1.0 / Complex64::new(mech.gamma_m / 2.0, mech.omega_m - omega)
}

pub fn chi_r(wp: &WorkingPoint, omega: f64) -> Complex64 {
    1.0 / Complex64::new(wp.kappa_tilde, wp.delta_tilde - omega)
}

/// Closed-form χ_a for a seeded laser.
pub fn chi_a_seeded(wp: &WorkingPoint, omega: f64) -> Complex64 {
    let l = &wp.laser;
    let m = &wp.mech;
    let g_mech = m.coupling;
    let rm = chi_r(wp, -omega).conj();
    let rp = chi_r(wp, omega);
    let mm = chi_m(m, -omega).conj();
    let mp = chi_m(m, omega);
    let lower = Complex64::new(l.gamma_perp, -l.delta_la);
    let back_action = 4.0 * wp.n_bar * g_mech * g_mech * m.omega_m * wp.delta_tilde * rm * rp * mm * mp;
    let gain = 2.0 * I * wp.n_bar * wp.gain() * l.g * l.g
        / Complex64::new(omega, (1.0 + wp.xi) * l.gamma_par)
        * (rm / lower + rp / lower.conj());
    I * wp.a_bar * g_mech * rm * mp / (1.0 + back_action + gain)
}

/// Closed-form χ_a (= χ_a†) for an unseeded laser with κ̃ = Δ̃ = 0.
pub fn chi_a_unseeded(wp: &WorkingPoint, omega: f64) -> Complex64 {
    let w = Complex64::new(omega, 0.0);
    let [p, m] = wp.omega_pm;
    -wp.a_bar * wp.mech.coupling * Complex64::new(omega, wp.laser.gamma_par * (1.0 + wp.xi))
        / ((w - p) * (w - m))
        * chi_m(&wp.mech, omega)
}

/// A stable optomechanical system ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct PhononModel {
    pub system: LinearLangevinSystem,
    pub omega_m: f64,
    pub a_bar: f64,
    pub coupling: f64,
    pub gamma_m: f64,
    pub n_th: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhononIntegral {
    pub n_m: f64,
    /// |difference| between the run and its panel-doubled repeat.
    pub error: f64,
    /// Share of the result from the two algebraic tails.
    pub tail: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingRegime {
    Weak,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub omega: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSplitting {
    /// Ascending in ω.
    pub peaks: Vec<Peak>,
    /// Separation of the two highest peaks, when there are at least two.
    pub splitting: Option<f64>,
    pub regime: CouplingRegime,
}

impl PhononModel {
    pub fn new(wp: &WorkingPoint, noise: &DiffusionSet, include_fpar: bool) -> Result<Self> {
        let system = build_system(Model::SeededWithMechanics, wp, noise, include_fpar)?;
        system.check_stable()?;
        Ok(Self {
            system,
            omega_m: wp.mech.omega_m,
            a_bar: wp.a_bar,
            coupling: wp.mech.coupling,
            gamma_m: wp.mech.gamma_m,
            n_th: wp.mech.n_th,
        })
    }

    /// S_b†b(ω).
    pub fn sbb(&self, omega: f64) -> Result<f64> {
        Ok(self.system.spectrum(omega, "bd", "b")?.re)
    }

    pub fn susceptibilities(&self, omega: f64) -> Result<SusceptibilitySet> {
        let inv = self.system.susceptibility(omega)?;
        let b = 3;
        let mech = MechanicsParams {
            omega_m: self.omega_m,
            gamma_m: self.gamma_m,
            n_th: self.n_th,
            coupling: self.coupling,
        };
        let d = &self.system.drift;
        // κ̃ and Δ̃ sit on the (a, a) diagonal of A as iΔ̃ − κ̃.
        let chi_r = 1.0 / Complex64::new(-d[(0, 0)].re, d[(0, 0)].im - omega);
        Ok(SusceptibilitySet {
            chi_a: inv[(b, 0)],
            chi_adag: inv[(b, 1)],
            chi_par: inv[(b, 2)],
            chi_b: inv[(b, 3)],
            chi_bdag: inv[(b, 4)],
            chi_m: chi_m(&mech, omega),
            chi_r,
        })
    }

    /// Resonances of the system as (centre, half width) in ω.
    pub fn resonances(&self) -> Vec<(f64, f64)> {
        self.system.eigenvalues().iter().map(|l| (-l.im, l.re.abs())).collect()
    }

    fn breakpoints(&self, cutoff: f64, density: usize) -> Vec<f64> {
        let floor = 1e-9 * cutoff;
        let mut pts = vec![-cutoff, cutoff, 0.0];
        let d = &self.system.drift;
        let dt = d[(0, 0)].im;
        let split = self.a_bar * self.coupling;
        pts.extend([self.omega_m, -self.omega_m, dt, -dt, -self.omega_m - split, -self.omega_m + split]);
        for (c, w) in self.resonances() {
            let w = w.max(floor);
            pts.push(c);
            let mut off = 0.5 * w;
            while off < 2.0 * cutoff {
                pts.push(c - off);
                pts.push(c + off);
                off *= 4.0;
            }
        }
        pts.retain(|x| x.is_finite() && x.abs() <= cutoff);
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * cutoff);
        if density > 1 {
            let mut fine = Vec::with_capacity(pts.len() * density);
            for w in pts.windows(2) {
                let seg = linspace(w[0], w[1], density + 1);
                fine.extend_from_slice(&seg[..density]);
            }
            fine.push(*pts.last().unwrap_or(&cutoff));
            pts = fine;
        }
        pts
    }

    fn cutoff(&self) -> f64 {
        let scale = self
            .resonances()
            .iter()
            .fold(self.omega_m, |m, (c, w)| m.max(c.abs() + w));
        100.0 * scale
    }

    fn integrate_once(&self, rule: &GaussLegendre, density: usize, rtol: f64) -> Result<(f64, f64)> {
        let cutoff = self.cutoff();
        let f = |w: f64| self.sbb(w);
        let body = integrate_panels(rule, &f, &self.breakpoints(cutoff, density), rtol)?;
        // S_b†b falls off as 1/ω² beyond the resonances.
        let tail = (self.sbb(cutoff)? + self.sbb(-cutoff)?) * cutoff;
        let two_pi = 2.0 * std::f64::consts::PI;
        Ok(((body.value + tail) / two_pi, tail / two_pi))
    }

    /// n̄_m = (1/2π)∫S_b†b(ω)dω, checked by repeating with twice the panel density.
    pub fn integrate(&self, rtol: f64) -> Result<PhononIntegral> {
        let rule = GaussLegendre::new(20);
        let (coarse, _) = self.integrate_once(&rule, 1, rtol)?;
        let (fine, tail) = self.integrate_once(&rule, 2, rtol)?;
        let rel_change = (fine - coarse).abs() / fine.abs();
        if !(rel_change <= 1e-3) {
            return Err(Error::NonConvergedQuadrature { value: fine, rel_change });
        }
        Ok(PhononIntegral { n_m: fine, error: (fine - coarse).abs(), tail: tail / fine })
    }

    /// Peaks of S_b†b around ω = −ω_m.
    pub fn mode_splitting(&self) -> Result<ModeSplitting> {
        let centre = -self.omega_m;
        let half = (5.0 * self.a_bar * self.coupling).max(0.01 * self.omega_m);
        let mut grid = linspace(centre - half, centre + half, 4001);
        grid.extend(self.resonances().iter().map(|r| r.0).filter(|c| (c - centre).abs() < half));
        grid.retain(|&w| w != 0.0);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let values: Vec<f64> = grid.iter().map(|&w| self.sbb(w)).collect::<Result<_>>()?;

        let mut peaks = Vec::new();
        for i in local_maxima(&values) {
            let fine = linspace(grid[i - 1], grid[i + 1], 401);
            let fv: Vec<f64> = fine.iter().map(|&w| self.sbb(w)).collect::<Result<_>>()?;
            let j = (1..fv.len() - 1).max_by(|&a, &b| fv[a].total_cmp(&fv[b])).unwrap_or(1);
            let (omega, value) = parabolic_peak([fine[j - 1], fine[j], fine[j + 1]], [fv[j - 1], fv[j], fv[j + 1]]);
            peaks.push(Peak { omega, value });
        }
        let top = peaks.iter().fold(0.0f64, |m, p| m.max(p.value));
        peaks.retain(|p| p.value > 1e-3 * top);

        let splitting = if peaks.len() >= 2 {
            let mut by_height = peaks.clone();
            by_height.sort_by(|a, b| b.value.total_cmp(&a.value));
            Some((by_height[0].omega - by_height[1].omega).abs())
        } else {
            None
        };
        let regime = if peaks.len() >= 2 { CouplingRegime::Strong } else { CouplingRegime::Weak };
        Ok(ModeSplitting { peaks, splitting, regime })
    }
}

pub fn susceptibilities(wp: &WorkingPoint, noise: &DiffusionSet, omega: f64) -> Result<SusceptibilitySet> {
    PhononModel::new(wp, noise, false)?.susceptibilities(omega)
}

pub fn sbb(wp: &WorkingPoint, noise: &DiffusionSet, omega: f64, include_fpar: bool) -> Result<f64> {
    PhononModel::new(wp, noise, include_fpar)?.sbb(omega)
}

pub fn integrate_phonon_number(wp: &WorkingPoint, noise: &DiffusionSet, include_fpar: bool) -> Result<PhononIntegral> {
    PhononModel::new(wp, noise, include_fpar)?.integrate(1e-8)
}

pub fn mode_splitting(wp: &WorkingPoint, noise: &DiffusionSet) -> Result<ModeSplitting> {
    PhononModel::new(wp, noise, false)?.mode_splitting()
}
