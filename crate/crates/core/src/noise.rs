//! Langevin-force diffusion coefficients at a working point.
//!
//! `F_a` is the effective field force after adiabatic elimination of the
//! polarization, F_a = F_κ − ig F_γ⊥ / (γ⊥ − iΔ_La). Its two orderings
//! differ, which is what makes the number spectrum asymmetric.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::steady_state::WorkingPoint;

/// Bare polarization-noise strengths ⟨F_γ⊥† F_γ⊥⟩ and ⟨F_γ⊥ F_γ⊥†⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarePolarization {
    pub dag_plain: f64,
    pub plain_dag: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffusionSet {
    /// ⟨F_a F_a†⟩
    pub d_aad: f64,
    /// ⟨F_a† F_a⟩
    pub d_ada: f64,
    /// Atomic (stimulated/spontaneous emission) part of `d_aad`.
    pub d_aad_se: f64,
    /// Atomic part of `d_ada`.
    pub d_ada_se: f64,
    /// ⟨F_∥ F_∥⟩
    pub d_pp: f64,
    /// ⟨F_a F_∥⟩
    pub d_apar: Complex64,
    /// ⟨F_a† F_∥⟩
    pub d_adpar: Complex64,
    /// ⟨F_Γm† F_Γm⟩ = Γ_m n_th
    pub d_bdb: f64,
    /// ⟨F_Γm F_Γm†⟩ = Γ_m (n_th + 1)
    pub d_bbd: f64,
    /// Absent when g = 0.
    pub bare_pol: Option<BarePolarization>,
}

impl DiffusionSet {
    /// ⟨F_κ F_κ†⟩, the vacuum-plus-blackbody cavity input.
    pub fn cavity_plain_dag(wp: &WorkingPoint) -> f64 {
        2.0 * wp.laser.kappa * (wp.laser.n_bb + 1.0)
    }

    /// ⟨F_κ† F_κ⟩
    pub fn cavity_dag_plain(wp: &WorkingPoint) -> f64 {
        2.0 * wp.laser.kappa * wp.laser.n_bb
    }

    pub fn bare_polarization(&self) -> Result<BarePolarization> {
        self.bare_pol
            .ok_or(Error::ZeroGain("bare polarization noise is undefined for g = 0"))
    }
}

pub fn diffusion_coefficients(wp: &WorkingPoint) -> DiffusionSet {
    let l = &wp.laser;
    let w = wp.w;
    let d_bar = wp.d_bar;
    let pump_excess = l.gamma_par / (2.0 * l.gamma_perp) * (l.d0 - d_bar);

    let d_ada_se = w / 2.0 * ((l.n_g + d_bar) + pump_excess);
    let d_aad_se = w / 2.0 * ((l.n_g - d_bar) - pump_excess);
    let d_aad = 2.0 * l.kappa * (l.n_bb + 1.0) + d_aad_se;
    let d_ada = 2.0 * l.kappa * l.n_bb + d_ada_se;

    let d_pp = 2.0 * l.gamma_par * (l.n_g - l.d0 * d_bar / l.n_g);
    let lower = Complex64::new(l.gamma_perp, -l.delta_la);
    let upper = lower.conj();
    let pre = l.gamma_par * l.g * l.g * d_bar * wp.a_bar;
    let d_apar = pre / (lower * lower) * (1.0 - l.d0 / l.n_g);
    let d_adpar = -pre / (upper * upper) * (1.0 + l.d0 / l.n_g);

    let m = &wp.mech;
    // Equivalent to (2γ⊥/W)·D^SE, written without the division by W.
    let bare_pol = (l.g > 0.0).then_some(BarePolarization {
        dag_plain: l.gamma_perp * ((l.n_g + d_bar) + pump_excess),
        plain_dag: l.gamma_perp * ((l.n_g - d_bar) - pump_excess),
    });

    DiffusionSet {
        d_aad,
        d_ada,
        d_aad_se,
        d_ada_se,
        d_pp,
        d_apar,
        d_adpar,
        d_bdb: m.gamma_m * m.n_th,
        d_bbd: m.gamma_m * (m.n_th + 1.0),
        bare_pol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{DriveSpec, LaserParams, MechanicsParams};
    use crate::steady_state::derive_working_point;

    fn laser() -> LaserParams {
        let mut p = LaserParams {
            gamma_perp: 10.0,
            gamma_par: 0.1,
            kappa: 0.1,
            g: 1e-3,
            n_g: 1.0,
            d0: 0.0,
            delta_la: 1.0,
            delta_lr: -1.0,
            n_bb: 0.0,
        };
        let d_th = p.threshold_inversion();
        p.n_g = 1.5 * d_th;
        p.d0 = 1.2 * d_th;
        p
    }

    fn wp(laser: &LaserParams) -> WorkingPoint {
        let mech = MechanicsParams { omega_m: 1.0, gamma_m: 2e-5, n_th: 1e3, coupling: 3e-5 };
        derive_working_point(laser, &mech, &DriveSpec::SeededPhotonNumber { n_target: 1e5 }).unwrap()
    }

    #[test]
    fn fig1_spontaneous_emission_strength() {
        // Independent high-precision evaluation with W = 2e-5/101, D_th = 2κ/W,
        // N_g = 1.5 D_th, D0 = 1.2 D_th, D̄ = D0/(1 + 1e5/n_sat).
        let d = diffusion_coefficients(&wp(&laser()));
        assert!((d.d_ada_se - 0.236_127_659_574_468_1).abs() < 1e-12);
        assert!((d.d_ada_se - 0.23615).abs() / 0.23615 < 2e-4);
        assert_eq!(d.d_ada, d.d_ada_se);
    }

    #[test]
    fn ordering_asymmetry() {
        let l = laser();
        let p = wp(&l);
        let d = diffusion_coefficients(&p);
        let expect = p.w * p.d_bar + p.w * l.gamma_par / (2.0 * l.gamma_perp) * (l.d0 - p.d_bar);
        assert!(((d.d_ada_se - d.d_aad_se) - expect).abs() / expect < 1e-12);
        assert!(((d.d_aad_se + d.d_ada_se) - p.w * l.n_g).abs() / (p.w * l.n_g) < 1e-12);
    }

    #[test]
    fn zero_inversion_is_symmetric() {
        let mut l = laser();
        l.d0 = 0.0;
        let p = wp(&l);
        let d = diffusion_coefficients(&p);
        assert_eq!(p.d_bar, 0.0);
        assert_eq!(d.d_aad_se, d.d_ada_se);
        assert!((d.d_ada_se - p.w * l.n_g / 2.0).abs() < 1e-15);
        assert_eq!(d.d_apar, Complex64::new(0.0, 0.0));
        assert_eq!(d.d_adpar, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn passive_vacuum_input() {
        let mut l = laser();
        l.g = 0.0;
        l.d0 = 0.0;
        let d = diffusion_coefficients(&wp(&l));
        assert_eq!(d.d_aad, 2.0 * l.kappa);
        assert_eq!(d.d_ada, 0.0);
        assert_eq!(d.bare_polarization(), Err(Error::ZeroGain("bare polarization noise is undefined for g = 0")));
    }

    #[test]
    fn blackbody_only_touches_cavity_terms() {
        let l0 = laser();
        let mut l1 = l0;
        l1.n_bb = 0.7;
        let (d0, d1) = (diffusion_coefficients(&wp(&l0)), diffusion_coefficients(&wp(&l1)));
        assert_eq!(d0.d_aad_se, d1.d_aad_se);
        assert_eq!(d0.d_ada_se, d1.d_ada_se);
        assert_eq!(d0.d_pp, d1.d_pp);
        assert!((d1.d_aad - d0.d_aad - 2.0 * l0.kappa * 0.7).abs() < 1e-15);
        assert!((d1.d_ada - d0.d_ada - 2.0 * l0.kappa * 0.7).abs() < 1e-15);
    }

    #[test]
    fn bare_polarization_reconstructs_effective_force() {
        let mut l = laser();
        l.n_bb = 0.3;
        let p = wp(&l);
        let d = diffusion_coefficients(&p);
        let bare = d.bare_polarization().unwrap();
        let weight = l.g * l.g / (l.gamma_perp.powi(2) + l.delta_la.powi(2));
        let rebuilt = DiffusionSet::cavity_dag_plain(&p) + weight * bare.dag_plain;
        assert!((rebuilt - d.d_ada).abs() / d.d_ada < 1e-12);
        let rebuilt = DiffusionSet::cavity_plain_dag(&p) + weight * bare.plain_dag;
        assert!((rebuilt - d.d_aad).abs() / d.d_aad < 1e-12);
        assert!((bare.dag_plain - 2.0 * l.gamma_perp / p.w * d.d_ada_se).abs() / bare.dag_plain < 1e-12);
    }
}
