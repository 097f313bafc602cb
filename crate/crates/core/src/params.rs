//! Physical inputs. Every rate and frequency is an angular rate in GHz.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cavity and gain-medium parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserParams {
    /// Polarization decay rate γ⊥.
    pub gamma_perp: f64,
    /// Inversion decay rate γ∥.
    pub gamma_par: f64,
    /// Cavity field decay rate κ.
    pub kappa: f64,
    /// Single-atom coupling g.
    pub g: f64,
    /// Number of gain atoms.
    pub n_g: f64,
    /// Unsaturated inversion (pump strength); negative for an absorber.
    pub d0: f64,
    /// Δ_La = ω_L − ω_a.
    pub delta_la: f64,
    /// Δ_Lr = ω_L − ω_r.
    pub delta_lr: f64,
    /// Blackbody photon number inside the cavity.
    pub n_bb: f64,
}

impl LaserParams {
    pub fn validate(&self) -> Result<()> {
        check(self.gamma_perp > 0.0, "gamma_perp > 0")?;
        check(self.gamma_par > 0.0, "gamma_par > 0")?;
        check(self.kappa > 0.0, "kappa > 0")?;
        check(self.g >= 0.0, "g >= 0")?;
        check(self.n_g > 0.0, "n_g > 0")?;
        check(self.n_bb >= 0.0, "n_bb >= 0")?;
        check(self.d0.abs() <= self.n_g, "|d0| <= n_g")?;
        check(self.delta_la.is_finite(), "delta_la finite")?;
        check(self.delta_lr.is_finite(), "delta_lr finite")?;
        Ok(())
    }

    /// Stimulated emission rate W = 2g²γ⊥/(γ⊥² + Δ_La²).
    pub fn stimulated_emission_rate(&self) -> f64 {
        2.0 * self.g * self.g * self.gamma_perp
            / (self.gamma_perp * self.gamma_perp + self.delta_la * self.delta_la)
    }

    /// Threshold inversion D_th = 2κ/W (infinite when g = 0).
    pub fn threshold_inversion(&self) -> f64 {
        2.0 * self.kappa / self.stimulated_emission_rate()
    }

    /// Saturation photon number n_sat = γ∥/2W (infinite when g = 0).
    pub fn saturation_photon_number(&self) -> f64 {
        self.gamma_par / (2.0 * self.stimulated_emission_rate())
    }
}

/// Mechanical oscillator parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicsParams {
    pub omega_m: f64,
    /// Energy damping rate Γ_m.
    pub gamma_m: f64,
    /// Thermal phonon number of the mechanical bath.
    pub n_th: f64,
    /// Optomechanical coupling G = ω_r x_ZPF / L.
    pub coupling: f64,
}

impl MechanicsParams {
    pub fn validate(&self) -> Result<()> {
        check(self.omega_m > 0.0, "omega_m > 0")?;
        check(self.gamma_m > 0.0, "gamma_m > 0")?;
        check(self.n_th >= 0.0, "n_th >= 0")?;
        check(self.coupling >= 0.0, "coupling >= 0")?;
        Ok(())
    }
}

/// How the cavity is driven.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriveSpec {
    /// Incoherent pump only (free-running laser).
    Unseeded,
    /// Coherent seed of amplitude Ω_s. `branch` selects among multiple
    /// steady states (ascending photon number) in the bistable regime.
    SeededAmplitude { omega_s: f64, branch: Option<usize> },
    /// Coherent seed whose amplitude is chosen to give mean photon number `n_target`.
    SeededPhotonNumber { n_target: f64 },
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DriveSpec::Unseeded => Ok(()),
            DriveSpec::SeededAmplitude { omega_s, .. } => check(omega_s >= 0.0, "omega_s >= 0"),
            DriveSpec::SeededPhotonNumber { n_target } => check(n_target > 0.0, "n_target > 0"),
        }
    }

    pub fn is_seeded(&self) -> bool {
        !matches!(self, DriveSpec::Unseeded)
    }
}

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what.to_string()))
    }
}
