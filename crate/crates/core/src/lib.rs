//! Optomechanical cooling by a cavity containing an incoherently pumped
//! two-level gain medium, with and without a coherent seed.
//!
//! Rates and frequencies are angular and in GHz throughout. Spectra are in
//! GHz⁻¹ with the transform F(ω) = ∫F(t)e^{iωt}dt.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons deliberately send NaN down the error path

pub mod cooling;
mod cubic;
pub mod error;
pub mod grid;
pub mod langevin;
pub mod noise;
pub mod optimize;
pub mod params;
pub mod phonon;
pub mod quadrature;
pub mod spectra;
pub mod steady_state;

pub use error::{Error, Result};
pub use langevin::{LinearLangevinSystem, Model};
pub use noise::{diffusion_coefficients, DiffusionSet};
pub use params::{DriveSpec, LaserParams, MechanicsParams};
pub use spectra::{Method, SpectrumResult};
pub use steady_state::{derive_working_point, WorkingPoint};
