//! Photon-number spectra: model builders, matrix route and closed forms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::langevin::{LinearLangevinSystem, Model};
use crate::noise::DiffusionSet;
use crate::steady_state::WorkingPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Matrix,
    ClosedForm,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Matrix => "matrix",
            Method::ClosedForm => "closed_form",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix" => Ok(Method::Matrix),
            "closed_form" => Ok(Method::ClosedForm),
            _ => Err(Error::InvalidParameter(format!("unknown method `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub omega_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub model: Model,
    pub method: Method,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Base covariance of (F_a, F_a†, F_∥), ordered so that entry (k, l) is ⟨F_k F_l⟩.
fn field_inversion_noise(noise: &DiffusionSet, include_fpar: bool) -> DMatrix<Complex64> {
    let mut d = DMatrix::zeros(3, 3);
    d[(0, 1)] = re(noise.d_aad);
    d[(1, 0)] = re(noise.d_ada);
    if include_fpar {
        d[(2, 2)] = re(noise.d_pp);
        d[(0, 2)] = noise.d_apar;
        d[(1, 2)] = noise.d_adpar;
        d[(2, 0)] = noise.d_adpar.conj();
        d[(2, 1)] = noise.d_apar.conj();
    }
    d
}

fn require_seeded(wp: &WorkingPoint, model: Model) -> Result<()> {
    if wp.is_seeded() {
        Ok(())
    } else {
        Err(Error::ModelMismatch(format!("{} needs a seeded working point", model.name())))
    }
}

/// Assemble the linear Langevin system for `model` at `wp`.
///
/// `include_fpar` toggles the inversion noise F_∥ and its cross terms.
pub fn build_system(
    model: Model,
    wp: &WorkingPoint,
    noise: &DiffusionSet,
    include_fpar: bool,
) -> Result<LinearLangevinSystem> {
    let l = &wp.laser;
    let a = wp.a_bar;
    match model {
        Model::Passive => {
            let k = l.kappa;
            let drift = DMatrix::from_row_slice(
                2,
                2,
                &[c(-k, l.delta_lr), re(0.0), re(0.0), c(-k, -l.delta_lr)],
            );
            let mut diffusion = DMatrix::zeros(2, 2);
            diffusion[(0, 1)] = re(DiffusionSet::cavity_plain_dag(wp));
            diffusion[(1, 0)] = re(DiffusionSet::cavity_dag_plain(wp));
            LinearLangevinSystem::new(model, vec!["a", "ad"], drift, diffusion)
        }
        Model::UnseededAdiabatic => {
            if wp.is_seeded() {
                return Err(Error::ModelMismatch(
                    "unseeded_adiabatic needs an unseeded working point".into(),
                ));
            }
            let gp = l.gamma_par;
            let drift = DMatrix::from_row_slice(
                2,
                2,
                &[re(0.0), re(wp.xi * gp / 2.0), re(-2.0 * wp.gain()), re(-gp * (1.0 + wp.xi))],
            );
            let lmap = DMatrix::from_row_slice(
                2,
                3,
                &[re(a), re(a), re(0.0), re(0.0), re(0.0), re(1.0)],
            );
            let diffusion = &lmap * field_inversion_noise(noise, include_fpar) * lmap.transpose();
            LinearLangevinSystem::new(model, vec!["n", "D"], drift, diffusion)
        }
        Model::Seeded => {
            require_seeded(wp, model)?;
            let (kt, dt) = (wp.kappa_tilde, wp.delta_tilde);
            let nw = wp.n_bar * wp.w;
            let drift = DMatrix::from_row_slice(
                3,
                3,
                &[
                    re(-kt),
                    c(0.0, dt),
                    re(nw),
                    c(0.0, dt),
                    re(-kt),
                    c(0.0, nw * l.delta_la / l.gamma_perp),
                    re(-2.0 * wp.gain()),
                    re(0.0),
                    re(-l.gamma_par * (1.0 + wp.xi)),
                ],
            );
            let lmap = DMatrix::from_row_slice(
                3,
                3,
                &[
                    re(a), re(a), re(0.0),
                    re(a), re(-a), re(0.0),
                    re(0.0), re(0.0), re(1.0),
                ],
            );
            let diffusion = &lmap * field_inversion_noise(noise, include_fpar) * lmap.transpose();
            LinearLangevinSystem::new(model, vec!["n", "u", "D"], drift, diffusion)
        }
        Model::FullPolarization => full_polarization_system(wp, noise, include_fpar),
        Model::SeededWithMechanics => mechanics_system(wp, noise, include_fpar),
    }
}

fn full_polarization_system(
    wp: &WorkingPoint,
    noise: &DiffusionSet,
    include_fpar: bool,
) -> Result<LinearLangevinSystem> {
    let l = &wp.laser;
    let bare = noise.bare_polarization()?;
    let (g, a, db) = (l.g, wp.a_bar, wp.d_bar);
    let lower = c(l.gamma_perp, -l.delta_la);
    let upper = lower.conj();
    let p_bar = I * g * db * a / lower;
    let z = re(0.0);
    #[rustfmt::skip]
    let drift = DMatrix::from_row_slice(5, 5, &[
        c(-l.kappa, l.delta_lr), z, -I * g, z, z,
        z, c(-l.kappa, -l.delta_lr), z, I * g, z,
        I * g * db, z, c(-l.gamma_perp, l.delta_la), z, I * g * a,
        z, -I * g * db, z, c(-l.gamma_perp, -l.delta_la), -I * g * a,
        -2.0 * I * g * p_bar.conj(), 2.0 * I * g * p_bar, 2.0 * I * g * a, -2.0 * I * g * a, re(-l.gamma_par),
    ]);

    // Covariance of (F_κ, F_κ†, F_P, F_P†, F_∥,eff).
    let mut cov = DMatrix::zeros(5, 5);
    cov[(0, 1)] = re(DiffusionSet::cavity_plain_dag(wp));
    cov[(1, 0)] = re(DiffusionSet::cavity_dag_plain(wp));
    cov[(2, 3)] = re(bare.plain_dag);
    cov[(3, 2)] = re(bare.dag_plain);
    if include_fpar {
        let p_par = I * noise.d_apar * lower / g;
        let pd_par = -I * noise.d_adpar * upper / g;
        cov[(4, 4)] = re(noise.d_pp);
        cov[(2, 4)] = p_par;
        cov[(3, 4)] = pd_par;
        cov[(4, 2)] = pd_par.conj();
        cov[(4, 3)] = p_par.conj();
    }
    // The printed inversion-noise statistics already contain the part of the
    // polarization noise that adiabatic elimination routes into δD. Subtract
    // it here, since δP now carries that noise explicitly.
    let mut t = DMatrix::identity(5, 5);
    t[(4, 2)] = -2.0 * I * g * a / lower;
    t[(4, 3)] = 2.0 * I * g * a / upper;
    let diffusion = &t * cov * t.transpose();
    LinearLangevinSystem::new(Model::FullPolarization, vec!["a", "ad", "P", "Pd", "D"], drift, diffusion)
}

fn mechanics_system(
    wp: &WorkingPoint,
    noise: &DiffusionSet,
    include_fpar: bool,
) -> Result<LinearLangevinSystem> {
    let l = &wp.laser;
    let m = &wp.mech;
    let (a, kt, dt) = (wp.a_bar, wp.kappa_tilde, wp.delta_tilde);
    let lower = c(l.gamma_perp, -l.delta_la);
    let ga = I * m.coupling * a;
    let pull = -2.0 * wp.gain() * a;
    let z = re(0.0);
    #[rustfmt::skip]
    let drift = DMatrix::from_row_slice(5, 5, &[
        c(-kt, dt), z, l.g * l.g * a / lower, ga, ga,
        z, c(-kt, -dt), l.g * l.g * a / lower.conj(), -ga, -ga,
        re(pull), re(pull), re(-l.gamma_par * (1.0 + wp.xi)), z, z,
        ga, ga, z, c(-m.gamma_m / 2.0, -m.omega_m), z,
        -ga, -ga, z, z, c(-m.gamma_m / 2.0, m.omega_m),
    ]);
    let mut diffusion = DMatrix::zeros(5, 5);
    diffusion
        .view_mut((0, 0), (3, 3))
        .copy_from(&field_inversion_noise(noise, include_fpar));
    diffusion[(3, 4)] = re(noise.d_bbd);
    diffusion[(4, 3)] = re(noise.d_bdb);
    LinearLangevinSystem::new(Model::SeededWithMechanics, vec!["a", "ad", "D", "b", "bd"], drift, diffusion)
}

/// Coefficients of δn in the variables of `sys`.
pub fn number_observable(sys: &LinearLangevinSystem, a_bar: f64) -> Result<Vec<Complex64>> {
    let mut v = vec![re(0.0); sys.dim()];
    match sys.model {
        Model::UnseededAdiabatic | Model::Seeded => v[sys.index("n")?] = re(1.0),
        Model::Passive | Model::FullPolarization | Model::SeededWithMechanics => {
            v[sys.index("a")?] = re(a_bar);
            v[sys.index("ad")?] = re(a_bar);
        }
    }
    Ok(v)
}

/// S_nn(ω) from an assembled system (no stability check).
pub fn snn_from_system(sys: &LinearLangevinSystem, a_bar: f64, omega: f64) -> Result<f64> {
    let v = number_observable(sys, a_bar)?;
    Ok(sys.observable_spectrum(omega, &v, &v)?.re)
}

/// S_nn(ω) for one model, by matrix solve or closed form.
pub fn snn(
    model: Model,
    wp: &WorkingPoint,
    noise: &DiffusionSet,
    omega: f64,
    method: Method,
    include_fpar: bool,
) -> Result<f64> {
    match method {
        Method::Matrix => {
            let sys = build_system(model, wp, noise, include_fpar)?;
            sys.check_stable()?;
            snn_from_system(&sys, wp.a_bar, omega)
        }
        Method::ClosedForm => match model {
            Model::Passive => Ok(snn_passive(wp, omega)),
            Model::UnseededAdiabatic => {
                if wp.is_seeded() {
                    return Err(Error::ModelMismatch(
                        "unseeded_adiabatic needs an unseeded working point".into(),
                    ));
                }
                Ok(snn_unseeded(wp, noise, omega, include_fpar))
            }
            Model::Seeded => {
                require_seeded(wp, model)?;
                if include_fpar {
                    return Err(Error::ModelMismatch(
                        "the seeded closed form neglects the inversion noise".into(),
                    ));
                }
                Ok(snn_seeded(wp, noise, omega))
            }
            Model::FullPolarization | Model::SeededWithMechanics => Err(Error::ModelMismatch(format!(
                "no closed form for {}",
                model.name()
            ))),
        },
    }
}

/// Empty-cavity Lorentzians with vacuum plus blackbody input.
pub fn snn_passive(wp: &WorkingPoint, omega: f64) -> f64 {
    let l = &wp.laser;
    let k2 = l.kappa * l.kappa;
    wp.n_bar
        * (DiffusionSet::cavity_plain_dag(wp) / ((omega + l.delta_lr).powi(2) + k2)
            + DiffusionSet::cavity_dag_plain(wp) / ((omega - l.delta_lr).powi(2) + k2))
}

fn relaxation_denominator(wp: &WorkingPoint, omega: f64) -> f64 {
    let w2 = re(omega * omega);
    let [p, m] = wp.omega_pm;
    ((w2 - p * p) * (w2 - m * m)).re
}

/// Unseeded spectrum. Without F_∥ this is the familiar even form; with it the
/// three inversion-noise terms are added.
pub fn snn_unseeded(wp: &WorkingPoint, noise: &DiffusionSet, omega: f64, include_fpar: bool) -> f64 {
    let gp = wp.laser.gamma_par;
    let xi = wp.xi;
    let den = relaxation_denominator(wp, omega);
    let mut num = (omega * omega + (gp * (1.0 + xi)).powi(2)) * wp.n_bar * (noise.d_aad + noise.d_ada);
    if include_fpar {
        let x = noise.d_apar + noise.d_adpar;
        num += gp * gp * xi * xi / 4.0 * noise.d_pp
            + (1.0 + xi) * xi * gp * gp * wp.a_bar * x.re
            + omega * xi * gp * wp.a_bar * x.im;
    }
    num / den
}

/// Θ(ω) of the seeded spectrum.
pub fn theta(wp: &WorkingPoint, omega: f64) -> Complex64 {
    let l = &wp.laser;
    let (kt, dt) = (wp.kappa_tilde, wp.delta_tilde);
    let s = c(kt, -omega);
    l.gamma_perp * (s * s + dt * dt) * c(l.gamma_par * (1.0 + wp.xi), -omega)
        - 2.0 * wp.n_bar * wp.w * wp.w * wp.d_bar * (l.delta_la * dt - l.gamma_perp * s)
}

/// Λ(ω) = n̄γ⊥²[ω² + γ∥²(1+ξ)²]/|Θ(ω)|².
pub fn lambda(wp: &WorkingPoint, omega: f64) -> f64 {
    let l = &wp.laser;
    wp.n_bar * l.gamma_perp.powi(2) * (omega * omega + (l.gamma_par * (1.0 + wp.xi)).powi(2))
        / theta(wp, omega).norm_sqr()
}

/// Seeded spectrum in closed form, exact for the (δn, δu, δD) model without F_∥.
pub fn snn_seeded(wp: &WorkingPoint, noise: &DiffusionSet, omega: f64) -> f64 {
    let (kt, dt) = (wp.kappa_tilde, wp.delta_tilde);
    lambda(wp, omega)
        * ((omega * omega + dt * dt + kt * kt) * (noise.d_aad + noise.d_ada)
            + 2.0 * omega * dt * (noise.d_ada - noise.d_aad))
}

/// The seeded spectrum with the bracket [(ω²+Δ̃²+κ̃²)(WN_g+2κ) − 4ωΔ̃κ̃].
/// It drops the pump-excess term of the noise asymmetry and the blackbody input.
pub fn snn_seeded_printed(wp: &WorkingPoint, omega: f64) -> f64 {
    let l = &wp.laser;
    let (kt, dt) = (wp.kappa_tilde, wp.delta_tilde);
    lambda(wp, omega)
        * ((omega * omega + dt * dt + kt * kt) * (wp.w * l.n_g + 2.0 * l.kappa) - 4.0 * omega * dt * kt)
}

/// S_nn(ω) with the polarization kept as a dynamical variable.
pub fn snn_full_polarization(wp: &WorkingPoint, noise: &DiffusionSet, omega: f64) -> Result<f64> {
    snn(Model::FullPolarization, wp, noise, omega, Method::Matrix, true)
}

/// Evaluate S_nn over a grid in parallel.
pub fn spectrum_on_grid(
    model: Model,
    wp: &WorkingPoint,
    noise: &DiffusionSet,
    grid: &[f64],
    method: Method,
    include_fpar: bool,
) -> Result<SpectrumResult> {
    let values: Vec<f64> = match method {
        Method::Matrix => {
            let sys = build_system(model, wp, noise, include_fpar)?;
            sys.check_stable()?;
            grid.par_iter()
                .map(|&w| snn_from_system(&sys, wp.a_bar, w))
                .collect::<Result<_>>()?
        }
        Method::ClosedForm => {
            // validate once so that per-point errors can only be model errors
            snn(model, wp, noise, grid.first().copied().unwrap_or(1.0), method, include_fpar)?;
            grid.par_iter()
                .map(|&w| snn(model, wp, noise, w, method, include_fpar))
                .collect::<Result<_>>()?
        }
    };
    Ok(SpectrumResult { omega_grid: grid.to_vec(), values, model, method })
}
