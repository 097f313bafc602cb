//! Frequency-domain solution of linear Langevin equations
//! dδx/dt = A δx + F with ⟨F_k(t) F_l(t')⟩ = D_kl δ(t − t').
//!
//! With M(ω) = −iωI − A and the transform F(ω) = ∫F(t)e^{iωt}dt, the
//! spectral matrix is S(ω) = M(ω)⁻¹ D M(−ω)⁻ᵀ.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Which fluctuation model a system was assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Empty cavity at the working-point photon number.
    Passive,
    /// (δn, δD) with clamped inversion.
    UnseededAdiabatic,
    /// (δn, δu, δD) with a coherent seed.
    Seeded,
    /// (δa, δa†, δP, δP†, δD), polarization kept as a dynamical variable.
    FullPolarization,
    /// (δa, δa†, δD, b, b†) with radiation-pressure coupling.
    SeededWithMechanics,
}

impl Model {
    pub const ALL: [Model; 5] = [
        Model::Passive,
        Model::UnseededAdiabatic,
        Model::Seeded,
        Model::FullPolarization,
        Model::SeededWithMechanics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Passive => "passive",
            Model::UnseededAdiabatic => "unseeded_adiabatic",
            Model::Seeded => "seeded",
            Model::FullPolarization => "full_polarization",
            Model::SeededWithMechanics => "seeded_with_mechanics",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown model `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearLangevinSystem {
    pub labels: Vec<&'static str>,
    /// Drift matrix A.
    pub drift: DMatrix<Complex64>,
    /// Diffusion matrix D.
    pub diffusion: DMatrix<Complex64>,
    pub model: Model,
}

impl LinearLangevinSystem {
    pub fn new(
        model: Model,
        labels: Vec<&'static str>,
        drift: DMatrix<Complex64>,
        diffusion: DMatrix<Complex64>,
    ) -> Result<Self> {
        let n = labels.len();
        if drift.shape() != (n, n) || diffusion.shape() != (n, n) {
            return Err(Error::ModelMismatch(format!(
                "{} labels but A is {:?} and D is {:?}",
                n,
                drift.shape(),
                diffusion.shape()
            )));
        }
        Ok(Self { labels, drift, diffusion, model })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| *l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Eigenvalues of the drift matrix.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let schur = nalgebra::linalg::Schur::new(self.drift.clone());
        // A complex Schur form is triangular, so this never returns None.
        schur.eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default()
    }

    /// Largest real part among the eigenvalues of A.
    pub fn max_growth_rate(&self) -> f64 {
        self.eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Errors with `Unstable` when some eigenvalue has Re λ above round-off.
    /// Marginal modes (Re λ = 0, e.g. the free laser phase) are accepted.
    pub fn check_stable(&self) -> Result<()> {
        let scale = self.drift.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let max_real = self.max_growth_rate();
        if max_real > 1e-10 * scale {
            Err(Error::Unstable { max_real })
        } else {
            Ok(())
        }
    }

    /// M(ω) = −iωI − A.
    pub fn response_matrix(&self, omega: f64) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = -&self.drift;
        for i in 0..n {
            m[(i, i)] -= Complex64::new(0.0, omega);
        }
        m
    }

    /// M(ω)⁻¹.
    pub fn susceptibility(&self, omega: f64) -> Result<DMatrix<Complex64>> {
        invert(self.response_matrix(omega), omega)
    }

    /// Full spectral matrix S(ω) = M(ω)⁻¹ D M(−ω)⁻ᵀ.
    pub fn spectrum_matrix(&self, omega: f64) -> Result<DMatrix<Complex64>> {
        let plus = self.susceptibility(omega)?;
        let minus = self.susceptibility(-omega)?;
        Ok(plus * &self.diffusion * minus.transpose())
    }

    /// S_{row,col}(ω) between two labelled variables.
    pub fn spectrum(&self, omega: f64, row: &str, col: &str) -> Result<Complex64> {
        let (i, j) = (self.index(row)?, self.index(col)?);
        let plus = self.susceptibility(omega)?;
        let minus = self.susceptibility(-omega)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..self.dim() {
            for l in 0..self.dim() {
                acc += plus[(i, k)] * self.diffusion[(k, l)] * minus[(j, l)];
            }
        }
        Ok(acc)
    }

    /// Spectrum of linear observables X = Σ left_i δx_i and Y = Σ right_j δx_j,
    /// i.e. ∫⟨X(t) Y(0)⟩e^{iωt}dt.
    pub fn observable_spectrum(
        &self,
        omega: f64,
        left: &[Complex64],
        right: &[Complex64],
    ) -> Result<Complex64> {
        let n = self.dim();
        if left.len() != n || right.len() != n {
            return Err(Error::ModelMismatch(format!(
                "observable of length {}/{} for a {n}-variable system",
                left.len(),
                right.len()
            )));
        }
        let plus = self.susceptibility(omega)?;
        let minus = self.susceptibility(-omega)?;
        // u = leftᵀ M(ω)⁻¹, v = rightᵀ M(−ω)⁻¹, S = u D vᵀ
        let row = |m: &DMatrix<Complex64>, c: &[Complex64], k: usize| {
            (0..n).map(|i| c[i] * m[(i, k)]).sum::<Complex64>()
        };
        let u: Vec<Complex64> = (0..n).map(|k| row(&plus, left, k)).collect();
        let v: Vec<Complex64> = (0..n).map(|l| row(&minus, right, l)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, uk) in u.iter().enumerate() {
            for (l, vl) in v.iter().enumerate() {
                acc += uk * self.diffusion[(k, l)] * vl;
            }
        }
        Ok(acc)
    }
}

fn invert(m: DMatrix<Complex64>, omega: f64) -> Result<DMatrix<Complex64>> {
    let scale = m.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let lu = m.lu();
    let min_pivot = lu.u().diagonal().iter().fold(f64::INFINITY, |a, z| a.min(z.norm()));
    if !(min_pivot > 1e-14 * scale) {
        return Err(Error::SingularResponse { omega });
    }
    lu.try_inverse().ok_or(Error::SingularResponse { omega })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn damped_mode(gamma: f64, omega0: f64, n: f64) -> LinearLangevinSystem {
        // b and b† of a thermal oscillator
        let a = DMatrix::from_row_slice(2, 2, &[c(-gamma / 2.0, -omega0), c(0.0, 0.0), c(0.0, 0.0), c(-gamma / 2.0, omega0)]);
        let d = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(gamma * (n + 1.0), 0.0), c(gamma * n, 0.0), c(0.0, 0.0)]);
        LinearLangevinSystem::new(Model::Passive, vec!["b", "bd"], a, d).unwrap()
    }

    #[test]
    fn thermal_oscillator_lorentzian() {
        let (gamma, omega0, n) = (0.01, 1.0, 5.0);
        let sys = damped_mode(gamma, omega0, n);
        for &w in &[-1.2, -1.0, -0.99, 0.3, 1.0] {
            let s = sys.spectrum(w, "bd", "b").unwrap();
            let expect = gamma * n / ((w + omega0).powi(2) + gamma * gamma / 4.0);
            assert!((s.re - expect).abs() <= 1e-12 * expect);
            assert!(s.im.abs() <= 1e-12 * expect);
        }
    }

    #[test]
    fn zero_noise_gives_zero_spectrum() {
        let mut sys = damped_mode(0.1, 1.0, 3.0);
        sys.diffusion.fill(c(0.0, 0.0));
        let s = sys.spectrum_matrix(0.7).unwrap();
        assert!(s.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn observable_matches_matrix_contraction() {
        let sys = damped_mode(0.1, 1.0, 3.0);
        let l = [c(0.3, 0.1), c(-0.2, 0.5)];
        let r = [c(1.0, 0.0), c(0.0, -1.0)];
        let s = sys.spectrum_matrix(-0.8).unwrap();
        let mut expect = c(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                expect += l[i] * s[(i, j)] * r[j];
            }
        }
        let got = sys.observable_spectrum(-0.8, &l, &r).unwrap();
        assert!((got - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn stability_and_labels() {
        let sys = damped_mode(0.1, 1.0, 3.0);
        assert!(sys.check_stable().is_ok());
        assert!((sys.max_growth_rate() + 0.05).abs() < 1e-12);
        let mut bad = sys.clone();
        bad.drift[(0, 0)] = c(0.02, -1.0);
        assert!(matches!(bad.check_stable(), Err(Error::Unstable { .. })));
        assert_eq!(sys.index("x"), Err(Error::UnknownLabel("x".into())));
    }

    #[test]
    fn marginal_mode_is_singular_at_zero_frequency() {
        let a = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        let d = DMatrix::identity(2, 2);
        let sys = LinearLangevinSystem::new(Model::UnseededAdiabatic, vec!["x", "y"], a, d).unwrap();
        assert!(sys.check_stable().is_ok());
        assert_eq!(sys.spectrum(0.0, "x", "x"), Err(Error::SingularResponse { omega: 0.0 }));
        assert!(sys.spectrum(1e-3, "x", "x").is_ok());
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let a = DMatrix::<Complex64>::zeros(2, 2);
        let d = DMatrix::<Complex64>::zeros(3, 3);
        assert!(matches!(
            LinearLangevinSystem::new(Model::Seeded, vec!["x", "y"], a, d),
            Err(Error::ModelMismatch(_))
        ));
    }
}
