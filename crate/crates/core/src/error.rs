use thiserror::Error;

/// Errors produced by the physics layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pump below threshold: D0 = {d0:e} <= D_th = {d_th:e}")]
    BelowThreshold { d0: f64, d_th: f64 },

    #[error("zero gain: {0}")]
    ZeroGain(&'static str),

    #[error("seeded steady state has {count} positive roots; select a branch")]
    AmbiguousSteadyState { count: usize },

    #[error("requested branch {branch} but only {count} steady states exist")]
    NoSuchBranch { branch: usize, count: usize },

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("linearized system is unstable (max Re eigenvalue = {max_real:e})")]
    Unstable { max_real: f64 },

    #[error("response matrix is singular at omega = {omega:e}")]
    SingularResponse { omega: f64 },

    #[error("unknown variable label `{0}`")]
    UnknownLabel(String),

    #[error("|kappa_tilde| = {kappa_tilde:e} is below the approximation guard {guard:e}")]
    NearSingularKappa { kappa_tilde: f64, guard: f64 },

    #[error("heating configuration: S_nn(omega_m) = {s_plus:e} <= S_nn(-omega_m) = {s_minus:e}")]
    HeatingConfiguration { s_plus: f64, s_minus: f64 },

    #[error("mechanical instability: Gamma_opt + Gamma_m = {total_damping:e} <= 0")]
    MechanicalInstability { total_damping: f64 },

    #[error("no minimum in bounds: {0}")]
    NoMinimumInBounds(String),

    #[error("quadrature did not converge: relative change {rel_change:e} under panel doubling")]
    NonConvergedQuadrature { value: f64, rel_change: f64 },
}

impl Error {
    /// Short name of the variant, used in CLI diagnostics.
    pub fn variant_name(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::BelowThreshold { .. } => "BelowThreshold",
            Error::ZeroGain(_) => "ZeroGain",
            Error::AmbiguousSteadyState { .. } => "AmbiguousSteadyState",
            Error::NoSuchBranch { .. } => "NoSuchBranch",
            Error::ModelMismatch(_) => "ModelMismatch",
            Error::Unstable { .. } => "Unstable",
            Error::SingularResponse { .. } => "SingularResponse",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::NearSingularKappa { .. } => "NearSingularKappa",
            Error::HeatingConfiguration { .. } => "HeatingConfiguration",
            Error::MechanicalInstability { .. } => "MechanicalInstability",
            Error::NoMinimumInBounds(_) => "NoMinimumInBounds",
            Error::NonConvergedQuadrature { .. } => "NonConvergedQuadrature",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
