use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Physics(#[from] lasercool_core::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError::Parse { line, message: message.into() }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        CliError::Validation(message.into())
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Validation(_) => "ValidationError",
            CliError::Physics(e) => e.variant_name(),
            CliError::Io { .. } => "IoError",
        }
    }

    /// 2 for bad input, 3 for physics failures, 4 for non-convergence.
    pub fn exit_code(&self) -> i32 {
        use lasercool_core::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Validation(_) => 2,
            CliError::Physics(E::InvalidParameter(_)) => 2,
            CliError::Physics(E::NonConvergedQuadrature { .. }) => 4,
            CliError::Physics(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::parse(3, "x").exit_code(), 2);
        assert_eq!(CliError::validation("x").exit_code(), 2);
        let e: CliError = lasercool_core::Error::BelowThreshold { d0: 1.0, d_th: 2.0 }.into();
        assert_eq!((e.exit_code(), e.variant_name()), (3, "BelowThreshold"));
        let e: CliError = lasercool_core::Error::NonConvergedQuadrature { value: 1.0, rel_change: 0.1 }.into();
        assert_eq!((e.exit_code(), e.variant_name()), (4, "NonConvergedQuadrature"));
        let e: CliError = lasercool_core::Error::InvalidParameter("kappa > 0".into()).into();
        assert_eq!(e.exit_code(), 2);
    }
}
