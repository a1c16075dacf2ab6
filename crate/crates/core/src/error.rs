//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A^dag| = {asymmetry:.3e} exceeds {tol:.3e}")]
    NonHermitian { asymmetry: f64, tol: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue {min_eig:.3e}")]
    NotPsd { min_eig: f64 },

    #[error("strict mode requires a positive definite operator (min eigenvalue {min_eig:.3e})")]
    SingularStrict { min_eig: f64 },

    #[error("support violation: {0}")]
    SupportViolation(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("size cap exceeded: requested dimension {requested} > cap {cap}")]
    SizeCap { requested: usize, cap: usize },

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergent(String),

    #[error("set is not finitely generated: {0}")]
    NotFinitelyGenerated(String),

    #[error("no element of the set supports the state (Assumption 2 fails)")]
    NoSupportElement,

    #[error("solver did not converge: {0}")]
    NotConverged(String),

    #[error("fixed-point iteration diverged after {iterations} iterations (residual {residual:.3e})")]
    FixpointDiverged { iterations: usize, residual: f64 },

    #[error("rate {rate} outside the admissible window ({lo:.6} , {hi:.6})")]
    RateOutOfWindow { rate: f64, lo: f64, hi: f64 },

    #[error("optimizer is not certified: certificate gap {gap:.3e} exceeds tolerance {tol:.3e}")]
    OptimizerNotCertified { gap: f64, tol: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error at {field}: {message}")]
    Validation { field: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Exit-code class used by the CLI: 2 for input/validation problems,
    /// 3 for numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::QuadratureNonConvergent(_)
            | Error::NotConverged(_)
            | Error::FixpointDiverged { .. }
            | Error::OptimizerNotCertified { .. } => 3,
            _ => 2,
        }
    }
}
