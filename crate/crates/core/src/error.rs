use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is singular (|det| = {det_abs:e} <= tolerance {tol:e})")]
    SingularMatrix { det_abs: f64, tol: f64 },

    #[error("not a physical state: {0}")]
    NotAState(String),

    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("chi matrix is inconsistent: imaginary residue {residue:e} in transfer matrix")]
    InconsistentChi { residue: f64 },

    #[error("Kraus operators are not trace preserving (completeness residual {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("linear system is ill conditioned (condition number {kappa:e})")]
    IllConditioned { kappa: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
