use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input data: non-finite entries, non-Hermitian operands, shape mismatch.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A parameter outside its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// LU factorization met a pivot below the singularity threshold.
    #[error("singular matrix: pivot {pivot} has magnitude {magnitude:e}")]
    Singular { pivot: usize, magnitude: f64 },

    /// An operand failed a mathematical precondition, e.g. accretivity.
    #[error("precondition failed: {what} (margin {margin:e})")]
    Precondition { what: String, margin: f64 },

    /// An iteration or quadrature did not reach its tolerance.
    #[error("numeric failure: {what} (residual {residual:e})")]
    NumericFailure { what: String, residual: f64 },

    /// A scalar argument on the branch cut (-inf, 0].
    #[error("argument {0} lies on the branch cut (-inf, 0]")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn numeric(what: impl Into<String>, residual: f64) -> Self {
        Error::NumericFailure {
            what: what.into(),
            residual,
        }
    }

    pub(crate) fn precondition(what: impl Into<String>, margin: f64) -> Self {
        Error::Precondition {
            what: what.into(),
            margin,
        }
    }
}
