use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Variants split into two groups that callers (the CLI in particular) treat
/// differently: contract violations on the inputs, and numerical breakdown.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error(
        "matrix is not Hermitian (relative asymmetry {asymmetry:.3e} exceeds {tolerance:.1e})"
    )]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator has a nontrivial kernel (smallest singular value {sigma_min:.3e})")]
    KernelNontrivial { sigma_min: f64 },

    #[error("matrix is numerically singular (smallest singular value {sigma_min:.3e})")]
    Singular { sigma_min: f64 },

    #[error("{0} lies in the spectrum")]
    InSpectrum(String),

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("eigensolver did not converge")]
    NoConvergence,
}

impl Error {
    /// True for failures that indicate numerical breakdown rather than a
    /// violated precondition on the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::Factorization(_) | Error::NoConvergence
        )
    }

    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
