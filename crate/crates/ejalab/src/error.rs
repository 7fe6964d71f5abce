use thiserror::Error;

/// Errors produced by algebra construction, element arithmetic, and solvers.
#[derive(Debug, Error)]
pub enum EjaError {
    #[error("invalid algebra dimensions: {0}")]
    InvalidDimension(String),
    #[error("algebra mismatch between operands")]
    AlgebraMismatch,
    #[error("coordinate length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),
    #[error("eigenvalue iteration did not converge: off-diagonal norm {off_norm:.3e} after {sweeps} sweeps")]
    EigenNonConvergence { off_norm: f64, sweeps: usize },
    #[error("invalid Jordan frame: {0}")]
    InvalidFrame(String),
    #[error("unsupported spectral-set variant for this operation: {0}")]
    UnsupportedVariant(String),
    #[error("base point is not a member of the spectral set (distance {0:.3e})")]
    NotInSet(f64),
    #[error("callback failed permutation-invariance validation: {0}")]
    NotSymmetric(String),
    #[error("gradient oracle disagrees with finite differences: {0}")]
    BadGradient(String),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, EjaError>;
