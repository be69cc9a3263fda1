use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("real part of the quadratic form is not positive definite (smallest eigenvalue {min_eig:e})")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("chirp matrix must be real symmetric")]
    NonRealChirp,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("amplitude must be non-zero and finite")]
    InvalidAmplitude,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("group mismatch: {0} vs {1}")]
    GroupMismatch(String, String),

    #[error("operation only defined for {0}")]
    UnsupportedGroup(&'static str),

    #[error("grid mismatch")]
    GridMismatch,

    #[error("integrand is not Gaussian-integrable in the analytic coordinates")]
    NotIntegrable,

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("system is not a frame: A/B = {ratio:e}")]
    NotAFrame { ratio: f64 },

    #[error(
        "conjugate gradient did not converge after {iterations} iterations (residual {residual:e})"
    )]
    CgDiverged { iterations: usize, residual: f64 },

    #[error("internal numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
