use thiserror::Error;

/// Errors produced by the numerical layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("boundary mass ratio {ratio:.3e} exceeds threshold {threshold:.1e}")]
    BoundaryMass { ratio: f64, threshold: f64 },

    #[error("curve continuation failed: {0}")]
    Continuation(String),

    #[error("gradient norm {0:.3e} too small at curve node")]
    DegenerateGradient(f64),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
