use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature ({p},{q}): p+q must be at least 2")]
    InvalidSignature { p: usize, q: usize },

    #[error("dimension p+q={n} exceeds the cap of {cap}")]
    DimensionCapExceeded { n: usize, cap: usize },

    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("lambda = {lambda} is singular for this fiber (|det| = {residual:.3e})")]
    SingularPoint { lambda: Complex64, residual: f64 },

    #[error("oracle dimension {dim} exceeds the oracle cap of {cap}")]
    OracleCapExceeded { dim: usize, cap: usize },

    #[error("invalid frame at sample {sample}: {reason}")]
    InvalidFrame { sample: usize, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical routine failed: {0}")]
    Numeric(String),

    #[error("malformed input file: {0}")]
    MalformedInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
