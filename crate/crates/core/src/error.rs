use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("signal must contain at least one sample")]
    EmptySignal,
    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },
    #[error("insufficient extrema: found {found}, need at least 2")]
    InsufficientExtrema { found: usize },
    #[error(
        "filter wider than signal: half-support {half_support} needs n >= {required}, got {n}"
    )]
    FilterTooWide {
        half_support: usize,
        required: usize,
        n: usize,
    },
    #[error("non-real spectrum: imaginary part {max_imag:e} exceeds tolerance {tolerance:e}")]
    NonRealSpectrum { max_imag: f64, tolerance: f64 },
    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("zero reference: relative error undefined")]
    ZeroReference,
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("reconstruction residual {residual:e} exceeds {tolerance:e}")]
    Reconstruction { residual: f64, tolerance: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
