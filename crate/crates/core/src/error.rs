use thiserror::Error;

/// Largest admissible |rho|. The stationary variance diverges at the unit root.
pub const STATIONARITY_MARGIN: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rho = {rho} violates the stationarity bound |rho| <= 1 - 1e-9")]
    NonStationary { rho: f64 },
    #[error("sigma must be finite and > 0, got {0}")]
    InvalidSigma(f64),
    #[error("mu must be finite, got {0}")]
    InvalidMu(f64),
    #[error("sample length n must be >= 2, got {0}")]
    SampleTooShort(usize),
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("path was simulated with different parameters")]
    ParamsMismatch,
    #[error("degenerate sample: all values identical, variance is zero")]
    DegenerateSample,
    #[error("matrix is not positive definite (pivot {pivot} = {value})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("quadratic form matrix is not symmetric")]
    NotSymmetric,
    #[error("degrees of freedom must be finite and > 0, got {0}")]
    InvalidDof(f64),
    #[error("quadrature did not converge: estimated error {error:e} after {intervals} subintervals")]
    QuadratureFailed { error: f64, intervals: usize },
    #[error("bandwidth must be finite and > 0, got {0}")]
    InvalidBandwidth(f64),
    #[error("empty input")]
    EmptyInput,
    #[error("non-finite sample value at position {0}")]
    NonFinite(usize),
    #[error("{0} must be >= 1")]
    ZeroCount(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
