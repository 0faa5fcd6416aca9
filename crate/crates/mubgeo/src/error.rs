use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("d = 2 is excluded (no modular half exists)")]
    IsTwo,
    #[error("d = {0} is too small; need d >= 3")]
    TooSmall(u64),
    #[error("d = {d} exceeds the configured maximum {max}")]
    TooLarge { d: u64, max: u64 },
    #[error("operands live over different dimensions")]
    DimMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("vector dimension {0} is not a perfect square of the base dimension")]
    NotSquareDim(usize),
    #[error("operation requires a Fourier basis label, got CB")]
    WrongBasisKind,
    #[error("residual state is not proportional to any single MUB state")]
    NoMubMatch,
    #[error("state vector is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("parse error: {0}")]
    Parse(String),
}
