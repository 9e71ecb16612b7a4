use thiserror::Error;

/// Errors raised by the library. Check failures (an invariant that was
/// computed and found violated) are reported in result structs, not here.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("exponent must be at least 1")]
    ZeroExponent,

    #[error("modulus {p}^{n} does not fit in 64 bits")]
    ModulusOverflow { p: u64, n: u32 },

    #[error("table of size {size} exceeds the enumeration limit {limit}")]
    TableTooLarge { size: u64, limit: u64 },

    #[error("index {index} out of range for a table of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Smith form requested on {cols} columns, cap is {cap}")]
    SmithCapExceeded { cols: usize, cap: usize },

    #[error("r = {r} is not coprime to the level {level}")]
    NotCoprime { r: u64, level: u64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
