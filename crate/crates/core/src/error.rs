use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("group enumeration exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("multiplier {multiplier} is not a unit modulo {modulus}")]
    BadMultiplier { multiplier: u64, modulus: u64 },

    #[error("p = {p} exceeds the enumeration guard of {max}")]
    ScaleGuard { p: u64, max: u64 },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
