use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cyclic factor order must be at least 1, got {0}")]
    InvalidModulus(usize),
    #[error("divisor_count requires n >= 1, got {0}")]
    NonPositive(i64),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("operands belong to different groups ({left} vs {right})")]
    SpecMismatch { left: String, right: String },
    #[error("connection set contains the identity element")]
    IdentityInConnectionSet,
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("connection set must be non-empty and avoid 0")]
    InvalidConnectionSet,
    #[error("coloring is not a Cayley partition")]
    NotCayleyPartition,
    #[error("input of size {size} exceeds the limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("integer overflow in group ring arithmetic")]
    Overflow,
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error("check failed: {0}")]
    Violation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            column,
            message: message.into(),
        }
    }
}
