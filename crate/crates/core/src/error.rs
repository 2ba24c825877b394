use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("form is not homogeneous: found terms of degree {first} and {other}")]
    NotHomogeneous { first: u32, other: u32 },
    #[error("requested {requested} monomials of degree {degree}, only {available} available")]
    Capacity {
        degree: u32,
        requested: usize,
        available: usize,
    },
    #[error("invalid degree vector: {0}")]
    DegreeVector(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("forms are not a regular sequence")]
    NotRegular,
    #[error("generators are not minimal: {0}")]
    NonMinimal(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("generation failed after {attempts} attempts: {what}")]
    Generation { attempts: usize, what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
