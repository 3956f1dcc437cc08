use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("series has zero constant term and is not invertible")]
    NotInvertible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot add weight fractions of degree {left} and {right}")]
    DegreeMismatch { left: i64, right: i64 },
    #[error("pole at V = 0")]
    PoleAtVZero,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("basis cone {0} does not give a unimodular basis")]
    SingularBasis(usize),
    #[error("{0:?} is not a primitive collection")]
    NotPrimitive(Vec<usize>),
    #[error("{lambda:?} is not a partition of {b}")]
    NotAPartition { b: u32, lambda: Vec<u32> },
    #[error("Losev-Manin classes live on different spaces (b = {left} vs b = {right})")]
    LightPointMismatch { left: u32, right: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
