use thiserror::Error;

/// Errors raised by the model, the solvers and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("solution has {actual} bits, instance has {expected} jobs")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("bit index {index} out of range for {len} jobs")]
    IndexOutOfRange { index: usize, len: usize },

    #[error(
        "makespan bound {bound} does not exceed expected load {expected} on machine {machine}"
    )]
    NonPositiveSlack {
        machine: usize,
        bound: f64,
        expected: f64,
    },

    #[error("enumeration refused: {n} jobs exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("wrong variant: {0}")]
    WrongVariant(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid stop criterion: {0}")]
    InvalidStop(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
