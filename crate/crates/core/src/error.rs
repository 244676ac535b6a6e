use thiserror::Error;

use crate::formula::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("resource guard exceeded: {what} needs 2^{needed_bits} steps, guard is 2^{guard_bits}")]
    GuardExceeded {
        what: String,
        needed_bits: u32,
        guard_bits: u32,
    },

    #[error("fresh name `{0}` already occurs in the input")]
    NameClash(String),

    #[error("neighborhood frame is not monotone: {0}")]
    NotMonotone(String),

    #[error("relation is not full: {0}")]
    NotFull(String),

    #[error("relation is not a total function: {0}")]
    NotFunction(String),

    #[error("relation is not a bisimulation: {0}")]
    NotBisimulation(String),

    #[error("world set is not a cone: {0}")]
    NotCone(String),

    #[error("operation requires a neighborhood frame")]
    KripkeUnsupported,

    #[error("unsupported formula: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown case `{0}`")]
    UnknownCase(String),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
