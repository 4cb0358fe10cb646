use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid stabilizer group: {0}")]
    InvalidGroup(String),

    #[error("regions belong to different lattices")]
    LatticeMismatch,

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("infeasible construction: {0}")]
    Infeasible(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("too many qubits for a dense state: {qubits} > {max}")]
    TooManyQubits { qubits: usize, max: usize },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("unknown model: {0}")]
    UnknownModel(String),
}
