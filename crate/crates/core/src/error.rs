use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("point is infeasible: violation {violation:.3e} exceeds tolerance")]
    Infeasible { violation: f64 },
    #[error("empty set")]
    EmptySet,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("model file: line {line}: {message}")]
    Model { line: usize, message: String },
    #[error("enumeration cap of {0} exceeded")]
    CapExceeded(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
