//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("assignment is missing node {0}")]
    PartialAssignment(String),

    #[error("instance is structurally invalid: {0}")]
    InvalidInstance(String),

    #[error("cyclic dependency through nodes [{}]", .0.join(", "))]
    CyclicDependency(Vec<String>),

    #[error("unsupported gate set for this operation: {0}")]
    UnsupportedGateSet(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
