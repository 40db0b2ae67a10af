use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("source set is empty")]
    EmptySources,

    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("estimated size {estimated} exceeds budget {budget}")]
    SizeBudget { estimated: u64, budget: u64 },

    #[error("generation failed: {0}")]
    GenerationFailure(String),

    #[error("oracle violated its promise: {0}")]
    OracleViolation(String),

    #[error("graph is not (strongly) connected")]
    Disconnected,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
