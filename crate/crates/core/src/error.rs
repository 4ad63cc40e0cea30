use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} exceeds cap: {needed} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u64,
        needed: u64,
    },

    #[error("no convergence after {iterations} iterations ({detail})")]
    NonConvergence { iterations: usize, detail: String },

    #[error("base graph is disconnected")]
    Disconnected,

    #[error("method not applicable: {0}")]
    NotApplicable(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
