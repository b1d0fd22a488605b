use crate::engine::Agent;

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} axes, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate {coord} is not on the board")]
    OffBoard { coord: String },

    #[error("empty rect: lo {lo} exceeds hi {hi} on axis {axis}")]
    EmptyRect { axis: usize, lo: i64, hi: i64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("rule violation by {agent:?}: {detail}")]
    RuleViolation { agent: Agent, detail: String },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors that should map to CLI exit code 2 (bad configuration,
    /// as opposed to runtime failures).
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::InvalidInput(_) | Error::DimensionMismatch { .. }
        )
    }
}
