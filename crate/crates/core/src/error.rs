use thiserror::Error;

/// Errors raised by the library.
///
/// The variants are grouped the way the command-line front end maps them to
/// exit codes: malformed input, violated mathematical hypotheses, and
/// exhausted resource budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("invalid group parameters: {0}")]
    InvalidGroup(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("element cap of {cap} exceeded while {context}")]
    CapExceeded { cap: usize, context: String },

    #[error("rounding still ambiguous at truncation order {max_order}: {detail}")]
    AdaptiveDepthExceeded { max_order: usize, detail: String },

    #[error("window invariant violated: {0}")]
    Window(String),

    #[error("not enough data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
