use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation, or a
    /// violated theorem precondition.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    /// Refusal to build a table or enumerate a space above the configured limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
