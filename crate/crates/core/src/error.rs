use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown object '{0}'")]
    UnknownObject(String),
    #[error("unknown arrow '{0}'")]
    UnknownArrow(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable '{0}'")]
    Unbound(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("rank too low: {0}")]
    RankTooLow(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a bounded membership formula: {0}")]
    NotDelta0(String),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
