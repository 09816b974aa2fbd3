use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("variable tag mismatch: {0}")]
    TagMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("configuration rejected: {0}")]
    Degenerate(String),
    #[error("point is a base point of the net: {0}")]
    BasePoint(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("no stable presentation within {0} window extensions")]
    NotStabilized(usize),
    #[error("io: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
