use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("line {line}: {msg}")]
    ParseAt { line: usize, msg: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("points are not in general position")]
    NotGeneralPosition,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("scale guard: {what} is {actual}, limit {limit}")]
    ScaleGuard { what: String, limit: usize, actual: usize },

    #[error("unsupported shape: {0}")]
    Shape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(what: &str, limit: usize, actual: usize) -> Result<()> {
    if actual > limit {
        Err(Error::ScaleGuard { what: what.to_string(), limit, actual })
    } else {
        Ok(())
    }
}
