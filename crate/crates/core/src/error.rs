use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    /// A caller broke a documented precondition.
    #[error("logic error: {0}")]
    Logic(String),
    #[error("brute force refused: {alive} alive vertices exceeds the limit of {limit}")]
    TooLarge { alive: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
