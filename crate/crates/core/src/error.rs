use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: schema error: {message}")]
    Schema { path: PathBuf, message: String },

    #[error("{path}:{line}: {message}")]
    Row {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("duplicate date {date}")]
    DuplicateDate { date: chrono::NaiveDate },

    #[error("series is empty")]
    EmptySeries,

    #[error("degenerate scale: column has constant value {value}")]
    DegenerateScale { value: f64 },

    #[error("insufficient data: need more than {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("split boundary {boundary} must satisfy {first} <= boundary < {last}")]
    Split {
        boundary: chrono::NaiveDate,
        first: chrono::NaiveDate,
        last: chrono::NaiveDate,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("training diverged at epoch {epoch}")]
    Diverged { epoch: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
