//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty corpus")]
    EmptyCorpus,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate dialog id '{0}'")]
    DuplicateId(String),

    #[error("dialog '{0}' has no turns")]
    EmptyDialog(String),

    #[error("unknown dialog id '{0}'")]
    UnknownId(String),

    #[error("matrix dimension mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },

    #[error("matrices have different label order")]
    LabelMismatch,

    #[error("k must be in 1..n: got k={k} with n={n}")]
    InvalidK { k: usize, n: usize },

    #[error("invalid file format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
