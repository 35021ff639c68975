use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while loading tables or evaluating subsets.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("missing value in column `{column}` at row {row}")]
    MissingValue { column: String, row: usize },

    #[error("feature mask is empty")]
    EmptyMask,

    #[error("mask length {got} does not match feature count {expected}")]
    MaskLength { expected: usize, got: usize },

    #[error("feature `{0}` is real-valued; crisp regions need nominal features")]
    NotNominal(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid score matrix: {0}")]
    Scores(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
