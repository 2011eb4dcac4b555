use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("duplicate document id {id:?} on line {line}")]
    DuplicateId { id: String, line: usize },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("invalid ratios: {0}")]
    InvalidRatios(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector file line {line}: {reason}")]
    VectorFormat { line: usize, reason: String },

    #[error("predictions reference unknown document ids: {}", .0.join(", "))]
    UnknownDocIds(Vec<String>),

    #[error("split has no fold named {0:?}")]
    MissingFold(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
