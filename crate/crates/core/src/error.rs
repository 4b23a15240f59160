use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid function table: {0}")]
    Table(String),

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("invalid token sequence: {0}")]
    Tokens(String),

    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: unsupported dataset format {found:?} (expected {expected:?})")]
    Version {
        path: PathBuf,
        found: String,
        expected: String,
    },

    #[error("{path}: content hash mismatch (manifest {expected}, file {found})")]
    HashMismatch {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("invalid dump: {0}")]
    Dump(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// True for errors caused by the filesystem rather than by content.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
