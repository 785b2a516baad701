use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's inputs was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A graph or label file could not be ingested.
    #[error("{path}:{line}: {message}")]
    Ingestion {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A k-order run would exceed the configured tuple budget.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn ingestion(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Ingestion {
            path: path.into(),
            line,
            message: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 2 usage, 3 runtime/resource.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            _ => 3,
        }
    }
}
