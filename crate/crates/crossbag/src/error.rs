//! Error type shared across the pipeline.
//!
//! Every error carries enough context to be printed as a one-line diagnostic
//! (stage name, file, line number where applicable). The CLI maps error kinds
//! to exit codes: usage errors exit 1, data/format errors exit 2, internal
//! errors exit 3.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Command line misuse: unknown flag, missing argument, conflicting modes.
    #[error("{0}")]
    Usage(String),

    /// Malformed or inconsistent input data.
    #[error("{0}")]
    Data(String),

    /// Underlying I/O failure.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A bug or impossible state.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Prefix the message with the pipeline stage that raised it.
    pub fn in_stage(self, stage: &str) -> Self {
        match self {
            Error::Usage(m) => Error::Usage(format!("{stage}: {m}")),
            Error::Data(m) => Error::Data(format!("{stage}: {m}")),
            Error::Io { path, source } => {
                Error::Data(format!("{stage}: {}: {source}", path.display()))
            }
            Error::Internal(m) => Error::Internal(format!("{stage}: {m}")),
        }
    }

    /// Process exit code for this error kind.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Data(_) | Error::Io { .. } => 2,
            Error::Internal(_) => 3,
        }
    }
}
