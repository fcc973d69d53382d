use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },

    #[error("invalid data: {0}")]
    Validation(String),

    #[error("dataset has no observations")]
    EmptyDataset,

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("external agent: {0}")]
    Protocol(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            field: field.into(),
            message: message.into(),
        }
    }

    /// An I/O error that names the file it concerns.
    pub fn io_at(path: &std::path::Path, err: io::Error) -> Self {
        Error::Io(io::Error::new(err.kind(), format!("{}: {err}", path.display())))
    }

    /// Process exit code used by the command-line tool: 1 for bad input
    /// data or configuration, 2 for I/O and external-agent failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Protocol(_) => 2,
            _ => 1,
        }
    }
}
