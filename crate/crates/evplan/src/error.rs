//! Crate-wide error type.

use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub enum Error {
    /// Filesystem failure (missing file, unwritable directory).
    Io { path: PathBuf, source: std::io::Error },
    /// Malformed input file; `line` is 1-based (0 = whole file).
    Parse { file: String, line: usize, message: String },
    /// Inputs parsed but violate a model invariant.
    Validation(String),
    /// No feasible plan exists or was found.
    Infeasible(String),
    /// Bad argument to a library operation.
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io { path, source } => write!(f, "{}: {}", path.display(), source),
            Error::Parse { file, line, message } => {
                if *line > 0 {
                    write!(f, "{file}:{line}: {message}")
                } else {
                    write!(f, "{file}: {message}")
                }
            }
            Error::Validation(msg) => write!(f, "validation: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn parse(file: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse { file: file.into(), line, message: message.into() }
    }

    /// Process exit code per the CLI contract: 1 validation, 2 infeasible, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Parse { .. } | Error::InvalidInput(_) => 1,
            Error::Infeasible(_) => 2,
            Error::Io { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
