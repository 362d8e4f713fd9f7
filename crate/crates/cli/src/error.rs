//! Process-level error type; the variant decides the exit code.

use std::fmt;
use std::path::PathBuf;

use crate::snapshot::SnapshotError;

#[derive(Debug)]
pub enum AppError {
    /// Malformed configuration or command line (exit 1).
    Config { line: Option<usize>, key: Option<String>, msg: String },
    /// Solver error; numerical overflow maps to exit 2.
    Core(sqg_core::Error),
    /// Snapshot parse failure (exit 1).
    Snapshot(PathBuf, SnapshotError),
    /// Filesystem failure (exit 1).
    Io(PathBuf, std::io::Error),
}

impl AppError {
    pub fn config(msg: impl Into<String>) -> Self {
        AppError::Config { line: None, key: None, msg: msg.into() }
    }

    pub fn located(line: usize, key: impl Into<String>, msg: impl Into<String>) -> Self {
        AppError::Config { line: Some(line), key: Some(key.into()), msg: msg.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Core(sqg_core::Error::Overflow(_)) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config { line, key, msg } => {
                write!(f, "config error")?;
                if let Some(line) = line {
                    write!(f, " at line {line}")?;
                }
                if let Some(key) = key {
                    write!(f, " (key '{key}')")?;
                }
                write!(f, ": {msg}")
            }
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Snapshot(path, e) => write!(f, "snapshot '{}': {e}", path.display()),
            AppError::Io(path, e) => write!(f, "io error on '{}': {e}", path.display()),
        }
    }
}

impl std::error::Error for AppError {}

impl From<sqg_core::Error> for AppError {
    fn from(e: sqg_core::Error) -> Self {
        AppError::Core(e)
    }
}
