use std::fmt;
use std::path::Path;

/// What went wrong, which decides the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad command line or configuration (exit 1).
    Usage,
    /// Missing or malformed input data (exit 2).
    Data,
    /// Internal invariant violation (exit 3).
    Internal,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 1,
            ErrorKind::Data => 2,
            ErrorKind::Internal => 3,
        }
    }
}

#[derive(Debug)]
pub struct AppError {
    pub kind: ErrorKind,
    pub message: String,
}

pub type AppResult<T> = Result<T, AppError>;

impl AppError {
    pub fn usage(message: impl Into<String>) -> Self {
        AppError { kind: ErrorKind::Usage, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        AppError { kind: ErrorKind::Data, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        AppError { kind: ErrorKind::Internal, message: message.into() }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        AppError::data(format!("{}: {err}", path.display()))
    }

    /// Prefix the message with where it happened.
    pub fn context(mut self, what: impl fmt::Display) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for AppError {}

impl From<veritag_core::Error> for AppError {
    fn from(e: veritag_core::Error) -> Self {
        AppError::data(e.to_string())
    }
}

impl From<csv::Error> for AppError {
    fn from(e: csv::Error) -> Self {
        AppError::data(e.to_string())
    }
}

impl From<serde_json::Error> for AppError {
    fn from(e: serde_json::Error) -> Self {
        AppError::data(e.to_string())
    }
}

/// Attach a path to IO errors.
pub trait IoContext<T> {
    fn at(self, path: &Path) -> AppResult<T>;
}

impl<T> IoContext<T> for std::io::Result<T> {
    fn at(self, path: &Path) -> AppResult<T> {
        self.map_err(|e| AppError::io(path, e))
    }
}
