use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value falls outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mismatched lengths or column counts.
    #[error("shape error: expected {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    /// The request is well formed but exceeds a built-in table.
    #[error("capacity error: {what} supports at most {limit}, requested {requested}")]
    Capacity {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    /// The operation was called with arguments that can never be valid for it.
    #[error("usage error: {0}")]
    Usage(String),

    /// The result is undefined for this input (e.g. a constant output vector).
    #[error("undefined: {0}")]
    Undefined(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}
