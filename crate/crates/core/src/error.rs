use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps [`Error::Budget`] to its own exit code, so budget overruns
/// are kept distinct from malformed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("group table validation failed: {0}")]
    Validation(String),
    #[error("index {index} out of range (size {size})")]
    OutOfRange { index: usize, size: usize },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
