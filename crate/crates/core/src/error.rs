use thiserror::Error;

/// Errors raised by the library.
///
/// Variants are grouped by cause so the CLI can map them onto exit codes:
/// [`Error::Usage`] is a caller mistake (exit 2), everything else is a
/// mathematical or capacity failure on otherwise well-formed input (exit 1).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undefined input: {0}")]
    UndefinedInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UndefinedInput(_) => "undefined_input",
            Error::Domain(_) => "domain",
            Error::Capacity(_) => "capacity",
            Error::Usage(_) => "usage",
            Error::NotInvertible(_) => "not_invertible",
            Error::Hypothesis(_) => "hypothesis",
            Error::Parse(_) => "parse",
        }
    }

    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_) | Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn capacity<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Capacity(msg.into()))
}
