use thiserror::Error;

/// Errors raised while validating or computing.
///
/// `Invalid` covers malformed or inconsistent input; `Unsupported` covers
/// well-formed input outside what the library can evaluate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input at {path}: {msg}")]
    Invalid { path: String, msg: String },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    pub fn invalid(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            msg: msg.into(),
        }
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn check(msg: impl Into<String>) -> Self {
        Error::CheckFailed(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
