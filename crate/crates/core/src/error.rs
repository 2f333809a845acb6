use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("point outside the domain: {0}")]
    Domain(String),
    #[error("accuracy target not met: {0}")]
    Accuracy(String),
    /// A mathematically guaranteed identity failed numerically.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error stream.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::NotPositiveDefinite(_) => "definiteness",
            Error::Domain(_) => "domain",
            Error::Accuracy(_) => "accuracy",
            Error::Inconsistent(_) => "internal-inconsistency",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn definiteness(msg: impl Into<String>) -> Self {
        Error::NotPositiveDefinite(msg.into())
    }
}
