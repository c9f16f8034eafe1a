use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("target_digits must be at least 1")]
    ZeroDigits,
    #[error("domain error: {message} in `{subtree}`")]
    Domain { message: String, subtree: String },
    #[error("singular input: {0}")]
    SingularInput(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("series is not geometric ({0})")]
    NotGeometric(String),
    #[error("more than {limit} terms needed")]
    MaxTermsExceeded { limit: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("catalog error: {0}")]
    Catalog(String),
}

impl Error {
    pub(crate) fn domain(message: impl Into<String>, subtree: impl Into<String>) -> Self {
        Error::Domain {
            message: message.into(),
            subtree: subtree.into(),
        }
    }
}
