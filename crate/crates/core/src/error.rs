use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {point:?} is outside the domain {dims:?}")]
    OutOfDomain { point: Vec<i64>, dims: Vec<usize> },

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed input at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}
