use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric domain error: {0}")]
    NumericDomain(String),

    #[error("unsupported size {rows}x{cols}: {reason}")]
    UnsupportedSize {
        rows: usize,
        cols: usize,
        reason: String,
    },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("bracket failure: {0}")]
    BracketFailure(String),

    #[error("fit failure: {0}")]
    FitFailure(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown key `{key}` on line {line}")]
    UnknownKey { line: usize, key: String },

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable code used in the CLI error JSON.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NumericDomain(_) => "numeric_domain",
            Error::UnsupportedSize { .. } => "unsupported_size",
            Error::NoSolution(_) => "no_solution",
            Error::BracketFailure(_) => "bracket_failure",
            Error::FitFailure(_) => "fit_failure",
            Error::Parse { .. } => "parse_error",
            Error::UnknownKey { .. } => "unknown_key",
            Error::Validation { .. } => "validation_error",
            Error::Io(_) => "io_error",
        }
    }

    pub fn field(&self) -> Option<&str> {
        match self {
            Error::Validation { field, .. } => Some(field),
            Error::UnknownKey { key, .. } => Some(key),
            _ => None,
        }
    }

    pub(crate) fn validation(field: &str, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
