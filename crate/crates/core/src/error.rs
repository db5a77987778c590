use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: String,
        domain: &'static str,
    },

    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("scaling check: {0}")]
    Scaling(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: impl ToString, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value: value.to_string(),
            domain,
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
