use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An input lies outside the domain where an identity or check applies.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("budget exceeded: {what} requires {required}, limit is {limit}")]
    Budget {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("instance has no source label")]
    UnknownSource,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn dimension(expected: usize, found: usize) -> Self {
        Error::Dimension { expected, found }
    }
}
