use thiserror::Error;

use crate::ca::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("background {background} is not a fixed point of rule `{rule}`")]
    NonFixedBackground { rule: String, background: Symbol },

    #[error("configurations live on different domains: {0}")]
    DomainMismatch(String),

    #[error("islands [{0}, {1}] and [{2}, {3}] overlap")]
    OverlappingIslands(i64, i64, i64, i64),

    #[error("window of {size} sites exceeds the brute-force limit of {max}")]
    WindowTooLarge { size: usize, max: usize },

    #[error("enumeration too large: {0}")]
    TooLarge(String),

    #[error("alpha = {0} is not below 1; the tail series diverges")]
    AlphaNotLessThanOne(String),

    #[error("unknown rule `{0}`")]
    UnknownRule(String),

    #[error("invalid rule table: {0}")]
    InvalidRule(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
