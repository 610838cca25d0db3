use thiserror::Error;

use crate::key::CorrelatorKey;
use crate::Rational;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A recursion or an exact division produced something that can only
    /// happen if a convention is wrong.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("conflicting values for {key}: cached {existing}, computed {computed}")]
    Conflict {
        key: CorrelatorKey,
        existing: Box<Rational>,
        computed: Box<Rational>,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
