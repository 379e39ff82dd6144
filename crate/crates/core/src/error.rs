use thiserror::Error;

/// Errors raised by the library.
///
/// `Faithfulness` is special: it means a structure the extraction argument
/// guarantees was not found, which can only be an implementation defect.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertices must be strictly increasing, got ({0}, {1}, {2})")]
    Ordering(usize, usize, usize),

    #[error("index {index} out of range (limit {limit})")]
    Bounds { index: usize, limit: usize },

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("unknown fixture `{0}`")]
    Lookup(String),

    #[error("set of {0} vertices exceeds the localized witness scope of 14")]
    Scope(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("witness certification failed: {0}")]
    Witness(String),

    #[error("faithfulness violation: {0}")]
    Faithfulness(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
