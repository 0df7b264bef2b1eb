use std::fmt;

use thiserror::Error;

/// A syntax error in the word or multiplicative-function grammar, or in an
/// element literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input where the problem was detected.
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("element `{element}` is not valid in {group}")]
    InvalidElement { element: String, group: String },

    #[error("integer overflow in group arithmetic")]
    Overflow,

    #[error("invalid group definition: {0}")]
    InvalidGroup(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("argument index {index} out of range for {arity} arguments")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("{what} cap of {cap} exceeded")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("operation requires a finite group")]
    NotFinite,

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("the identity belongs to the target set, so it is already in its closure")]
    IdentityInSet,

    #[error("the group has no non-identity element")]
    TrivialGroup,

    #[error("construction invariant violated: {0}")]
    Invariant(String),

    #[error("{required} completed stages required, only {completed} available")]
    InsufficientStages { required: usize, completed: usize },

    #[error("position {0} is not numbered")]
    Unnumbered(u64),

    #[error("ill-defined generator weights: {0}")]
    IllDefinedWeights(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("snapshot error: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
