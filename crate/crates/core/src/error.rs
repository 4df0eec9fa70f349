use thiserror::Error;

use crate::words::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeisError {
    #[error("invalid word: {0}")]
    BadWord(String),

    #[error("invalid diagram: {0}")]
    BadDiagram(String),

    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: Word, found: Word },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A layer handed to the restricted engine lies outside the semisimple fragment.
    #[error("diagram is not in the restricted fragment: {0}")]
    NonRestrictedInput(String),

    /// The engine produced a non-restricted normal form. Must never fire.
    #[error("reduction left the restricted fragment: {0}")]
    InternalNonClosure(String),

    #[error("bubbles cannot be written as a slice word")]
    UnsupportedBubbles,

    #[error("atom `{0}` is not available in restricted mode")]
    NonRestrictedAtom(String),

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("type error: {0}")]
    Type(String),
}

pub type Result<T> = std::result::Result<T, HeisError>;
