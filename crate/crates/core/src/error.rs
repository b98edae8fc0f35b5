use thiserror::Error;

use crate::word::Letter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("letter {letter} at position {position} is not in the alphabet {{{a},{b}}}")]
    LetterOutsideAlphabet {
        letter: Letter,
        position: usize,
        a: Letter,
        b: Letter,
    },

    /// A run longer than `b`; no closure exists.
    #[error("run {run} has length {length} > b = {b}; the word has no closure")]
    NotClosable {
        run: usize,
        length: usize,
        b: Letter,
    },

    #[error("run {run} of length {length} violates differentiability")]
    NotDifferentiable { run: usize, length: usize },

    #[error("word is not closurely differentiable: {0}")]
    NotCloselyDifferentiable(Box<Error>),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("certification failure: {0}")]
    CertificationFailure(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
