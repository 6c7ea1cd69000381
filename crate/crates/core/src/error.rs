use std::fmt;

use thiserror::Error;

/// Position in a text input, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed code: {0}")]
    MalformedCode(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: Position, msg: String },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("stale move site: {0}")]
    StaleSite(String),
    #[error("canonicalization overflow after {states} states while reducing term {term}")]
    CanonicalizationOverflow { term: String, states: usize },
    #[error("refused: {0}")]
    ScaleLimit(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("relator {relator} is not sent to the identity")]
    Homomorphism { relator: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos: Position { line, column }, msg: msg.into() }
    }

    /// Budget and overflow outcomes are inconclusive rather than failures.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::CanonicalizationOverflow { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
