use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One broken catalog constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Where in the document, e.g. `archetypes[2].move_pool`.
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown content id `{0}`")]
    UnknownContent(String),
    #[error("catalog failed validation ({} violation(s)): {}", .0.len(), join(.0))]
    Validation(Vec<Violation>),
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Errors returned by engine operations. A rejected operation never changes
/// the state it was given.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("`{op}` is not allowed in phase {phase}")]
    PhaseViolation { op: &'static str, phase: String },
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
    #[error("unknown content id `{0}`")]
    UnknownContent(String),
    #[error("illustration already attached for this round")]
    AlreadyAttached,
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("plan already submitted this turn")]
    AlreadySubmitted,
    #[error("both plans must be submitted before resolving")]
    NotReady,
    #[error("replay diverged at entry {index}: {reason}")]
    ReplayMismatch { index: usize, reason: String },
}

/// Fieldless classification of [`GameError`], used for counting and on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorKind {
    CatalogError,
    PhaseViolation,
    InvalidSelection,
    UnknownContent,
    AlreadyAttached,
    InvalidPlan,
    AlreadySubmitted,
    NotReady,
    ReplayMismatch,
}

impl ErrorKind {
    pub const ALL: [ErrorKind; 9] = [
        ErrorKind::CatalogError,
        ErrorKind::PhaseViolation,
        ErrorKind::InvalidSelection,
        ErrorKind::UnknownContent,
        ErrorKind::AlreadyAttached,
        ErrorKind::InvalidPlan,
        ErrorKind::AlreadySubmitted,
        ErrorKind::NotReady,
        ErrorKind::ReplayMismatch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::CatalogError => "CatalogError",
            ErrorKind::PhaseViolation => "PhaseViolation",
            ErrorKind::InvalidSelection => "InvalidSelection",
            ErrorKind::UnknownContent => "UnknownContent",
            ErrorKind::AlreadyAttached => "AlreadyAttached",
            ErrorKind::InvalidPlan => "InvalidPlan",
            ErrorKind::AlreadySubmitted => "AlreadySubmitted",
            ErrorKind::NotReady => "NotReady",
            ErrorKind::ReplayMismatch => "ReplayMismatch",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl GameError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            GameError::Catalog(_) => ErrorKind::CatalogError,
            GameError::PhaseViolation { .. } => ErrorKind::PhaseViolation,
            GameError::InvalidSelection(_) => ErrorKind::InvalidSelection,
            GameError::UnknownContent(_) => ErrorKind::UnknownContent,
            GameError::AlreadyAttached => ErrorKind::AlreadyAttached,
            GameError::InvalidPlan(_) => ErrorKind::InvalidPlan,
            GameError::AlreadySubmitted => ErrorKind::AlreadySubmitted,
            GameError::NotReady => ErrorKind::NotReady,
            GameError::ReplayMismatch { .. } => ErrorKind::ReplayMismatch,
        }
    }
}
