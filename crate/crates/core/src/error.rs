use thiserror::Error;

use crate::geometry::GeneralPositionViolation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    GeneralPosition(#[from] GeneralPositionViolation),
    #[error("expected {expected} crossing values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("crossing {0} does not exist")]
    UnknownCrossing(usize),
    #[error("operation needs every crossing assigned")]
    PartialAssignment,
    #[error("diagram has no crossings")]
    NoCrossings,
    #[error("diagram has no precrossings")]
    NoPrecrossings,
    #[error("invalid bit string: {0}")]
    InvalidBits(String),
    #[error("invalid PD code: {0}")]
    InvalidPdCode(String),
    #[error("constraint system is feasible")]
    NotInfeasible,
    #[error("crossing set overlaps already-assigned crossings {0:?}")]
    InvalidSet(Vec<usize>),
    #[error("invalid generator arguments: {0}")]
    InvalidArgument(String),
    #[error("no valid polygon after {0} attempts")]
    ExhaustedRetries(usize),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid document: {0}")]
    Validation(String),
}
