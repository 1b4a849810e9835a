use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration infeasible: code rank {rank} exceeds cap {cap}")]
    EnumerationInfeasible { rank: usize, cap: usize },

    #[error("state space infeasible: {qubits} qubits exceeds cap {cap}")]
    StateSpaceInfeasible { qubits: usize, cap: usize },

    #[error("path sum infeasible: {elements} program elements exceeds cap {cap}")]
    PathSumInfeasible { elements: usize, cap: usize },

    #[error("honest proving infeasible at this size: {qubits} qubits exceeds simulator cap {cap}")]
    HonestProvingInfeasible { qubits: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("action mismatch: {0} vs {1}")]
    ActionMismatch(String, String),

    #[error("malformed transcript: {0}")]
    MalformedTranscript(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for the errors that mean "this instance is too large to process".
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::EnumerationInfeasible { .. }
                | Error::StateSpaceInfeasible { .. }
                | Error::PathSumInfeasible { .. }
                | Error::HonestProvingInfeasible { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
