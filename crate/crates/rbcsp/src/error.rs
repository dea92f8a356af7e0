use std::io;

use thiserror::Error;

/// Crate-wide error type.
///
/// Budget exhaustion is a first-class outcome, not a panic: solvers and
/// enumeration checks report it so experiment harnesses can count timed-out
/// trials separately instead of folding them into success or failure.
#[derive(Debug, Error)]
pub enum Error {
    /// Rejected parameters or an operation applied outside its contract.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A node or enumeration budget ran out before the operation finished.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    /// A malformed instance, hypergraph, or sweep file.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::BudgetExhausted(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExhausted(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
