use std::fmt;

use thiserror::Error;

use crate::formula::Variable;

/// Location-carrying parse failure for DIMACS and the propositional grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line.
    pub line: usize,
    /// 1-based column (in characters).
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("variable {0} does not occur in the formula")]
    UnknownVariable(Variable),
    #[error("variable {0} is not bound by the assignment")]
    UnboundVariable(Variable),
    #[error("formula has {found} variables, brute-force cap is {cap}")]
    TooManyVariables { found: usize, cap: usize },
    #[error("a strong backdoor must be a nonempty variable set")]
    EmptyBackdoorSet,
    #[error("not a strong backdoor: the subsolver rejects under {0}")]
    NotAStrongBackdoor(Box<crate::backdoor::BackdoorFailure>),
    #[error("beta must lie strictly between 0 and 1, got {0}")]
    InvalidBeta(String),
    #[error("the construction needs a formula with at least one variable")]
    ZeroVariableFormula,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("padding would need more than {limit} tail variables")]
    PaddingTooLarge { limit: usize },
    #[error("reduction hook failed: {0}")]
    ReductionHookFailure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
