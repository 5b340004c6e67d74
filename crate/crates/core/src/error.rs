use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("subset index {bits:#b} is not a nonempty subset of {n} variables")]
    InvalidIndex { bits: u64, n: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("no value supplied for real variable `{0}`")]
    MissingReal(String),
    #[error("probability table is not normalized (total mass {0})")]
    NotNormalized(f64),
    #[error("probability table is malformed: {0}")]
    MalformedPmf(String),
    #[error("linear program failed: {0}")]
    SolverFailure(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("contexts do not match: {0}")]
    ContextMismatch(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("rule violation at step {step}: {reason}")]
    RuleViolation { step: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
