use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("slot {slot} out of range 1..={max}")]
    InvalidSlot { slot: u64, max: u64 },

    #[error("invalid trace at step {step}: choice {choice} outside 1..={max}")]
    InvalidTrace { step: usize, choice: u64, max: u64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown node label {0}")]
    UnknownLabel(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("enumeration budget exceeded: {count} trees > cap {cap}")]
    BudgetExceeded { count: String, cap: u64 },

    #[error("invalid node selector: {0}")]
    InvalidSelector(String),

    #[error("empty sample")]
    EmptySample,

    #[error("root tracking failed: {0}")]
    RootTracking(String),
}

pub type Result<T> = std::result::Result<T, Error>;
