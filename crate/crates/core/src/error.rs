use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("configuration is not generic: {0}")]
    Genericity(String),
    #[error("degenerate construction: {0}")]
    Degenerate(String),
    #[error("simultaneous events at t = {0}")]
    SimultaneousEvents(String),
    #[error("pivot revisited a state: {0}")]
    CycleDetected(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("no bisecting arrangement guaranteed: {0}")]
    ParityZeroNoWitness(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
