use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("expected {expected} cell values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("non-finite value at cell {index}")]
    NonFinite { index: usize },
    #[error("cube depth {depth} exceeds grid level {level}")]
    DepthExceedsLevel { depth: u32, level: u32 },
    #[error("cube coordinates {0:?} out of range")]
    InvalidCube(Vec<u32>),
    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),
    #[error("argument must be {expected}, got {value}")]
    InvalidArgument { expected: &'static str, value: f64 },
    #[error("expression is unbounded above on the interval")]
    Unbounded,
    #[error("malformed curve: {0}")]
    MalformedCurve(String),
    #[error("packing is not an antichain: {0}")]
    NotAntichain(String),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("covering precondition violated: |omega| = {omega} exceeds |Q0|/2 = {half}")]
    CoverPrecondition { omega: f64, half: f64 },
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
