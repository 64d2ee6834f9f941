use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("index {index} is outside the support of the sequence")]
    OutOfSupport { index: i64 },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameters for family `{family}`: {reason}")]
    InvalidParams { family: String, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate V.P. window: [mu n] = {upper} must exceed n = {n}")]
    DegenerateWindow { n: u64, upper: i64 },
    #[error("sample count {m} too small for order {n} (need at least {needed})")]
    TooFewSamples { m: usize, n: u64, needed: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("rate sequence `{0}` must be positive and nonincreasing on the grid")]
    NonMonotoneRate(String),
    #[error("rate check requires f^({r}) in L: derivative series of `{family}` is not absolutely summable")]
    DerivativeNotSummable { family: String, r: u32 },
}
