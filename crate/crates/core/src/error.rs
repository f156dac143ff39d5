use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: invalid character {found:?} (expected '0' or '1')")]
    Parse {
        line: usize,
        column: usize,
        found: char,
    },
    #[error("sequence length {0} exceeds the supported maximum of {max}", max = crate::bitseq::MAX_LEN)]
    TooLong(usize),
    #[error("{op}: sequence of length {len} is too short (needs at least {min})")]
    TooShort {
        op: &'static str,
        len: usize,
        min: usize,
    },
    #[error("differential sequence has odd weight and no preimage")]
    OddWeight,
    #[error("{what} {value} out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: i128,
        range: String,
    },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exhaustive limit exceeded: n = {n} > {limit}")]
    LimitExceeded { n: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
