use thiserror::Error;

/// Errors produced by the series kernel, the constructors, and the drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("exponent {exponent} is not below the truncation {trunc}")]
    OutOfTruncation { exponent: String, trunc: String },
    #[error("derivative would produce a negative exponent from t^{exponent}")]
    NegativeExponent { exponent: String },
    #[error("nonzero coefficient at t^{exponent} is off the grid 1/{denom}")]
    GridViolation { exponent: String, denom: u32 },
    #[error("theta index {i} out of range for k = {k}")]
    IndexOutOfRange { i: u32, k: u32 },
    #[error("length {0} is not a positive multiple of 8")]
    InvalidLength(u64),
    #[error("precision {got} too small, need more than {need}")]
    PrecisionTooSmall { got: String, need: String },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("derivative of F has no sign change on ({lo}, {hi})")]
    NoBracket { lo: f64, hi: f64 },
    #[error("residue {x} out of range for modulus {modulus}")]
    RangeError { x: i64, modulus: u32 },
    #[error("code too large to enumerate: {0} codewords")]
    TooLarge(String),
    #[error("no Type II code of length 8 over Z/{modulus} found after {trials} trials (seed {seed})")]
    SearchExhausted { modulus: u32, seed: u64, trials: u64 },
    #[error("non-integral value where an integer is required: {0}")]
    NonIntegral(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
