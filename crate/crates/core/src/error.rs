use thiserror::Error;

/// Errors raised by construction, evaluation and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("{q} is not a prime power")]
    NotPrimePower { q: u64 },
    #[error("{what} = {value} exceeds the exact 64-bit range")]
    TooLarge { what: &'static str, value: u64 },
    #[error("cannot factorize {u}: value must be at least 2")]
    FactorizeDomain { u: u64 },
    #[error("element does not belong to GF({p}^{degree})")]
    ForeignElement { p: u64, degree: usize },
    #[error("the zero element has no multiplicative order")]
    ZeroElement,
    #[error("extension degree {degree} is odd, so GF(p^degree) is not a quadratic extension")]
    OddDegree { degree: usize },
    #[error("subfield order {q} does not match GF({p}^{degree})")]
    SubfieldMismatch { q: u64, p: u64, degree: usize },
    #[error("invalid ruler: {0}")]
    InvalidRuler(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("index {index} out of range for grid of size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("vector length {got} does not match array size {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector spans no line")]
    ZeroVector,
    #[error("Welch bound is vacuous for N = {n} <= M = {m}")]
    VacuousWelch { n: u64, m: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
