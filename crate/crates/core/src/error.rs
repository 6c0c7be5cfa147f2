use thiserror::Error;

/// Domain errors raised by the laced computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n must be at least 1")]
    EmptyInput,
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("p = {p} is not the least prime >= n = {n} (expected {expected})")]
    WrongModulus { n: usize, p: usize, expected: usize },
    #[error("input has {got} bits but n = {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coordinate {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid bit character {0:?} (expected '0' or '1')")]
    InvalidBit(char),
    #[error("size {size} exceeds the enumeration limit {limit}; use the DP method")]
    EnumerationLimit { size: usize, limit: usize },
    #[error("residue {value} is outside [0, {p})")]
    ResidueOutOfRange { value: usize, p: usize },
    #[error("residue set contains the value {0} more than once")]
    DuplicateResidue(usize),
    #[error("cycle types are only enumerated for 1 <= k <= {cap}, got k = {k}")]
    TypeCap { k: usize, cap: usize },
    #[error("character expansion left an imaginary residue of {residual:e} (tolerance {tolerance:e})")]
    NumericalFault { residual: f64, tolerance: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
