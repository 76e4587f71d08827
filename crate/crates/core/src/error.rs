use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime (got {0})")]
    InvalidPrime(u64),

    #[error("operation is undefined at zero")]
    ZeroInput,

    /// Not enough digits of the square root were available to certify
    /// the digits of exponents `lowest..=highest`.
    #[error(
        "precision exhausted: {available} digits of the square root cannot certify exponents {lowest}..={highest} (need {needed})"
    )]
    PrecisionExhausted {
        lowest: i64,
        highest: i64,
        needed: usize,
        available: usize,
    },

    #[error("{0} has no square root in Q_{1}")]
    NotASquare(String, u64),

    #[error("{0} is not a positive non-square integer")]
    InvalidRadicand(String),

    #[error("division by zero while folding the continued fraction at depth {0}")]
    DivisionByZero(usize),

    #[error("epsilon {eps} outside the admissible range (0, {max}]")]
    EpsilonOutOfRange { eps: String, max: String },

    #[error("triple at index {0} is not palindromic: A_n != B_(n-1)")]
    NotPalindromic(usize),

    #[error("index {index} out of range (have quotients up to index {available})")]
    IndexOutOfRange { index: usize, available: usize },

    #[error("solutions must be sorted by strictly increasing B (violated at position {0})")]
    UnsortedInput(usize),

    #[error("expansion must start with b0 = 0 (found {0})")]
    NonzeroB0(String),

    #[error("partial quotient b_{index} = {value} is not a valid p-adic partial quotient: {reason}")]
    InvalidQuotient {
        index: usize,
        value: String,
        reason: String,
    },

    #[error("invalid minimal polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Unsupported(String),
}
