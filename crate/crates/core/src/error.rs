use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero polynomial has no well-defined root count")]
    ZeroPolynomial,
    #[error("quadratic has no rational roots (discriminant {0} is not a perfect square)")]
    IrrationalRoots(String),
    #[error("leading coefficient must be nonzero")]
    DegenerateQuadratic,
    #[error("slot {slot} out of range for a tree of arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("position {0} is not an internal edge")]
    NotAnInternalEdge(usize),
    #[error("expected {expected}, got a tree with {mu} mu-vertices and {xi} xi-vertices")]
    WrongTreeShape {
        expected: &'static str,
        mu: usize,
        xi: usize,
    },
    #[error("trees built over different n ({0} vs {1})")]
    MismatchedN(usize, usize),
    #[error("malformed tree code {code:?}: {reason}")]
    MalformedCode { code: String, reason: String },
    #[error("n must be at least 2 (got {0})")]
    InvalidN(usize),
    #[error("budget exceeded: {what} needs {needed} items, cap is {cap}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        cap: u128,
    },
    #[error("series has nonzero constant term")]
    NonzeroConstantTerm,
    #[error("series is not invertible: linear coefficient is zero")]
    NotInvertible,
    #[error("series support violates the arity constraint at exponent {0}")]
    ArityConstraint(usize),
    #[error("malformed series input: {0}")]
    MalformedSeries(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ranks disagree across primes: {0}")]
    PrimeDisagreement(String),
    #[error("not enough terms: need {needed}, have {have}")]
    NotEnoughTerms { needed: usize, have: usize },
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
