use thiserror::Error;

use crate::series::CoeffRing;

/// Errors raised by series construction, evaluation and verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be 0 (exact) or at least 2")]
    InvalidModulus(u64),

    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: CoeffRing, right: CoeffRing },

    #[error("constant term {value} is not a unit in {ring}")]
    NonUnit { value: String, ring: CoeffRing },

    #[error("index {index} beyond truncation order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("cannot reduce {from} to modulus {to}: {to} does not divide the source modulus")]
    IncompatibleModulus { from: CoeffRing, to: u64 },

    #[error("q-Pochhammer base has exponent 0; the product diverges")]
    DivergentProduct,

    #[error("theta arguments need exponent sum at least 1, got {0}")]
    DegenerateThetaArgs(u64),

    #[error("quadratic exponent {exponent} is negative at n = {n}")]
    NegativeExponent { n: i64, exponent: i64 },

    #[error("exponent arithmetic overflowed")]
    ExponentOverflow,

    #[error("order {0} exceeds the supported maximum 2^20")]
    OrderTooLarge(usize),

    #[error("insufficient order: need {required}, series has {available}")]
    InsufficientOrder { required: usize, available: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} is not congruent to 7 modulo 8")]
    NotSevenModEight(u64),

    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),

    #[error("argument must be positive, got {0}")]
    NonPositive(i64),

    #[error("sigma({arg}) = {sigma} is not divisible by 3")]
    SigmaNotDivisible { arg: u64, sigma: u64 },

    #[error("invalid claim: {0}")]
    InvalidClaim(String),

    #[error("unknown identity '{0}'")]
    UnknownIdentity(String),

    #[error(transparent)]
    Parse(#[from] crate::expr::ParseError),

    #[error("cache I/O error: {0}")]
    Cache(String),

    #[error("{context}: {source}")]
    Context { context: String, source: Box<Error> },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Error {
        Error::Context { context: context.into(), source: Box::new(self) }
    }

    /// The innermost error beneath any context layers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
