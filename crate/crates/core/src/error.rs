use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus 2 is not supported: its character group is trivial")]
    EvenModulus,
    #[error("segment [{lo}, {hi}) is invalid")]
    InvalidSegment { lo: u64, hi: u64 },
    #[error("segment of {len} entries exceeds the budget of {budget}")]
    SegmentTooLarge { len: u64, budget: u64 },
    #[error("quadrature at t = {t} did not reach {target:e} within {budget} intervals (estimate {estimate:e})")]
    QuadratureBudgetExceeded {
        t: f64,
        target: f64,
        estimate: f64,
        budget: usize,
    },
    #[error("character is principal, so it is not primitive")]
    NonPrimitive,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("{n} is not a unit modulo {q}")]
    NotAUnit { n: u64, q: u64 },
    #[error("no witness of sign {sign:+} for class {a} mod {q} below cap {cap}")]
    CapExceeded { q: u64, a: u64, sign: i8, cap: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
