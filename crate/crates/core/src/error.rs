use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("division by a value that is zero to precision O(p^{0})")]
    DivisionByZero(i64),

    #[error("expected a unit, got valuation {0}")]
    NotAUnit(i64),

    #[error("value is indistinguishable from zero at absolute precision {0}")]
    PrecisionExhausted(i64),

    #[error("series argument must have positive valuation, got {0}")]
    OutsideDisc(i64),

    #[error("value has negative valuation {0} and no residue mod p")]
    NotIntegral(i64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("refinement condition has length {got}, expected {expected}")]
    IndexMismatch { expected: usize, got: usize },

    #[error("depth {0} exceeds the configured maximum {1}")]
    DepthTooLarge(usize, usize),

    #[error("localisation map would have {0} terms, above the limit {1}")]
    TooManyTerms(u128, u128),

    #[error("{0} is not S-integral for the given S")]
    NotSIntegral(String),

    #[error("point is a cusp or has a zero denominator: {0}/{1}")]
    InvalidPoint(i128, i128),

    #[error("arithmetic overflow while enumerating S-units")]
    Overflow,

    #[error("pole of the Möbius map hit")]
    Pole,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
