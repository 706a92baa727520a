use thiserror::Error;

/// Errors raised when an input violates an operation's preconditions or an
/// internal consistency check trips.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} must be at least 1")]
    ZeroArgument(&'static str),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{value} is not congruent to 1 mod 4")]
    NotOneModFour { value: u64 },
    #[error("{m} is divisible by {q}")]
    DivisibleByModulus { m: u64, q: u64 },
    #[error("{m} has no square root mod {q}")]
    NoSquareRoot { m: u64, q: u64 },
    #[error("{a} is not invertible mod {q}")]
    NotInvertible { a: u64, q: u64 },
    #[error("invalid LPS parameters: {0}")]
    LpsParameters(String),
    #[error("matrix is singular mod {0}")]
    SingularMatrix(u64),
    #[error("generator is not an element of the group")]
    GeneratorNotInGroup,
    #[error("generating set is not closed under inverses")]
    NotSymmetric,
    #[error("graph is empty")]
    EmptyGraph,
    #[error("graph is not {0}-regular")]
    NotRegular(usize),
    #[error("graph has {n} vertices; exhaustive search is limited to {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("invalid continued fraction: {0}")]
    InvalidContinuedFraction(String),
    #[error("continued fraction denominator vanished at depth {0}")]
    ZeroDenominator(usize),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("{0} is outside the open interval (0, 1)")]
    OutsideUnitInterval(String),
    #[error("precision budget exceeded: {0}")]
    Precision(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
