use thiserror::Error;

/// Errors raised by the library. Degenerate mathematical states (singular or
/// isotrivial curves) are reported through result flags, not through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not an odd prime below 2^32")]
    NotOddPrime(u64),
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("constant polynomial where positive degree is required")]
    ConstantPolynomial,
    #[error("curve is singular (discriminant vanishes identically)")]
    Singular,
    #[error("curve is isotrivial")]
    Isotrivial,
    #[error("enumeration of {requested} items exceeds the budget of {budget}")]
    BudgetExceeded { requested: u128, budget: u128 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
