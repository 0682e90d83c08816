use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid carrier parameter: {0}")]
    InvalidParameter(String),
    #[error("polynomial {0:?} is reducible")]
    Reducible(Vec<u32>),
    #[error("element {0} is not primitive (multiplicative order {1}, expected {2})")]
    NotPrimitive(String, u64, u64),
    #[error("element is not a member of the carrier: {0}")]
    NotInCarrier(String),
    #[error("operands live in different semirings")]
    SemiringMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("p-adic precision loss: {0}")]
    PrecisionLoss(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("carrier {0} is not finitely enumerable")]
    NotEnumerable(String),
    #[error("no closed form registered for carrier {0}")]
    NoClosedForm(String),
    #[error("enumeration of {needed} items exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("operation requires a ring (additive inverses) but {0} has none")]
    NotARing(String),
    #[error("operation requires a field: {0}")]
    NotAField(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("group algebra is not normalisable: {0}")]
    NotNormalisable(String),
    #[error("non-normalised component: {0}")]
    NonNormalised(String),
    #[error("map is not invariant under decoherence")]
    NotDecoherent,
    #[error("positive element {0} has no recorded norm decomposition")]
    NoDecomposition(String),
    #[error("invalid hiding oracle: {0}")]
    InvalidOracle(String),
    #[error("model exceeds size bound: {0}")]
    SizeBound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
