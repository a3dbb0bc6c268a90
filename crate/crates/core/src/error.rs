use thiserror::Error;

/// Every failure mode of the library. The CLI prints [`Error::name`] on
/// standard error, so variant names are part of the public interface.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation set is not in the supported catalog: {0}")]
    UnsupportedRelationSet(String),
    #[error("bad precision: {0}")]
    BadPrecision(String),
    #[error("operands live in different rings: {0} vs {1}")]
    SpecMismatch(String, String),
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("{0} is not divisible by p^{1}")]
    NotDivisible(String, u32),
    #[error("homomorphism does not respect relation {0}")]
    RelationViolated(String),
    #[error("query unsupported for this carrier: {0}")]
    UnsupportedQuery(String),
    #[error("universal polynomial {op} index {index} is not integral for p = {p}")]
    IntegralityFailure { p: u64, op: String, index: usize },
    #[error("index {index} exceeds the universal polynomial cap {cap}")]
    CapExceeded { index: usize, cap: usize },
    #[error("length underflow: {0}")]
    LengthUnderflow(String),
    #[error("ghost vector is not in the image of the ghost map: {0}")]
    NonIntegralGhost(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("delta depth exceeded at generator {0}")]
    DepthExceeded(String),
    #[error("carrier unsupported: {0}")]
    UnsupportedCarrier(String),
    #[error("orientation is not distinguished: {0}")]
    NotDistinguished(String),
    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("relation cannot be oriented: {0}")]
    NonOrientable(String),
    #[error("enumeration needs {needed} candidates, budget is {budget}")]
    EnumerationBudgetExceeded { needed: u128, budget: u128 },
    #[error("ring does not have characteristic p: {0}")]
    NotCharP(String),
    #[error("not enough series terms: {0}")]
    InsufficientTerms(String),
    #[error("Eisenstein polynomial has degree 1, E' is a unit: {0}")]
    UnramifiedInput(String),
    #[error("ideal is not square-zero: {0}")]
    NotSquareZeroInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Variant name as shown to CLI users.
    pub fn name(&self) -> &'static str {
        match self {
            Error::UnsupportedRelationSet(_) => "UnsupportedRelationSet",
            Error::BadPrecision(_) => "BadPrecision",
            Error::SpecMismatch(..) => "SpecMismatch",
            Error::NotAUnit(_) => "NotAUnit",
            Error::NotDivisible(..) => "NotDivisible",
            Error::RelationViolated(_) => "RelationViolated",
            Error::UnsupportedQuery(_) => "UnsupportedQuery",
            Error::IntegralityFailure { .. } => "IntegralityFailure",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::LengthUnderflow(_) => "LengthUnderflow",
            Error::NonIntegralGhost(_) => "NonIntegralGhost",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::DepthExceeded(_) => "DepthExceeded",
            Error::UnsupportedCarrier(_) => "UnsupportedCarrier",
            Error::NotDistinguished(_) => "NotDistinguished",
            Error::NotEisenstein(_) => "NotEisenstein",
            Error::NonOrientable(_) => "NonOrientable",
            Error::EnumerationBudgetExceeded { .. } => "EnumerationBudgetExceeded",
            Error::NotCharP(_) => "NotCharP",
            Error::InsufficientTerms(_) => "InsufficientTerms",
            Error::UnramifiedInput(_) => "UnramifiedInput",
            Error::NotSquareZeroInput(_) => "NotSquareZeroInput",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
