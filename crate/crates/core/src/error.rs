use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input shape: parse failures, mismatched variables, unknown identifiers.
    Usage,
    /// A mathematical precondition does not hold (p = 2, non-unit constant term, ...).
    Precondition,
    /// An enumeration or truncation budget would be exceeded.
    Budget,
}

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    #[error("exponent vector has length {got}, expected {expected}")]
    ExponentLength { expected: usize, got: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("constant term is not 1")]
    NonUnitConstant,

    #[error("inner series has nonzero constant term")]
    NonzeroConstantTerm,

    #[error("series does not start with t (linear coefficient must be 1)")]
    LeadingCoefficientNotOne,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("ghost vector is not integral: division by {index} is not exact at index {index}")]
    NotIntegral { index: usize },

    #[error("coefficient is not integral: {0}")]
    NonIntegralCoefficient(String),

    #[error("insufficient length: need {needed}, have {available}")]
    InsufficientLength { needed: usize, available: usize },

    #[error("insufficient truncation: need order {needed}, have {available}")]
    InsufficientTruncation { needed: usize, available: usize },

    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("curves live over different logarithms")]
    AmbientMismatch,

    #[error("ambient formal group law is not multiplicative (a_{0} != 1)")]
    NotMultiplicative(usize),

    #[error("degree condition violated: {0}")]
    DegreeCondition(String),

    #[error("unknown family '{0}'")]
    UnknownFamily(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("p = 2 is not supported (2 is inverted in the base ring)")]
    EvenPrime,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("family '{0}' is not a family of elliptic curves")]
    NonElliptic(String),

    #[error("enumeration budget exceeded: {needed} points requested, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("no bundled Picard-Fuchs operator for family '{0}'")]
    NoOperator(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            VariableMismatch(_)
            | ExponentLength { .. }
            | Parse { .. }
            | UnknownFamily(_)
            | InvalidArgument(_)
            | NoOperator(_)
            | LengthMismatch(..) => ErrorClass::Usage,
            BudgetExceeded { .. } => ErrorClass::Budget,
            _ => ErrorClass::Precondition,
        }
    }
}
