use thiserror::Error;

/// Errors raised by the arithmetic kernels.
///
/// Variants fall into three families that callers treat differently:
/// malformed input, precision or budget exhaustion, and mathematical
/// refusals (hypotheses that do not hold for the given data).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ring parameters of the operands differ")]
    ParamsMismatch,
    #[error("division by an element indistinguishable from zero")]
    DivisionByZero,
    #[error("result carries no certified digits")]
    PrecisionExhausted,
    #[error("operation requires a {expected} extension")]
    WrongExtensionKind { expected: &'static str },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("denominator 1 - alpha^m is indistinguishable from zero at the working precision")]
    DenominatorIndistinguishableFromZero,
    #[error("sigma is not diagonal")]
    NotDiagonal,
    #[error("precision budget exceeded: need {needed} digits, have {available}")]
    PrecisionBudgetExceeded { needed: i64, available: i64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("rank cannot be certified: {0}")]
    RankUncertain(String),
    #[error("root isolation inconclusive: {0}")]
    Inconclusive(String),
    #[error("value field does not match the series coefficients")]
    FieldMismatch,
    #[error("field too small: {0}")]
    FieldTooSmall(String),
    #[error("zero image cannot be certified from inexact inputs")]
    PrecisionUncertain,
    #[error("point outside the convergence polydisc: {0}")]
    RadiusViolation(String),
    #[error("membership is only decided for torsion characters")]
    NonTorsionInput,
    #[error("monodromy matrices do not commute")]
    NonCommuting,
    #[error("monodromy matrix is not invertible")]
    NonInvertible,
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("lattice basis is not saturated")]
    NotSaturated,
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

impl Error {
    /// True for failures that mean "undecided at this precision or budget"
    /// rather than malformed input or a refuted hypothesis.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted
                | Error::DivisionByZero
                | Error::DenominatorIndistinguishableFromZero
                | Error::PrecisionBudgetExceeded { .. }
                | Error::RankUncertain(_)
                | Error::Inconclusive(_)
                | Error::PrecisionUncertain
                | Error::BudgetExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
