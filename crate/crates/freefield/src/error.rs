use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the kernel can report.
///
/// Precondition failures (bad input) and invariant violations (something
/// the mathematics guarantees did not happen) are kept apart so front ends
/// can map them to different exit statuses; see [`Error::is_invariant`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inadmissible parameters ({p_plus}, {p_minus}): {reason}")]
    InadmissibleParams {
        p_plus: i64,
        p_minus: i64,
        reason: String,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched discriminants {0} and {1}")]
    DiscMismatch(i64, i64),
    #[error("level {level} beyond truncation {trunc}")]
    BeyondTruncation { level: i64, trunc: usize },
    #[error("label out of range: {0}")]
    OutOfRange(String),
    #[error("non-integral vertex exponent: {0}")]
    NonIntegral(String),
    #[error("incompatible grading: {0}")]
    IncompatibleGrading(String),
    #[error("solution space has dimension {dim}, expected 1 ({context})")]
    SolutionDimension { dim: usize, context: String },
    #[error("consecutive maps compose to a nonzero map at source level {level}")]
    NonzeroComposition { level: usize },
    #[error("divisibility failure: {0}")]
    DivisibilityFailure(String),
    #[error("invalid glue triple: {0}")]
    InvalidTriple(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InadmissibleParams { .. } => "inadmissible_params",
            Error::DivisionByZero => "division_by_zero",
            Error::DiscMismatch(..) => "disc_mismatch",
            Error::BeyondTruncation { .. } => "beyond_truncation",
            Error::OutOfRange(_) => "out_of_range",
            Error::NonIntegral(_) => "non_integral",
            Error::IncompatibleGrading(_) => "incompatible_grading",
            Error::SolutionDimension { .. } => "solution_dimension",
            Error::NonzeroComposition { .. } => "nonzero_composition",
            Error::DivisibilityFailure(_) => "divisibility_failure",
            Error::InvalidTriple(_) => "invalid_triple",
            Error::UnknownName(_) => "unknown_name",
            Error::Invariant(_) => "invariant_violation",
        }
    }

    /// True when the error signals a broken mathematical invariant rather
    /// than a rejected input.
    pub fn is_invariant(&self) -> bool {
        matches!(
            self,
            Error::SolutionDimension { .. }
                | Error::NonzeroComposition { .. }
                | Error::DivisibilityFailure(_)
                | Error::Invariant(_)
        )
    }
}
