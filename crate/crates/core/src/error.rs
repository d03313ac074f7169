use thiserror::Error;

/// Errors raised by the numeric kernels.
///
/// Conditions that a criterion checker can diagnose (a vanishing center
/// derivative, an empty degree band, ...) are reported as a failing
/// [`CriterionReport`](crate::CriterionReport) instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({0}) lies outside the open bidisc")]
    OutsideBidisc(String),
    #[error("radius component {0} is not positive and finite")]
    DegenerateRadius(f64),
    #[error("evaluator failed at {point}: {message}")]
    EvaluatorFailure { point: String, message: String },
    #[error("family `{0}` has no derivative rule")]
    UnsupportedFamily(String),
    #[error("skeleton or polydisc with center ({center}) and radii ({radii}) leaves the open bidisc")]
    SkeletonOutsideDomain { center: String, radii: String },
    #[error("invalid sample count {count}: {reason}")]
    InvalidSampleCount { count: usize, reason: &'static str },
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("coefficient sequence has no nonzero entry")]
    NoNonzeroCoefficient,
    #[error("radius search did not stop within {0} iterations")]
    IterationOverrun(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("value overflows the integer range: {0}")]
    Overflow(String),
}

impl Error {
    /// True for violations of an operation precondition, as opposed to
    /// failures that happen during evaluation.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::EvaluatorFailure { .. } | Error::IterationOverrun(_) | Error::Overflow(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
