use thiserror::Error;

/// Errors raised by constructions and identity checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("polynomial division left a nonzero remainder")]
    NonZeroRemainder,

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("division by zero in {what} at index {index}")]
    DivisionByZero { what: &'static str, index: i64 },

    #[error("pole at evaluation point: {0}")]
    PoleAtEvaluation(String),

    #[error("degree index {got} too small, need at least {required}")]
    IndexTooSmall { required: usize, got: usize },

    #[error("degenerate coefficient: {0}")]
    DegenerateCoefficient(&'static str),

    #[error("singular system: {0}")]
    SingularSystem(&'static str),

    #[error("root polishing did not converge (worst residual {worst_residual:e})")]
    ConvergenceFailure { worst_residual: f64 },

    #[error("lambda0 is not positive: {0}")]
    NonPositiveLambda0(String),

    #[error("two derivations of {0} disagree")]
    IdentityMismatch(String),

    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
