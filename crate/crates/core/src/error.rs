use thiserror::Error;

/// Errors raised by the expression layer, the geometric operators, the
/// mechanics routines and the Hamilton–Jacobi checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lexical error at byte {offset}: unexpected character {found:?}")]
    Lex { offset: usize, found: char },

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier {name:?} at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("unknown coordinate {0:?} for this chart")]
    UnknownCoordinate(String),

    #[error("domain error in `{expr}`: {reason}")]
    Domain { expr: String, reason: String },

    #[error("chart mismatch: {0}")]
    ChartMismatch(String),

    #[error("1-form has a non-zero dt component; it is outside the image of the interior product")]
    NonZeroDt,

    #[error("singular mass matrix (pivot {pivot:e} below 1e-12)")]
    SingularMassMatrix { pivot: f64 },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("non-finite state at t = {t}; last good state at t = {last_t}: {last_state:?}")]
    NonFiniteState { t: f64, last_t: f64, last_state: Vec<f64> },

    #[error("trajectory is not integrable (max |v - dx/dt| = {max_residual:e})")]
    NonIntegrable { max_residual: f64 },

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
