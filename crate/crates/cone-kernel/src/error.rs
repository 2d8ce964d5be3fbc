use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
///
/// The variants track how evaluations fail in practice: bad arguments,
/// an accuracy target that could not be met (with the best value obtained),
/// a contour or extraction circle that cannot clear the poles, and requests
/// for an asymptotic expansion on the geometric interface where its
/// hypotheses fail.
#[derive(Debug, Clone, Error)]
pub enum EvalError {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested tolerance was not reached; carries the best estimate.
    #[error("accuracy error: {message} (best estimate {best}, abs err ~{abs_err:.3e})")]
    Accuracy {
        message: String,
        best: Complex64,
        abs_err: f64,
    },

    /// No admissible contour / extraction circle clears the poles.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Evaluation point lies on the interface `η ≡ 0, ±π (mod 2πρ)` where
    /// the asymptotic expansion is invalid.
    #[error("on interface: {0}")]
    OnInterface(String),
}

impl EvalError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        EvalError::Domain(msg.into())
    }

    /// True for the accuracy-failure variant (CLI exit code 3).
    pub fn is_accuracy(&self) -> bool {
        matches!(self, EvalError::Accuracy { .. } | EvalError::Geometry(_))
    }
}

pub type Result<T> = std::result::Result<T, EvalError>;
