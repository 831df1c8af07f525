//! Error type shared by every module in the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, ModelError>;

/// Failure modes of model evaluation, integration and fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// An input violates a physical or numeric domain requirement.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature hit its subdivision budget before reaching the
    /// requested relative tolerance. Carries the best available estimate.
    #[error(
        "quadrature did not converge: achieved {achieved:.3e} relative \
         (requested {requested:.3e}) after {subdivisions} subdivisions; \
         best estimate {estimate}"
    )]
    NonConvergence {
        estimate: Complex64,
        achieved: f64,
        requested: f64,
        subdivisions: usize,
    },

    /// The analytic gamma-function route cannot deliver the accuracy the
    /// caller needs; evaluate by quadrature instead.
    #[error("analytic path lost accuracy ({achieved:.3e} relative); fall back to quadrature")]
    AccuracyLoss { achieved: f64 },

    /// The fit design matrix cannot resolve the named parameter.
    #[error("parameter `{parameter}` is not identifiable: {reason}")]
    Unidentifiable {
        parameter: &'static str,
        reason: String,
    },

    /// Malformed or inconsistent data handed to an estimator or simulator.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
