use crate::inverse::SolvabilityReport;

/// Errors shared across the solver modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition was violated (sizes, orderings, ranges).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A sampled time profile does not cover the requested interval.
    #[error("time profile covers [0, {covered}] but [0, {needed}] is required")]
    Coverage { covered: f64, needed: f64 },

    /// A quadrature or series evaluation could not reach its target accuracy.
    #[error("accuracy target not reached: {0}")]
    Accuracy(String),

    /// The snapshot data are incompatible with the null modes; no source
    /// reproduces them. Carries the full per-mode report.
    #[error("no solution: snapshot data violate the orthogonality condition on {} null mode(s)",
            .0.violations().len())]
    NoSolution(Box<SolvabilityReport>),
}

pub type Result<T> = std::result::Result<T, Error>;
