use thiserror::Error;

/// Failures reported by the numerical and physical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: estimate {estimate:e} with error {error:e} after {subdivisions} subdivisions")]
    NonConvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    /// A hypergeometric series could not be brought inside its disk of convergence.
    #[error("hypergeometric series diverges: |z| = {modulus}")]
    Divergence { modulus: f64 },

    /// An intermediate quantity left the representable range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// The optimizer used its evaluation budget without meeting the tolerance.
    #[error("optimizer did not converge after {evaluations} evaluations")]
    OptimizerStalled { evaluations: usize },

    /// An internal consistency check (e.g. a self-overlap) failed.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
