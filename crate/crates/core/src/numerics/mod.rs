//! Self-contained numerical building blocks: special functions, quadrature
//! and derivative-free maximization.

pub mod hyp2f1;
pub mod optim;
pub mod quad;
pub mod special;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use hyp2f1::{reg_hyp2f1, reg_hyp2f1_real};
pub use optim::{maximize, maximize_fn, OptimSpec};
pub use quad::{quad, quad_nd, quad_real_line, quad_semi_infinite, quad_tail, Estimate, QuadValue};
pub use special::{erf, erfc, ln_factorial, ln_gamma, sinc};

/// Tolerances and budget for the integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on adaptive bisections (or panels, for oscillatory tails).
    pub max_subdivisions: usize,
    /// Spacing of the zeros of an oscillating factor, used to cut semi-infinite ranges.
    pub oscillation_period: Option<f64>,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            oscillation_period: None,
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(domain("quadrature tolerances must be strictly positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(domain("max-subdivisions must be at least 1"));
        }
        Ok(())
    }

    /// Same tolerances, with the oscillation period set.
    pub fn with_period(self, period: f64) -> Self {
        QuadSpec {
            oscillation_period: Some(period),
            ..self
        }
    }

    /// Same tolerances, no oscillation period.
    pub fn smooth(self) -> Self {
        QuadSpec {
            oscillation_period: None,
            ..self
        }
    }

    /// Tolerances scaled down by `factor`, for inner integrals of nested quadrature.
    pub fn tighter(self, factor: f64) -> Self {
        QuadSpec {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..self
        }
    }
}

/// Outcome of a maximization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimResult {
    pub argmax: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}
