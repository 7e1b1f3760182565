//! Decomposition of the Gaussian-approximated biphoton state into
//! Laguerre-Gauss signal and idler modes.
//!
//! For the Gaussian and cosine-Gaussian shapes the coincidence amplitude
//! `C^{l, l_s, l_i}_{p, p_s, p_i}` is a finite sum of regularized
//! hypergeometric functions ([`amplitude`]). A direct transverse quadrature
//! ([`amplitude_oracle`]) cross-checks it for low orders. Modes are written in
//! transverse momentum, normalized over the plane.

mod analytic;
mod modes;
mod oracle;
mod table;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub use analytic::{
    amplitude, amplitude_analytic, amplitude_conjugate, amplitude_sum, amplitude_sum_conjugate, coefficient_block,
    state_norm,
};
pub use modes::{lg_mode, t_coeff};
pub use oracle::amplitude_oracle;
pub use table::{amplitude_table, schmidt_number, spiral_spectrum, AmplitudeTable, SchmidtReport, TableEntry};

/// Signal and idler collection modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeIndices {
    pub p_signal: u32,
    pub oam_signal: i32,
    pub p_idler: u32,
    pub oam_idler: i32,
    /// Collection-mode waists (m).
    pub waist_signal: f64,
    pub waist_idler: f64,
}

impl ModeIndices {
    pub fn new(p_signal: u32, oam_signal: i32, p_idler: u32, oam_idler: i32, waist_signal: f64, waist_idler: f64) -> Result<Self> {
        let m = ModeIndices {
            p_signal,
            oam_signal,
            p_idler,
            oam_idler,
            waist_signal,
            waist_idler,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, w) in [("signal", self.waist_signal), ("idler", self.waist_idler)] {
            if !(w > 0.0 && w.is_finite()) {
                return Err(domain(format!("{name} waist must be positive, got {w}")));
            }
        }
        Ok(())
    }

    /// Same modes with both OAM indices negated.
    pub fn mirrored(&self) -> Self {
        ModeIndices {
            oam_signal: -self.oam_signal,
            oam_idler: -self.oam_idler,
            ..*self
        }
    }

    /// Signal and idler roles exchanged.
    pub fn swapped(&self) -> Self {
        ModeIndices {
            p_signal: self.p_idler,
            oam_signal: self.oam_idler,
            p_idler: self.p_signal,
            oam_idler: self.oam_signal,
            waist_signal: self.waist_idler,
            waist_idler: self.waist_signal,
        }
    }
}

/// `H`, `D`, `B` of the amplitude sum (m^2; complex for a complex factor).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientBlock {
    pub h: Complex64,
    pub d: Complex64,
    pub b: Complex64,
}

impl CoefficientBlock {
    /// Hypergeometric argument `D^2 / (H B)`; its modulus is below 1 whenever `Re alpha > 0`.
    pub fn argument(&self) -> Complex64 {
        self.d * self.d / (self.h * self.b)
    }
}
