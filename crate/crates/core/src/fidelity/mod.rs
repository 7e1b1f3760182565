//! Fidelity between the sinc biphoton state and its Gaussian-family
//! approximations, and the search for the factors that maximize it.
//!
//! Three settings are covered:
//!
//! * spatial (monochromatic signal and idler): closed forms for the
//!   Gaussian, super-Gaussian and cosine-Gaussian shapes, and a quadrature
//!   oracle for every family;
//! * spectral (collection modes at `q ~ 0`) with a Gaussian pump pulse;
//! * spatio-temporal, with the full phase mismatch.
//!
//! The spectral and spatio-temporal settings only support the Gaussian family.

mod closed;
mod search;
mod spatial;
mod spectral;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::model::{ApproxSpec, CrystalOptics, Family, PumpSpec};
use crate::numerics::QuadSpec;

pub(crate) use closed::self_overlap;
pub use closed::{
    closed_form, fidelity_cosinegaussian_closed, fidelity_gaussian_closed, fidelity_supergaussian_closed,
    norm_constants,
};
pub use search::{default_bounds, optimize_factors, pulse_duration_grid, sweep, SweepAxis, SweepPoint};
pub use spatial::{fidelity_spatial_oracle, fidelity_spatial_physical, pump_fourier_origin, spatial_overlaps, SpatialOverlaps};
pub use spectral::{fidelity_spatiotemporal_oracle, fidelity_spectral_oracle, is_degenerate, pump_ratio, regime, Regime};

/// How a fidelity was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Oracle,
}

/// Which degrees of freedom the compared states resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Spatial,
    Spectral,
    SpatioTemporal,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Spatial => "spatial",
            Mode::Spectral => "spectral",
            Mode::SpatioTemporal => "spatio-temporal",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Mode::Spatial, Mode::Spectral, Mode::SpatioTemporal]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| domain(format!("unknown mode '{s}'")))
    }
}

/// One fidelity evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub family: Family,
    pub alpha: f64,
    pub beta: f64,
    pub fidelity: f64,
    pub method: Method,
    /// Propagated quadrature error, for oracle results.
    pub oracle_error: Option<f64>,
}

/// Normalization constants of the sinc state (`sinc`) and the approximated state (`family`).
///
/// Units are `sqrt(m / (rad/m))`, i.e. those of `sqrt(L / k_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormConstants {
    pub sinc: f64,
    pub family: f64,
}

/// Largest excess over 1 attributed to rounding rather than a defect.
const UNIT_SLACK: f64 = 1e-9;

pub(crate) fn check_report(mut r: FidelityReport) -> Result<FidelityReport> {
    if !r.fidelity.is_finite() {
        return Err(Error::Overflow(format!("fidelity evaluated to {}", r.fidelity)));
    }
    if r.fidelity > 1.0 + UNIT_SLACK || r.fidelity < -UNIT_SLACK {
        return Err(Error::Verification(format!("fidelity {} outside [0, 1]", r.fidelity)));
    }
    r.fidelity = r.fidelity.clamp(0.0, 1.0);
    Ok(r)
}

/// Fidelity of `approx` in the given mode.
///
/// Spatial mode uses the closed form when one exists and `prefer` asks for
/// it, and the oracle otherwise.
pub fn fidelity(
    approx: &ApproxSpec,
    mode: Mode,
    opt: &CrystalOptics,
    pump: &PumpSpec,
    spec: &QuadSpec,
    prefer: Method,
) -> Result<FidelityReport> {
    approx.validate()?;
    if approx.family == Family::SincExact {
        return Err(domain("the sinc-exact family has no factors to evaluate"));
    }
    match mode {
        Mode::Spatial => match (prefer, closed_form(approx)) {
            (Method::ClosedForm, Some(f)) => check_report(FidelityReport {
                family: approx.family,
                alpha: approx.alpha,
                beta: approx.effective_beta(),
                fidelity: f?,
                method: Method::ClosedForm,
                oracle_error: None,
            }),
            _ => fidelity_spatial_oracle(approx, spec),
        },
        Mode::Spectral | Mode::SpatioTemporal => {
            if approx.family != Family::Gaussian {
                return Err(domain(format!("{mode} mode supports only the gaussian family, got {}", approx.family)));
            }
            if mode == Mode::Spectral {
                fidelity_spectral_oracle(approx.alpha, opt, pump, spec)
            } else {
                fidelity_spatiotemporal_oracle(approx.alpha, opt, pump, spec)
            }
        }
    }
}
