#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fidelity, FidelityReport, Method, Mode};
use crate::error::{domain, Result};
use crate::model::{ApproxSpec, CrystalOptics, Family, PumpSpec};
use crate::numerics::{maximize, OptimResult, OptimSpec, QuadSpec};

/// Search box for the factors of `family` in `mode`: `[alpha]` or `[alpha, beta]`.
pub fn default_bounds(family: Family, mode: Mode) -> Result<Vec<(f64, f64)>> {
    match (mode, family) {
        (_, Family::SincExact) => Err(domain("the sinc-exact family has no factors to optimize")),
        (Mode::Spatial, Family::Gaussian | Family::SuperGaussian) => Ok(vec![(1e-3, 5.0)]),
        (Mode::Spatial, Family::CosineGaussian) => Ok(vec![(1e-3, 2.0), (0.0, 2.0)]),
        (Mode::Spatial, Family::CosineSuperGaussian) => Ok(vec![(1e-3, 1.0), (0.0, 2.0)]),
        (Mode::Spectral | Mode::SpatioTemporal, Family::Gaussian) => Ok(vec![(0.01, 2.0)]),
        (m, f) => Err(domain(format!("{m} mode supports only the gaussian family, got {f}"))),
    }
}

fn spec_at(family: Family, x: &[f64]) -> ApproxSpec {
    ApproxSpec {
        family,
        alpha: x[0],
        beta: x.get(1).copied().unwrap_or(0.0),
    }
}

/// Maximizes the fidelity over the factors of `family`.
///
/// Spatial mode uses the closed form where one exists and the oracle
/// otherwise. A result with `converged = false` is returned, not an error,
/// when the evaluation budget runs out.
pub fn optimize_factors(
    family: Family,
    mode: Mode,
    opt: &CrystalOptics,
    pump: &PumpSpec,
    spec: &QuadSpec,
    optim: &OptimSpec,
) -> Result<OptimResult> {
    let bounds = default_bounds(family, mode)?;
    maximize(
        |x| fidelity(&spec_at(family, x), mode, opt, pump, spec, Method::ClosedForm).map(|r| r.fidelity),
        &bounds,
        optim,
    )
}

/// Quantity varied by [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    Alpha,
    Beta,
    /// Pump pulse duration `t_0` in seconds.
    PulseDuration,
}

/// One row of a sweep: the swept coordinate and either a report or the error it raised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub coordinate: f64,
    pub report: Option<FidelityReport>,
    pub error: Option<String>,
    /// True when the error came from a numerical procedure rather than invalid input.
    pub numerical_failure: bool,
}

#[allow(clippy::too_many_arguments)]
fn evaluate(
    base: &ApproxSpec,
    mode: Mode,
    axis: SweepAxis,
    x: f64,
    opt: &CrystalOptics,
    pump: &PumpSpec,
    spec: &QuadSpec,
    prefer: Method,
) -> SweepPoint {
    let mut approx = *base;
    let mut pump = *pump;
    match axis {
        SweepAxis::Alpha => approx.alpha = x,
        SweepAxis::Beta => approx.beta = x,
        SweepAxis::PulseDuration => pump.pulse_duration = x,
    }
    match fidelity(&approx, mode, opt, &pump, spec, prefer) {
        Ok(r) => SweepPoint {
            coordinate: x,
            report: Some(r),
            error: None,
            numerical_failure: false,
        },
        Err(e) => SweepPoint {
            coordinate: x,
            report: None,
            error: Some(e.to_string()),
            numerical_failure: e.is_numerical(),
        },
    }
}

/// Evaluates the fidelity at every grid value of `axis`, in grid order.
///
/// Points are independent; a failing point is recorded and the sweep goes on.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    base: &ApproxSpec,
    mode: Mode,
    axis: SweepAxis,
    grid: &[f64],
    opt: &CrystalOptics,
    pump: &PumpSpec,
    spec: &QuadSpec,
    prefer: Method,
) -> Result<Vec<SweepPoint>> {
    if grid.is_empty() {
        return Err(domain("sweep grid is empty"));
    }
    if base.family == Family::SincExact {
        return Err(domain("the sinc-exact family has no factors to sweep"));
    }
    if axis == SweepAxis::Beta && !base.family.has_cosine() {
        return Err(domain(format!("{} has no beta factor", base.family)));
    }
    spec.validate()?;
    let run = |&x: &f64| evaluate(base, mode, axis, x, opt, pump, spec, prefer);
    #[cfg(feature = "parallel")]
    let rows = grid.par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let rows = grid.iter().map(run).collect();
    Ok(rows)
}

/// Logarithmic pulse-duration grid centered on `L |1/u_p - 1/u_s|`:
/// `per_decade` points per decade across `decades` decades, both ends included.
pub fn pulse_duration_grid(opt: &CrystalOptics, per_decade: usize, decades: f64) -> Result<Vec<f64>> {
    let center = opt.phase_matching_time();
    if center == 0.0 {
        return Err(domain("zero walk-off: the pulse-duration grid has no natural center"));
    }
    if per_decade == 0 || !(decades > 0.0) {
        return Err(domain("grid needs at least one point per decade and a positive span"));
    }
    let n = (per_decade as f64 * decades).round() as usize;
    let lo = center.log10() - decades / 2.0;
    Ok((0..=n)
        .map(|k| 10f64.powf(lo + decades * k as f64 / n as f64))
        .collect())
}
