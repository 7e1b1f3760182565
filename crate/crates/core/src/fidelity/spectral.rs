//! Frequency-resolved and spatio-temporal fidelities.
//!
//! The sinc state is compared with `exp[-alpha (L Δk_z / 2)^2]`. Frequencies
//! are rescaled so the spectral part of the mismatch reads `x = L κ Ω_+ / 2`
//! when signal and idler share a group velocity (κ = 1/u_p - 1/u_s); the pump
//! weight `|S(Ω_+)|^2` then becomes `exp(-x^2 τ^2 / 2)` with `τ = 2 t_0 / (L |κ|)`.
//! The free `Ω_-` (and `q_+`) directions carry identical factors in the overlap
//! and both norms; they are cancelled before integrating.

use std::cell::Cell;
use std::f64::consts::PI;
use serde::{Deserialize, Serialize};

use super::{check_report, FidelityReport, Method};
use crate::error::{domain, Result};
use crate::model::{CrystalOptics, Family, PumpSpec};
use crate::numerics::{quad, quad_real_line, quad_semi_infinite, quad_tail, sinc, Estimate, QuadSpec};

/// Relative walk-off difference below which signal and idler count as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;
/// Half-width of the pump-weight box in standard deviations.
const BOX_SIGMAS: f64 = 8.0;
/// Spatial aperture, in units of the dimensionless `L |q_-|^2 / (4 k_p)`, of the
/// non-degenerate spatio-temporal integral; the ratio does not depend on it.
const SPATIAL_APERTURE: f64 = 4.0 * PI;
/// Largest number of sinc periods summed directly under the pump weight.
const MAX_WEIGHTED_PANELS: f64 = 1_048_576.0;

/// Whether the spectral mismatch depends on `Ω_+` alone.
pub fn is_degenerate(opt: &CrystalOptics) -> bool {
    let (ks, ki) = (opt.signal_walkoff(), opt.idler_walkoff());
    (ks - ki).abs() <= DEGENERACY_TOL * ks.abs().max(ki.abs())
}

/// `τ = 2 t_0 / (L |κ|)`: pump spectral width relative to the phase-matching width,
/// inverted. Small τ is sinc-dominated.
pub fn pump_ratio(opt: &CrystalOptics, pump: &PumpSpec) -> f64 {
    2.0 * pump.pulse_duration / opt.phase_matching_time()
}

/// Which spectral width dominates the joint spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `t_0 <= 0.1 L |1/u_p - 1/u_s|`: pump spectrum much broader than the phase matching.
    SincDominated,
    Intermediate,
    /// `t_0 >= 10 L |1/u_p - 1/u_s|`.
    PumpDominated,
}

/// Factor separating the regimes from the crossover `t_0 = L |1/u_p - 1/u_s|`.
const REGIME_FACTOR: f64 = 10.0;

pub fn regime(opt: &CrystalOptics, pump: &PumpSpec) -> Regime {
    let t = opt.phase_matching_time();
    if pump.pulse_duration * REGIME_FACTOR <= t {
        Regime::SincDominated
    } else if pump.pulse_duration >= REGIME_FACTOR * t {
        Regime::PumpDominated
    } else {
        Regime::Intermediate
    }
}

struct Triple {
    cross: Estimate<f64>,
    sinc_sinc: Estimate<f64>,
    gauss_gauss: Estimate<f64>,
}

impl Triple {
    fn report(&self, alpha: f64) -> Result<FidelityReport> {
        let f = self.cross.value / (self.sinc_sinc.value * self.gauss_gauss.value).sqrt();
        let rel = |e: &Estimate<f64>| e.error / e.value.abs().max(f64::MIN_POSITIVE);
        let err = f.abs() * (rel(&self.cross) + 0.5 * rel(&self.sinc_sinc) + 0.5 * rel(&self.gauss_gauss));
        check_report(FidelityReport {
            family: Family::Gaussian,
            alpha,
            beta: 0.0,
            fidelity: f,
            method: Method::Oracle,
            oracle_error: Some(err),
        })
    }
}

fn check_inputs(alpha: f64, opt: &CrystalOptics, pump: &PumpSpec, spec: &QuadSpec) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    opt.validate()?;
    pump.validate()?;
    spec.validate()
}

fn unit(alpha: f64) -> Result<FidelityReport> {
    // zero walk-off: both shapes are identically 1 across the spectrum
    check_report(FidelityReport {
        family: Family::Gaussian,
        alpha,
        beta: 0.0,
        fidelity: 1.0,
        method: Method::Oracle,
        oracle_error: Some(0.0),
    })
}

/// Half-line integrals of `sinc·g`, `sinc^2`, `g^2` with `g = exp(-alpha x^2)`.
fn line_triple(alpha: f64, spec: &QuadSpec) -> Result<Triple> {
    let osc = spec.with_period(PI);
    Ok(Triple {
        cross: quad_semi_infinite(|x| sinc(x) * (-alpha * x * x).exp(), &osc)?,
        sinc_sinc: quad_semi_infinite(|x| sinc(x).powi(2), &osc)?,
        gauss_gauss: quad_semi_infinite(|x| (-2.0 * alpha * x * x).exp(), &spec.smooth())?,
    })
}

/// `int_0^inf exp(-x^2 tau^2 / 2) f(x) dx`, summed panel by panel between the
/// zeros of sinc up to the cut `BOX_SIGMAS / tau`, with no tail extrapolation.
fn weighted_half_line(f: impl Fn(f64) -> f64, tau: f64, spec: &QuadSpec) -> Result<Estimate<f64>> {
    let cut = BOX_SIGMAS / tau;
    let panels = (cut / PI).ceil();
    if panels > MAX_WEIGHTED_PANELS {
        return Err(domain(format!(
            "pump ratio tau = {tau:e} is too small: the weighted integral spans {panels:e} sinc periods"
        )));
    }
    let panels = panels as usize;
    let piece = spec.smooth().tighter(1.0 / (panels as f64).sqrt().max(1.0));
    let mut total = Estimate { value: 0.0, error: 0.0 };
    for k in 0..panels {
        let (a, b) = (k as f64 * PI, ((k + 1) as f64 * PI).min(cut));
        let e = quad(|x| (-0.5 * x * x * tau * tau).exp() * f(x), a, b, &piece)?;
        total.value += e.value;
        total.error += e.error;
    }
    Ok(total)
}

fn weighted_triple(alpha: f64, tau: f64, spec: &QuadSpec) -> Result<Triple> {
    Ok(Triple {
        cross: weighted_half_line(|x| sinc(x) * (-alpha * x * x).exp(), tau, spec)?,
        sinc_sinc: weighted_half_line(|x| sinc(x).powi(2), tau, spec)?,
        gauss_gauss: weighted_half_line(|x| (-2.0 * alpha * x * x).exp(), tau, spec)?,
    })
}

/// Frequency-resolved fidelity (collection modes at `q ~ 0`).
///
/// Degenerate group velocities: one integral over `x` with the pump weight.
/// Otherwise the map `(Ω_s, Ω_i) -> (t_0 Ω_+, L Δk_z / 2)` is invertible with a
/// constant Jacobian and the integrand factorizes; the pump factor cancels
/// and the result no longer depends on `t_0`.
pub fn fidelity_spectral_oracle(
    alpha: f64,
    opt: &CrystalOptics,
    pump: &PumpSpec,
    spec: &QuadSpec,
) -> Result<FidelityReport> {
    check_inputs(alpha, opt, pump, spec)?;
    if is_degenerate(opt) {
        if opt.signal_walkoff() == 0.0 {
            return unit(alpha);
        }
        weighted_triple(alpha, pump_ratio(opt, pump), spec)?.report(alpha)
    } else {
        line_triple(alpha, spec)?.report(alpha)
    }
}

/// Spatio-temporal fidelity with the full mismatch `L Δk_z / 2 = x + y`,
/// `y = L |q_-|^2 / (4 k_p)`.
///
/// Degenerate group velocities: `I = int dx w(x) int_0^inf dy a(x + y) b(x + y)`.
/// The inner integral is `G(x) = G(0) - int_0^x a b`, with `G(0)` a single
/// tail integral. Otherwise the pump direction factors out as in the
/// spectral case and the remaining `(y, Δk)` integral runs over a finite
/// spatial aperture, which cancels in the ratio.
pub fn fidelity_spatiotemporal_oracle(
    alpha: f64,
    opt: &CrystalOptics,
    pump: &PumpSpec,
    spec: &QuadSpec,
) -> Result<FidelityReport> {
    check_inputs(alpha, opt, pump, spec)?;
    let cross = move |s: f64| sinc(s) * (-alpha * s * s).exp();
    let sinc_sinc = |s: f64| sinc(s).powi(2);
    let gauss_gauss = move |s: f64| (-2.0 * alpha * s * s).exp();

    if !is_degenerate(opt) {
        let inner = spec.tighter(0.1);
        let plane = |f: &dyn Fn(f64) -> f64, osc: bool| -> Result<Estimate<f64>> {
            let s = if osc { inner.with_period(PI) } else { inner.smooth() };
            let err = Cell::new(0.0f64);
            let out = quad(
                |y| match quad_real_line(|z| f(z + y), -y, &s) {
                    Ok(e) => {
                        err.set(err.get().max(e.error));
                        e.value
                    }
                    Err(_) => f64::NAN,
                },
                0.0,
                SPATIAL_APERTURE,
                &spec.smooth(),
            )?;
            Ok(Estimate {
                value: out.value,
                error: out.error + err.get() * SPATIAL_APERTURE,
            })
        };
        return Triple {
            cross: plane(&cross, true)?,
            sinc_sinc: plane(&sinc_sinc, true)?,
            gauss_gauss: plane(&gauss_gauss, false)?,
        }
        .report(alpha);
    }

    if opt.signal_walkoff() == 0.0 {
        // no spectral mismatch: only the spatial variable remains
        let osc = spec.with_period(PI);
        return Triple {
            cross: quad_semi_infinite(cross, &osc)?,
            sinc_sinc: quad_semi_infinite(sinc_sinc, &osc)?,
            gauss_gauss: quad_semi_infinite(gauss_gauss, &spec.smooth())?,
        }
        .report(alpha);
    }

    let tau = pump_ratio(opt, pump);
    let half_width = BOX_SIGMAS / tau;
    let weight = move |x: f64| (-0.5 * x * x * tau * tau).exp();
    let inner = spec.tighter(0.1);
    let outer = |f: &dyn Fn(f64) -> f64, osc: bool| -> Result<Estimate<f64>> {
        let tail_spec = if osc { inner.with_period(PI) } else { inner.smooth() };
        let g0 = quad_tail(f, 0.0, &tail_spec)?;
        let worst = Cell::new(g0.error);
        // G(x) is finite-range work; failures surface as NaN and abort the outer sum
        let piece_spec = QuadSpec {
            max_subdivisions: inner.max_subdivisions.max(20_000),
            ..inner.smooth()
        };
        let g = |x: f64| match quad(f, 0.0, x, &piece_spec) {
            Ok(e) => {
                worst.set(worst.get().max(e.error));
                g0.value - e.value
            }
            Err(_) => f64::NAN,
        };
        let out = quad(|x| weight(x) * g(x), -half_width, half_width, &QuadSpec {
            max_subdivisions: spec.max_subdivisions.max(20_000),
            ..spec.smooth()
        })?;
        Ok(Estimate {
            value: out.value,
            error: out.error + worst.get() * 2.0 * half_width,
        })
    };
    Triple {
        cross: outer(&cross, true)?,
        sinc_sinc: outer(&sinc_sinc, true)?,
        gauss_gauss: outer(&gauss_gauss, false)?,
    }
    .report(alpha)
}
