use num_complex::Complex64;
use std::f64::consts::PI;

use super::{check_report, closed::squared_shape_integral, norm_constants, FidelityReport, Method};
use crate::error::{domain, Result};
use crate::lgdecomp::lg_mode;
use crate::model::{complex_gaussian, phase_matching_value, ApproxSpec, ArgumentKind, CrystalOptics, Family, PumpSpec};
use crate::numerics::{quad_nd, quad_semi_infinite, sinc, Estimate, QuadSpec};

/// The three radial overlap integrals over `v = L |q_-|^2 / (4 k_p)`.
#[derive(Debug, Clone, Copy)]
pub struct SpatialOverlaps {
    /// `int sinc(v) g(v) dv`
    pub cross: Estimate<f64>,
    /// `int sinc(v)^2 dv`
    pub sinc_sinc: Estimate<f64>,
    /// `int g(v)^2 dv`
    pub approx_approx: Estimate<f64>,
}

impl SpatialOverlaps {
    pub fn fidelity(&self) -> f64 {
        self.cross.value / (self.sinc_sinc.value * self.approx_approx.value).sqrt()
    }

    /// First-order propagation of the three quadrature errors into the ratio.
    pub fn error(&self) -> f64 {
        let rel = |e: &Estimate<f64>| e.error / e.value.abs().max(f64::MIN_POSITIVE);
        self.fidelity().abs() * (rel(&self.cross) + 0.5 * rel(&self.sinc_sinc) + 0.5 * rel(&self.approx_approx))
    }
}

pub fn spatial_overlaps(approx: &ApproxSpec, spec: &QuadSpec) -> Result<SpatialOverlaps> {
    spec.validate()?;
    approx.validate()?;
    if approx.family == Family::SincExact {
        return Err(domain("the sinc-exact family has no approximation to compare"));
    }
    let osc = spec.with_period(PI);
    let (a, b) = (approx.alpha, approx.effective_beta());
    let cross = if approx.family == Family::CosineGaussian {
        // Re of the complex-alpha Gaussian overlap, alpha -> alpha - i beta
        let c = quad_semi_infinite(|v| complex_gaussian(v, a, b) * sinc(v), &osc)?;
        Estimate {
            value: c.value.re,
            error: c.error,
        }
    } else {
        quad_semi_infinite(|v| sinc(v) * phase_matching_value(v, approx, ArgumentKind::Spatial), &osc)?
    };
    let sinc_sinc = quad_semi_infinite(|v| sinc(v).powi(2), &osc)?;
    let approx_approx = if approx.family == Family::CosineGaussian {
        // g^2 = (exp(-2 a v) + Re exp(-2 (a - i b) v)) / 2
        let c = quad_semi_infinite(
            |v| (Complex64::from((-2.0 * a * v).exp()) + complex_gaussian(2.0 * v, a, b)) * 0.5,
            &spec.smooth(),
        )?;
        Estimate {
            value: c.value.re,
            error: c.error,
        }
    } else {
        let value = squared_shape_integral(approx, spec)?;
        Estimate {
            value,
            error: spec.rel_tol * value,
        }
    };
    Ok(SpatialOverlaps {
        cross,
        sinc_sinc,
        approx_approx,
    })
}

/// Spatial fidelity from the reduced one-dimensional overlap integrals.
///
/// The pump drops out of the ratio once the state is written in
/// `q_+ = q_s + q_i`, `q_- = q_s - q_i`; only the radial `q_-` integrals remain.
pub fn fidelity_spatial_oracle(approx: &ApproxSpec, spec: &QuadSpec) -> Result<FidelityReport> {
    let o = spatial_overlaps(approx, spec)?;
    check_report(FidelityReport {
        family: approx.family,
        alpha: approx.alpha,
        beta: approx.effective_beta(),
        fidelity: o.fidelity(),
        method: Method::Oracle,
        oracle_error: Some(o.error()),
    })
}

/// `V_F(0) = (1/2pi) int |V(q)|^2 d^2q` for the LG pump, by cubature over the
/// momentum plane.
pub fn pump_fourier_origin(pump: &PumpSpec, spec: &QuadSpec) -> Result<f64> {
    pump.validate()?;
    let w = pump.waist;
    // |LG|^2 ~ rho^(4p + 2|l|) exp(-rho^2 w^2 / 2); 40 e-folds past the peak
    let order = (4 * pump.radial_index as i64 + 2 * pump.oam.abs() as i64) as f64;
    let r_max = ((2.0 * (order + 80.0)) / (w * w)).sqrt();
    let est = quad_nd(
        |x: &[f64]| x[0] * lg_mode(pump.radial_index, pump.oam, w, x[0], x[1]).norm_sqr(),
        &[(0.0, r_max), (0.0, 2.0 * PI)],
        spec,
    )?;
    Ok(est.value / (2.0 * PI))
}

/// Spatial fidelity in physical units, through the Fourier route:
/// `F = N N_x Phi_F(0) V_F(0) pi^2` with `Phi_F(0) = (1/2pi) int d^2q_- sinc g`.
///
/// Every physical quantity (L, k_p, the pump) enters explicitly, so this is
/// the route used to check that the fidelity does not depend on them.
pub fn fidelity_spatial_physical(
    approx: &ApproxSpec,
    opt: &CrystalOptics,
    pump: &PumpSpec,
    spec: &QuadSpec,
) -> Result<FidelityReport> {
    approx.validate()?;
    if approx.family == Family::SincExact {
        return Err(domain("the sinc-exact family has no approximation to compare"));
    }
    let norms = norm_constants(approx, opt, spec)?;
    let scale = opt.length / (4.0 * opt.pump_wavenumber);
    // d^2q_- = pi d(q^2); sinc zeros are spaced pi / scale in q^2
    let phi = quad_semi_infinite(
        |u: f64| {
            let v = scale * u;
            sinc(v) * phase_matching_value(v, approx, ArgumentKind::Spatial)
        },
        &spec.with_period(PI / scale),
    )?;
    let phi_f0 = phi.value * PI / (2.0 * PI);
    let v_f0 = pump_fourier_origin(pump, spec)?;
    let f = norms.sinc * norms.family * phi_f0 * v_f0 * PI * PI;
    check_report(FidelityReport {
        family: approx.family,
        alpha: approx.alpha,
        beta: approx.effective_beta(),
        fidelity: f,
        method: Method::Oracle,
        oracle_error: Some(f * (phi.error / phi.value.abs() + spec.rel_tol)),
    })
}
