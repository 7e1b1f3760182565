use num_complex::Complex64;
use std::f64::consts::PI;

use super::analytic::{coefficient_block, state_norm};
use super::modes::lg_mode;
use super::ModeIndices;
use crate::error::{domain, Result};
use crate::model::{phase_matching_value, ApproxSpec, ArgumentKind, CrystalOptics, Family, PumpSpec};
use crate::numerics::{quad_nd, Estimate, QuadSpec};

/// Envelope margin, in e-folds, kept inside the radial cut.
const ENVELOPE_EFOLDS: f64 = 60.0;

/// Coincidence amplitude by direct transverse quadrature.
///
/// The variables are `(|q_s|, |q_i|, relative angle)` on a box and the idler
/// angle `theta`. The integrand depends on `theta` only through
/// `exp(i (l - l_s - l_i) theta)`, so the `theta` integral is done exactly with
/// equally spaced nodes. Intended for low mode orders.
pub fn amplitude_oracle(
    pump: &PumpSpec,
    modes: &ModeIndices,
    opt: &CrystalOptics,
    approx: &ApproxSpec,
    spec: &QuadSpec,
) -> Result<Estimate<Complex64>> {
    approx.validate()?;
    if approx.family == Family::SincExact {
        return Err(domain("the oracle integrates a Gaussian-family kernel, not sinc"));
    }
    if !matches!(approx.family, Family::Gaussian | Family::CosineGaussian) {
        return Err(domain(format!("no amplitude normalization for {}", approx.family)));
    }
    let blk = coefficient_block(pump, modes, opt, approx.alpha.into())?;
    // smallest decay rate of the Gaussian envelope exp(-[H, -D; -D, B])
    let (h, d, b) = (blk.h.re, blk.d.re, blk.b.re);
    let lambda_min = 0.5 * (h + b) - (0.25 * (h - b).powi(2) + d * d).sqrt();
    let degree = (2 * (pump.radial_index + modes.p_signal + modes.p_idler)) as f64
        + (pump.oam.abs() + modes.oam_signal.abs() + modes.oam_idler.abs()) as f64;
    let r = ((ENVELOPE_EFOLDS + 2.0 * degree) / lambda_min).sqrt();
    let scale = opt.length / (4.0 * opt.pump_wavenumber);

    let integrand = |x: &[f64], theta: f64| -> Complex64 {
        let (rs, ri, psi) = (x[0], x[1], x[2] + theta);
        let (qsx, qsy) = (rs * psi.cos(), rs * psi.sin());
        let (qix, qiy) = (ri * theta.cos(), ri * theta.sin());
        let (px, py) = (qsx + qix, qsy + qiy);
        let (mx, my) = (qsx - qix, qsy - qiy);
        let pump_amp = lg_mode(pump.radial_index, pump.oam, pump.waist, px.hypot(py), py.atan2(px));
        let kernel = phase_matching_value(scale * (mx * mx + my * my), approx, ArgumentKind::Spatial);
        let sig = lg_mode(modes.p_signal, modes.oam_signal, modes.waist_signal, rs, psi).conj();
        let idl = lg_mode(modes.p_idler, modes.oam_idler, modes.waist_idler, ri, theta).conj();
        pump_amp * sig * idl * (rs * ri * kernel)
    };
    let mismatch = (pump.oam - modes.oam_signal - modes.oam_idler).unsigned_abs();
    // the rotation integral of exp(i mismatch theta): trapezoid nodes, exact for
    // more than `mismatch` nodes; a single node when OAM is conserved
    let nodes = mismatch + 1;
    let bounds = [(0.0, r), (0.0, r), (0.0, 2.0 * PI)];
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for k in 0..nodes {
        let theta = 2.0 * PI * k as f64 / nodes as f64;
        let est = quad_nd(|x: &[f64]| integrand(x, theta), &bounds, spec)?;
        value += est.value / nodes as f64;
        error += est.error / nodes as f64;
    }
    let factor = 2.0 * PI * state_norm(approx, opt);
    Ok(Estimate {
        value: value * factor,
        error: error * factor,
    })
}
