use num_complex::Complex64;
use std::f64::consts::PI;

use super::modes::{ln_t_magnitude, t_phase};
use super::{CoefficientBlock, ModeIndices};
use crate::error::{domain, Error, Result};
use crate::fidelity::self_overlap;
use crate::model::{ApproxSpec, CrystalOptics, Family, PumpSpec};
use crate::numerics::{ln_factorial, ln_gamma, reg_hyp2f1};

/// Below this `|D| / max(|H|, |B|)` the `D^d 2F1~` product is replaced by its leading order.
const SMALL_D: f64 = 1e-12;

fn ln_binomial(n: u32, k: u32) -> f64 {
    ln_factorial(n as u64) - ln_factorial(k as u64) - ln_factorial((n - k) as u64)
}

/// `H, D, B` for a (possibly complex) phase-matching factor.
pub fn coefficient_block(pump: &PumpSpec, modes: &ModeIndices, opt: &CrystalOptics, alpha: Complex64) -> Result<CoefficientBlock> {
    pump.validate()?;
    modes.validate()?;
    opt.validate()?;
    if !(alpha.re > 0.0 && alpha.is_finite()) {
        return Err(domain(format!("alpha must have a positive real part, got {alpha}")));
    }
    let wp2 = pump.waist * pump.waist / 4.0;
    let a = alpha * (opt.length / (4.0 * opt.pump_wavenumber));
    let block = CoefficientBlock {
        h: a + wp2 + modes.waist_signal * modes.waist_signal / 4.0,
        d: a - wp2,
        b: a + wp2 + modes.waist_idler * modes.waist_idler / 4.0,
    };
    let z = block.argument();
    if z.norm() >= 1.0 {
        return Err(Error::Divergence { modulus: z.norm() });
    }
    Ok(block)
}

/// `D^d 2F1~(h, b; 1 + d; D^2 / (H B))`, in log form.
fn ln_d_power_hyp(h: f64, b: f64, d: i64, blk: &CoefficientBlock) -> Result<Complex64> {
    let scale = blk.h.norm().max(blk.b.norm());
    if blk.d.norm() < SMALL_D * scale {
        // only the first non-vanishing order survives
        if blk.d.norm() == 0.0 && d != 0 {
            return Ok(Complex64::new(f64::NEG_INFINITY, 0.0));
        }
        let ad = d.unsigned_abs();
        return Ok(if d >= 0 {
            blk.d.ln() * d as f64 - ln_gamma(1.0 + d as f64)
        } else {
            // D^(-|d|) (h)_|d| (b)_|d| z^|d| / |d|!
            let poch = ln_gamma(h + ad as f64) - ln_gamma(h) + ln_gamma(b + ad as f64) - ln_gamma(b);
            blk.d.ln() * ad as f64 - (blk.h * blk.b).ln() * ad as f64 + poch - ln_factorial(ad)
        });
    }
    let f = reg_hyp2f1(h.into(), b.into(), Complex64::from(1.0 + d as f64), blk.argument())?;
    Ok(blk.d.ln() * d as f64 + f.ln())
}

/// The sextuple sum with its `pi^2` prefactor and OAM delta, without `N`.
///
/// Requires a pump OAM `l >= 0`.
pub fn amplitude_sum(pump: &PumpSpec, modes: &ModeIndices, opt: &CrystalOptics, alpha: Complex64) -> Result<Complex64> {
    if pump.oam < 0 {
        return Err(domain("the direct sum needs pump OAM >= 0; use the conjugation rule"));
    }
    let blk = coefficient_block(pump, modes, opt, alpha)?;
    if pump.oam != modes.oam_signal + modes.oam_idler {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (p, l) = (pump.radial_index, pump.oam);
    let (ps, ls, pi_, li) = (modes.p_signal, modes.oam_signal, modes.p_idler, modes.oam_idler);
    let (ln_h, ln_b) = (blk.h.ln(), blk.b.ln());
    let al = l as u32;
    let mut total = Complex64::new(0.0, 0.0);
    for u in 0..=p {
        let tu = ln_t_magnitude(u, p, l, pump.waist);
        for s in 0..=ps {
            let ts = ln_t_magnitude(s, ps, ls, modes.waist_signal);
            for i in 0..=pi_ {
                let ti = ln_t_magnitude(i, pi_, li, modes.waist_idler);
                // T_u T_s^* T_i^*; the i^l phases cancel under the OAM delta
                let phase = t_phase(u, p, l) * t_phase(s, ps, ls).conj() * t_phase(i, pi_, li).conj();
                let ln_t = tu + ts + ti;
                for n in 0..=al {
                    for m in 0..=u {
                        let ln_c = ln_binomial(al, n) + ln_binomial(u, m);
                        for f in 0..=(u - m) {
                            for v in 0..=m {
                                let (ui, si, ii, ni, mi, fi, vi) =
                                    (u as i64, s as i64, i as i64, n as i64, m as i64, f as i64, v as i64);
                                let d = li as i64 + mi - ni - 2 * vi;
                                let h2 = 2 + 2 * si + l as i64 + li as i64 + 2 * (ui - fi) - 2 * ni - 2 * vi
                                    + ls.unsigned_abs() as i64;
                                let b2 = 2 + 2 * fi + 2 * ii + li as i64 + 2 * mi - 2 * vi + li.unsigned_abs() as i64;
                                let (h, b) = (h2 as f64 / 2.0, b2 as f64 / 2.0);
                                if h <= 0.0 || b <= 0.0 {
                                    return Err(Error::Domain(format!("non-positive Gamma argument h = {h}, b = {b}")));
                                }
                                let ln_rest = ln_d_power_hyp(h, b, d, &blk)?;
                                if ln_rest.re == f64::NEG_INFINITY {
                                    continue;
                                }
                                let ln_term = ln_rest
                                    + (ln_t + ln_c + ln_binomial(u - m, f) + ln_binomial(m, v) + ln_gamma(h) + ln_gamma(b))
                                    - ln_h * h
                                    - ln_b * b;
                                total += phase * ln_term.exp();
                            }
                        }
                    }
                }
            }
        }
    }
    let out = total * (PI * PI);
    if !out.is_finite() {
        return Err(Error::Overflow("amplitude sum left the f64 range".into()));
    }
    Ok(out)
}

/// Normalization constant of the spatial state for a family, given `L, k_p`.
pub fn state_norm(approx: &ApproxSpec, opt: &CrystalOptics) -> f64 {
    (opt.length / (PI * opt.pump_wavenumber * self_overlap(approx))).sqrt()
}

fn check_family(approx: &ApproxSpec) -> Result<()> {
    approx.validate()?;
    match approx.family {
        Family::Gaussian | Family::CosineGaussian => Ok(()),
        f => Err(domain(format!("LG amplitudes are available for gaussian and cosine-gaussian, got {f}"))),
    }
}

/// Coincidence amplitude for a pump with OAM `l >= 0`.
///
/// Gaussian: `N_G` times the sum at real alpha. Cosine-Gaussian: `N_CG` times
/// `[S(alpha - i beta) + S(alpha + i beta)] / 2`, which is the amplitude of the
/// state with `exp(-alpha x) cos(beta x)` and equals `Re S(alpha - i beta)`.
pub fn amplitude_analytic(pump: &PumpSpec, modes: &ModeIndices, opt: &CrystalOptics, approx: &ApproxSpec) -> Result<Complex64> {
    check_family(approx)?;
    let n = state_norm(approx, opt);
    let beta = approx.effective_beta();
    if beta == 0.0 {
        return Ok(amplitude_sum(pump, modes, opt, approx.alpha.into())? * n);
    }
    let minus = amplitude_sum(pump, modes, opt, Complex64::new(approx.alpha, -beta))?;
    let plus = amplitude_sum(pump, modes, opt, Complex64::new(approx.alpha, beta))?;
    Ok((minus + plus) * (0.5 * n))
}

/// Amplitude for a pump with OAM `l <= 0`, as the complex conjugate of the
/// amplitude with all three OAM indices negated.
pub fn amplitude_conjugate(pump: &PumpSpec, modes: &ModeIndices, opt: &CrystalOptics, approx: &ApproxSpec) -> Result<Complex64> {
    if pump.oam > 0 {
        return Err(domain("the conjugation rule applies to pump OAM <= 0"));
    }
    let mirrored_pump = PumpSpec { oam: -pump.oam, ..*pump };
    Ok(amplitude_analytic(&mirrored_pump, &modes.mirrored(), opt, approx)?.conj())
}

/// Same rule for a complex factor: `C^{l}(alpha) = conj(C^{-l}(conj alpha))`.
pub fn amplitude_sum_conjugate(pump: &PumpSpec, modes: &ModeIndices, opt: &CrystalOptics, alpha: Complex64) -> Result<Complex64> {
    if pump.oam > 0 {
        return Err(domain("the conjugation rule applies to pump OAM <= 0"));
    }
    let mirrored_pump = PumpSpec { oam: -pump.oam, ..*pump };
    Ok(amplitude_sum(&mirrored_pump, &modes.mirrored(), opt, alpha.conj())?.conj())
}

/// Amplitude for any pump OAM sign.
pub fn amplitude(pump: &PumpSpec, modes: &ModeIndices, opt: &CrystalOptics, approx: &ApproxSpec) -> Result<Complex64> {
    if pump.oam >= 0 {
        amplitude_analytic(pump, modes, opt, approx)
    } else {
        amplitude_conjugate(pump, modes, opt, approx)
    }
}
