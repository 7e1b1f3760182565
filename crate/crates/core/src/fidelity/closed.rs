use std::f64::consts::PI;

use super::NormConstants;
use crate::error::{domain, Error, Result};
use crate::model::{ApproxSpec, CrystalOptics, Family};
use crate::numerics::{erf, quad_semi_infinite, sinc, QuadSpec};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("alpha must be positive and finite, got {alpha}")))
    }
}

/// `2 sqrt(alpha/pi) arccot(alpha)`.
pub fn fidelity_gaussian_closed(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(2.0 * (alpha / PI).sqrt() * (1.0 / alpha).atan())
}

/// `(2 pi alpha)^(1/4) erf(1 / (2 sqrt(alpha)))`.
pub fn fidelity_supergaussian_closed(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((2.0 * PI * alpha).powf(0.25) * erf(0.5 / alpha.sqrt()))
}

/// `sqrt(2/pi) [atan((1-b)/a) + atan((1+b)/a)] sqrt((a^3 + a b^2) / (2a^2 + b^2))`.
pub fn fidelity_cosinegaussian_closed(alpha: f64, beta: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(domain(format!("beta must be non-negative and finite, got {beta}")));
    }
    if beta == 0.0 {
        return fidelity_gaussian_closed(alpha);
    }
    let (a, b) = (alpha, beta);
    let angles = ((1.0 - b) / a).atan() + ((1.0 + b) / a).atan();
    Ok((2.0 / PI).sqrt() * angles * ((a * a * a + a * b * b) / (2.0 * a * a + b * b)).sqrt())
}

/// Closed-form spatial fidelity, or `None` for families without one.
pub fn closed_form(approx: &ApproxSpec) -> Option<Result<f64>> {
    match approx.family {
        Family::Gaussian => Some(fidelity_gaussian_closed(approx.alpha)),
        Family::SuperGaussian => Some(fidelity_supergaussian_closed(approx.alpha)),
        Family::CosineGaussian => Some(fidelity_cosinegaussian_closed(approx.alpha, approx.beta)),
        Family::SincExact | Family::CosineSuperGaussian => None,
    }
}

/// `int_0^inf g(v)^2 dv` for the spatial shape `g` of the family.
pub(crate) fn self_overlap(approx: &ApproxSpec) -> f64 {
    let (a, b) = (approx.alpha, approx.effective_beta());
    match approx.family {
        Family::SincExact => PI / 2.0,
        Family::Gaussian => 1.0 / (2.0 * a),
        Family::SuperGaussian => 0.5 * (PI / (2.0 * a)).sqrt(),
        Family::CosineGaussian => (2.0 * a * a + b * b) / (4.0 * a * (a * a + b * b)),
        Family::CosineSuperGaussian => 0.25 * (PI / (2.0 * a)).sqrt() * (1.0 + (-b * b / (2.0 * a)).exp()),
    }
}

/// Squared norm of the spatial state per unit `N^2`: `(pi k_p / L) int_0^inf g^2 dv`.
///
/// The state integral over `q_s, q_i` becomes `1/4 int d^2q_+ |V|^2 int d^2q_- g^2`
/// with a normalized pump and `d^2q_- = (4 pi k_p / L) dv`.
fn norm_factor(opt: &CrystalOptics, integral: f64) -> f64 {
    PI * opt.pump_wavenumber / opt.length * integral
}

/// Normalization constants of the sinc state and the approximated state.
///
/// Both are checked by integrating the self-overlap numerically; a mismatch
/// above `1e-8` is reported as a verification error.
pub fn norm_constants(approx: &ApproxSpec, opt: &CrystalOptics, spec: &QuadSpec) -> Result<NormConstants> {
    approx.validate()?;
    opt.validate()?;
    let sinc_spec = ApproxSpec::sinc();
    let n = (1.0 / norm_factor(opt, self_overlap(&sinc_spec))).sqrt();
    let n_family = (1.0 / norm_factor(opt, self_overlap(approx))).sqrt();
    verify(&sinc_spec, n, opt, spec)?;
    verify(approx, n_family, opt, spec)?;
    Ok(NormConstants { sinc: n, family: n_family })
}

fn verify(approx: &ApproxSpec, n: f64, opt: &CrystalOptics, spec: &QuadSpec) -> Result<()> {
    let integral = squared_shape_integral(approx, spec)?;
    let overlap = n * n * norm_factor(opt, integral);
    if (overlap - 1.0).abs() > 1e-8 {
        return Err(Error::Verification(format!(
            "self-overlap of the {} state is {overlap}, expected 1",
            approx.family
        )));
    }
    Ok(())
}

pub(crate) fn squared_shape_integral(approx: &ApproxSpec, spec: &QuadSpec) -> Result<f64> {
    let (a, b) = (approx.alpha, approx.effective_beta());
    let est = match approx.family {
        Family::SincExact => quad_semi_infinite(|v| sinc(v).powi(2), &spec.with_period(PI))?,
        Family::Gaussian => quad_semi_infinite(|v| (-2.0 * a * v).exp(), &spec.smooth())?,
        Family::SuperGaussian => quad_semi_infinite(|v| (-2.0 * a * v * v).exp(), &spec.smooth())?,
        Family::CosineGaussian => {
            quad_semi_infinite(|v| ((-a * v).exp() * (b * v).cos()).powi(2), &spec.smooth())?
        }
        Family::CosineSuperGaussian => {
            quad_semi_infinite(|v| ((-a * v * v).exp() * (b * v).cos()).powi(2), &spec.smooth())?
        }
    };
    Ok(est.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn optics(length: f64, k_p: f64) -> CrystalOptics {
        CrystalOptics::new(length, k_p, 1.4e8, 1.6e8, 1.6e8).unwrap()
    }

    #[test]
    fn gaussian_examples() {
        assert!((fidelity_gaussian_closed(1.0).unwrap() - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!(fidelity_gaussian_closed(1e-12).unwrap() < 1e-5);
        assert!(fidelity_gaussian_closed(0.0).is_err());
        assert!(fidelity_gaussian_closed(-1.0).is_err());
        // the maximum of 2 sqrt(a/pi) arccot(a) is 0.906500 at a = 0.71852
        let f = fidelity_gaussian_closed(0.718).unwrap();
        assert!((f - 0.906_500).abs() < 1e-5, "{f}");
    }

    #[test]
    fn supergaussian_examples() {
        assert!((fidelity_supergaussian_closed(0.255).unwrap() - 0.943).abs() < 1e-3);
        assert!((fidelity_supergaussian_closed(1.0).unwrap() - 0.824_072_8).abs() < 1e-6);
        assert!(fidelity_supergaussian_closed(1e-12).unwrap() < 1e-2);
        assert!(fidelity_supergaussian_closed(f64::NAN).is_err());
    }

    #[test]
    fn cosinegaussian_examples() {
        assert!((fidelity_cosinegaussian_closed(0.49, 0.39).unwrap() - 0.935).abs() < 1e-3);
        assert!((fidelity_cosinegaussian_closed(0.39, 0.49).unwrap() - 0.944).abs() < 1e-3);
        assert!(fidelity_cosinegaussian_closed(0.4, -0.1).is_err());
        assert_eq!(
            fidelity_cosinegaussian_closed(0.49, 0.0).unwrap(),
            fidelity_gaussian_closed(0.49).unwrap()
        );
    }

    #[test]
    fn normalization_constants_match_the_printed_forms() {
        let o = optics(2e-3, 1.5e7);
        let spec = QuadSpec::default();
        let (l, k) = (o.length, o.pump_wavenumber);
        let g = norm_constants(&ApproxSpec::gaussian(0.7).unwrap(), &o, &spec).unwrap();
        assert!((g.sinc / (2.0 * l / (k * PI * PI)).sqrt() - 1.0).abs() < 1e-14);
        assert!((g.family / (2.0 * l * 0.7 / (k * PI)).sqrt() - 1.0).abs() < 1e-14);
        // the radical spans the whole product: N_SG^2 = sqrt(2a/pi) 2L/(k_p pi)
        let a = 0.255;
        let sg = norm_constants(&ApproxSpec::new(Family::SuperGaussian, a, 0.0).unwrap(), &o, &spec).unwrap();
        let typeset_whole = ((2.0 * a / PI).sqrt() * 2.0 * l / (k * PI)).sqrt();
        let typeset_outer = (2.0 * a / PI).sqrt() * 2.0 * l / (k * PI);
        assert!((sg.family / typeset_whole - 1.0).abs() < 1e-14);
        assert!((sg.family / typeset_outer - 1.0).abs() > 0.5);
        let (a, b) = (0.39, 0.49);
        let cg = norm_constants(&ApproxSpec::new(Family::CosineGaussian, a, b).unwrap(), &o, &spec).unwrap();
        let printed = (4.0 * l * a * (a * a + b * b) / (PI * k * (2.0 * a * a + b * b))).sqrt();
        assert!((cg.family / printed - 1.0).abs() < 1e-14);
        norm_constants(&ApproxSpec::new(Family::CosineSuperGaussian, 0.07, 0.5).unwrap(), &o, &spec).unwrap();
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn beta_zero_reduction_is_exact(a in 1e-3..20.0f64) {
            prop_assert_eq!(
                fidelity_cosinegaussian_closed(a, 0.0).unwrap(),
                fidelity_gaussian_closed(a).unwrap()
            );
        }

        #[test]
        fn closed_forms_are_fidelities(a in 1e-3..50.0f64, b in 0.0..3.0f64) {
            for f in [
                fidelity_gaussian_closed(a).unwrap(),
                fidelity_supergaussian_closed(a).unwrap(),
                fidelity_cosinegaussian_closed(a, b).unwrap(),
            ] {
                prop_assert!(f > 0.0 && f <= 1.0);
            }
        }
    }
}
