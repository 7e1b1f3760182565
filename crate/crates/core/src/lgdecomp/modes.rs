use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{domain, Result};
use crate::numerics::ln_factorial;

/// `i^l` for integer `l`.
pub(crate) fn i_pow(l: i64) -> Complex64 {
    match l.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `ln |T_u^{p,l}|`; requires `u <= p`.
pub(crate) fn ln_t_magnitude(u: u32, p: u32, l: i32, w: f64) -> f64 {
    let al = l.unsigned_abs() as u64;
    let (u, p) = (u as u64, p as u64);
    0.5 * (ln_factorial(p) + ln_factorial(p + al) - PI.ln()) + (2 * u + al + 1) as f64 * (w / SQRT_2).ln()
        - ln_factorial(p - u)
        - ln_factorial(al + u)
        - ln_factorial(u)
}

/// Sign and phase of `T_u^{p,l}`: `(-1)^(p+u) i^l`.
pub(crate) fn t_phase(u: u32, p: u32, l: i32) -> Complex64 {
    let sign = if (p + u).is_multiple_of(2) { 1.0 } else { -1.0 };
    i_pow(l as i64) * sign
}

/// Expansion coefficient of the momentum-space LG mode:
/// `sqrt(p!(p+|l|)!/pi) (w/sqrt2)^(2u+|l|+1) (-1)^(p+u) i^l / ((p-u)! (|l|+u)! u!)`.
pub fn t_coeff(u: u32, p: u32, l: i32, w: f64) -> Result<Complex64> {
    if u > p {
        return Err(domain(format!("summation index u = {u} exceeds radial index p = {p}")));
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(domain(format!("waist must be positive, got {w}")));
    }
    Ok(t_phase(u, p, l) * ln_t_magnitude(u, p, l, w).exp())
}

/// Momentum-space LG mode `exp(-rho^2 w^2 / 4) exp(i l phi) sum_u T_u rho^(2u+|l|)`,
/// normalized over the plane.
pub fn lg_mode(p: u32, l: i32, w: f64, rho: f64, phi: f64) -> Complex64 {
    let al = l.unsigned_abs() as i32;
    let envelope = (-rho * rho * w * w / 4.0).exp();
    if envelope == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut radial = Complex64::new(0.0, 0.0);
    for u in 0..=p {
        let t = t_phase(u, p, l) * ln_t_magnitude(u, p, l, w).exp();
        radial += t * rho.powi(2 * u as i32 + al);
    }
    envelope * radial * Complex64::from_polar(1.0, l as f64 * phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{quad_nd, QuadSpec};

    #[test]
    fn coefficient_examples() {
        let w = 2.5e-5;
        let t = t_coeff(0, 0, 0, w).unwrap();
        assert!((t - Complex64::from(w / (2.0 * PI).sqrt())).norm() < 1e-15 * w);
        let t = t_coeff(0, 0, 1, w).unwrap();
        let expected = Complex64::new(0.0, w * w / (2.0 * PI.sqrt()));
        assert!((t - expected).norm() < 1e-14 * expected.norm());
        assert!(t_coeff(1, 0, 0, w).is_err());
    }

    #[test]
    fn mode_values() {
        let w = 1e-4;
        let v = lg_mode(0, 0, w, 0.0, 1.234);
        assert!((v - Complex64::from(w / (2.0 * PI).sqrt())).norm() < 1e-16);
        for p in 0..3 {
            assert_eq!(lg_mode(p, 2, w, 0.0, 0.3), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn modes_are_normalized() {
        let w = 3e-5;
        let spec = QuadSpec::default();
        for p in 0..=2u32 {
            for l in -2..=2i32 {
                let order = (4 * p as i32 + 2 * l.abs()) as f64;
                let r = ((2.0 * (order + 80.0)) / (w * w)).sqrt();
                let n = quad_nd(
                    |x: &[f64]| x[0] * lg_mode(p, l, w, x[0], x[1]).norm_sqr(),
                    &[(0.0, r), (0.0, 2.0 * PI)],
                    &spec,
                )
                .unwrap();
                assert!((n.value - 1.0).abs() < 1e-8, "(p, l) = ({p}, {l}): {}", n.value);
            }
        }
    }

    #[test]
    fn modes_are_orthogonal() {
        let w: f64 = 3e-5;
        let spec = QuadSpec::default();
        let r = (200.0 / (w * w)).sqrt();
        let overlap = |(p1, l1): (u32, i32), (p2, l2): (u32, i32)| {
            let re = quad_nd(
                |x: &[f64]| x[0] * (lg_mode(p1, l1, w, x[0], x[1]).conj() * lg_mode(p2, l2, w, x[0], x[1])).re,
                &[(0.0, r), (0.0, 2.0 * PI)],
                &spec,
            )
            .unwrap();
            re.value
        };
        assert!(overlap((0, 1), (1, 1)).abs() < 1e-9);
        assert!(overlap((2, 0), (1, 0)).abs() < 1e-9);
        assert!(overlap((1, 1), (1, -1)).abs() < 1e-9);
    }
}
