//! Physical parameter types and the phase mismatch.
//!
//! Signal and idler are taken degenerate in momentum (`k_p ~ 2 k_s`), so only
//! the pump wavenumber enters the transverse term of the mismatch. All
//! quantities are SI.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Result};
use crate::numerics::sinc;

/// Crystal length, pump wavenumber and group velocities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrystalOptics {
    /// Crystal length `L` in meters.
    pub length: f64,
    /// Pump wavenumber `k_p` in rad/m.
    pub pump_wavenumber: f64,
    /// Group velocities in m/s.
    pub u_pump: f64,
    pub u_signal: f64,
    pub u_idler: f64,
}

impl CrystalOptics {
    pub fn new(length: f64, pump_wavenumber: f64, u_pump: f64, u_signal: f64, u_idler: f64) -> Result<Self> {
        let c = CrystalOptics {
            length,
            pump_wavenumber,
            u_pump,
            u_signal,
            u_idler,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.length) {
            return Err(domain(format!("crystal length must be positive, got {}", self.length)));
        }
        if !positive(self.pump_wavenumber) {
            return Err(domain(format!("pump wavenumber must be positive, got {}", self.pump_wavenumber)));
        }
        if !(positive(self.u_pump) && positive(self.u_signal) && positive(self.u_idler)) {
            return Err(domain("group velocities must be positive"));
        }
        Ok(())
    }

    /// Group-delay mismatch `1/u_p - 1/u_s` in s/m.
    pub fn signal_walkoff(&self) -> f64 {
        1.0 / self.u_pump - 1.0 / self.u_signal
    }

    /// Group-delay mismatch `1/u_p - 1/u_i` in s/m.
    pub fn idler_walkoff(&self) -> f64 {
        1.0 / self.u_pump - 1.0 / self.u_idler
    }

    /// `L |1/u_p - 1/u_s|`, the temporal scale of the phase-matching function.
    pub fn phase_matching_time(&self) -> f64 {
        self.length * self.signal_walkoff().abs()
    }

    /// Dimensionless transverse argument `L |q_-|^2 / (4 k_p)`.
    pub fn spatial_argument(&self, q_minus: f64) -> f64 {
        self.length * q_minus * q_minus / (4.0 * self.pump_wavenumber)
    }

    /// `L Δk_z / 2`.
    pub fn spectral_argument(&self, kin: &TransverseKinematics) -> f64 {
        0.5 * self.length * delta_kz(kin, self)
    }
}

/// Pump beam: LG spatial mode and Gaussian pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    /// Beam waist `w` in meters.
    pub waist: f64,
    /// LG radial index `p`.
    pub radial_index: u32,
    /// LG azimuthal (OAM) index `l`.
    pub oam: i32,
    /// Pulse duration `t_0` in seconds; spectral envelope `exp[-(w_p - w_p0)^2 t_0^2 / 4]`.
    pub pulse_duration: f64,
}

impl PumpSpec {
    pub fn new(waist: f64, radial_index: u32, oam: i32, pulse_duration: f64) -> Result<Self> {
        let p = PumpSpec {
            waist,
            radial_index,
            oam,
            pulse_duration,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.waist > 0.0 && self.waist.is_finite()) {
            return Err(domain(format!("pump waist must be positive, got {}", self.waist)));
        }
        if !(self.pulse_duration > 0.0 && self.pulse_duration.is_finite()) {
            return Err(domain(format!("pulse duration must be positive, got {}", self.pulse_duration)));
        }
        Ok(())
    }

    /// `|S(Omega)|^2` for a frequency offset `Omega` of the pump.
    pub fn spectral_intensity(&self, omega: f64) -> f64 {
        let t = omega * self.pulse_duration;
        (-0.5 * t * t).exp()
    }
}

/// Shape used in place of `sinc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    SincExact,
    Gaussian,
    SuperGaussian,
    CosineGaussian,
    CosineSuperGaussian,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::SincExact,
        Family::Gaussian,
        Family::SuperGaussian,
        Family::CosineGaussian,
        Family::CosineSuperGaussian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SincExact => "sinc-exact",
            Family::Gaussian => "gaussian",
            Family::SuperGaussian => "super-gaussian",
            Family::CosineGaussian => "cosine-gaussian",
            Family::CosineSuperGaussian => "cosine-super-gaussian",
        }
    }

    pub fn has_cosine(self) -> bool {
        matches!(self, Family::CosineGaussian | Family::CosineSuperGaussian)
    }

    /// Number of free factors: 0 for sinc, 1 for alpha only, 2 for alpha and beta.
    pub fn factor_count(self) -> usize {
        match self {
            Family::SincExact => 0,
            Family::Gaussian | Family::SuperGaussian => 1,
            Family::CosineGaussian | Family::CosineSuperGaussian => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| domain(format!("unknown approximation family '{s}'")))
    }
}

/// Approximation family with its factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxSpec {
    pub family: Family,
    pub alpha: f64,
    /// Used only by the cosine families.
    pub beta: f64,
}

impl ApproxSpec {
    pub fn new(family: Family, alpha: f64, beta: f64) -> Result<Self> {
        let a = ApproxSpec { family, alpha, beta };
        a.validate()?;
        Ok(a)
    }

    pub fn sinc() -> Self {
        ApproxSpec {
            family: Family::SincExact,
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn gaussian(alpha: f64) -> Result<Self> {
        Self::new(Family::Gaussian, alpha, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.family == Family::SincExact {
            return Ok(());
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(domain(format!("alpha must be positive for {}, got {}", self.family, self.alpha)));
        }
        if self.family.has_cosine() && !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(domain(format!("beta must be non-negative, got {}", self.beta)));
        }
        Ok(())
    }

    /// Beta as it acts on the shape: zero unless the family has a cosine factor.
    pub fn effective_beta(&self) -> f64 {
        if self.family.has_cosine() {
            self.beta
        } else {
            0.0
        }
    }
}

/// Transverse momentum difference and frequency offsets of a signal/idler pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransverseKinematics {
    /// `|q_s - q_i|` in rad/m.
    pub q_minus: f64,
    /// Frequency deviations from the central frequencies, rad/s.
    pub omega_signal: f64,
    pub omega_idler: f64,
}

impl TransverseKinematics {
    pub fn new(q_minus: f64, omega_signal: f64, omega_idler: f64) -> Result<Self> {
        if !(q_minus >= 0.0) {
            return Err(domain("|q_-| must be non-negative"));
        }
        Ok(TransverseKinematics {
            q_minus,
            omega_signal,
            omega_idler,
        })
    }
}

/// Longitudinal phase mismatch in rad/m.
pub fn delta_kz(kin: &TransverseKinematics, opt: &CrystalOptics) -> f64 {
    (kin.omega_signal + kin.omega_idler) / opt.u_pump - kin.omega_signal / opt.u_signal
        - kin.omega_idler / opt.u_idler
        + kin.q_minus * kin.q_minus / (2.0 * opt.pump_wavenumber)
}

/// How the dimensionless argument handed to [`phase_matching_value`] was formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArgumentKind {
    /// `x = L |q_-|^2 / (4 k_p)`: already quadratic in momentum; exact shape `sinc(x)`,
    /// Gaussian `exp(-alpha x)`.
    Spatial,
    /// `x = L Δk_z / 2`: exact shape `sinc(x)`, Gaussian `exp(-alpha x^2)`.
    Spectral,
}

/// Value of the (approximated) phase-matching function.
pub fn phase_matching_value(x: f64, approx: &ApproxSpec, kind: ArgumentKind) -> f64 {
    if approx.family == Family::SincExact {
        return sinc(x);
    }
    // the Gaussian exponent variable; spectral arguments enter squared
    let s = match kind {
        ArgumentKind::Spatial => x,
        ArgumentKind::Spectral => x * x,
    };
    let (a, b) = (approx.alpha, approx.effective_beta());
    match approx.family {
        Family::SincExact => unreachable!(),
        Family::Gaussian => (-a * s).exp(),
        Family::SuperGaussian => (-a * s * s).exp(),
        Family::CosineGaussian => (-a * s).exp() * (b * s).cos(),
        Family::CosineSuperGaussian => (-a * s * s).exp() * (b * s).cos(),
    }
}

/// `exp(-(alpha - i beta) s)`, whose real part is the cosine-Gaussian shape.
pub fn complex_gaussian(s: f64, alpha: f64, beta: f64) -> Complex64 {
    (-Complex64::new(alpha, -beta) * s).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn optics() -> CrystalOptics {
        CrystalOptics::new(2e-3, 1e7, 1.5e8, 1.6e8, 1.6e8).unwrap()
    }

    #[test]
    fn mismatch_examples() {
        let o = optics();
        let k = TransverseKinematics::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(delta_kz(&k, &o), 0.0);
        let k = TransverseKinematics::new(0.0, 3e12, -3e12).unwrap();
        assert!(delta_kz(&k, &o).abs() < 1e-9);
        let o2 = CrystalOptics {
            pump_wavenumber: 1e7,
            ..o
        };
        let k = TransverseKinematics::new(1e5, 0.0, 0.0).unwrap();
        // |q_-|^2 / (2 k_p) = 1e10 / 2e7
        assert!((delta_kz(&k, &o2) - 500.0).abs() < 1e-9);
        assert!(TransverseKinematics::new(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn validation() {
        assert!(CrystalOptics::new(0.0, 1e7, 1.0, 1.0, 1.0).is_err());
        assert!(CrystalOptics::new(1e-3, 1e7, 1.0, -1.0, 1.0).is_err());
        assert!(PumpSpec::new(1e-4, 0, 0, 0.0).is_err());
        assert!(ApproxSpec::gaussian(0.0).is_err());
        assert!(ApproxSpec::new(Family::CosineGaussian, 0.4, -0.1).is_err());
        assert!(ApproxSpec::new(Family::Gaussian, 0.4, -0.1).is_ok());
        assert_eq!("cosine-super-gaussian".parse::<Family>().unwrap(), Family::CosineSuperGaussian);
        assert!("lorentzian".parse::<Family>().is_err());
    }

    #[test]
    fn shape_values() {
        assert_eq!(phase_matching_value(0.0, &ApproxSpec::sinc(), ArgumentKind::Spatial), 1.0);
        let g = ApproxSpec::gaussian(0.718).unwrap();
        assert!((phase_matching_value(1.0, &g, ArgumentKind::Spatial) - 0.487_727_6).abs() < 1e-6);
        assert!((phase_matching_value(2.0, &g, ArgumentKind::Spectral) - (-0.718f64 * 4.0).exp()).abs() < 1e-15);
        let cg = ApproxSpec::new(Family::CosineGaussian, 0.7, 0.0).unwrap();
        for &x in &[0.1, 1.0, 3.0] {
            let re = complex_gaussian(x, 0.7, 0.0).re;
            assert!((re - phase_matching_value(x, &g_with(0.7), ArgumentKind::Spatial)).abs() < 1e-15);
            assert!((re - phase_matching_value(x, &cg, ArgumentKind::Spatial)).abs() < 1e-15);
        }
    }

    fn g_with(alpha: f64) -> ApproxSpec {
        ApproxSpec::gaussian(alpha).unwrap()
    }

    proptest! {
        #[test]
        fn mismatch_is_linear_in_frequencies(
            ws1 in -1e13..1e13f64, wi1 in -1e13..1e13f64,
            ws2 in -1e13..1e13f64, wi2 in -1e13..1e13f64,
            q in 0.0..1e5f64,
        ) {
            let o = optics();
            let at = |ws: f64, wi: f64| delta_kz(&TransverseKinematics { q_minus: q, omega_signal: ws, omega_idler: wi }, &o);
            let base = at(0.0, 0.0);
            let lhs = at(ws1 + ws2, wi1 + wi2) - base;
            let rhs = (at(ws1, wi1) - base) + (at(ws2, wi2) - base);
            let scale = (ws1.abs() + ws2.abs() + wi1.abs() + wi2.abs()) / 1.5e8;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));
        }

        #[test]
        fn every_shape_tends_to_one_at_origin(
            fam in 0usize..5, a in 0.01..5.0f64, b in 0.0..3.0f64,
        ) {
            let approx = ApproxSpec { family: Family::ALL[fam], alpha: a, beta: b };
            for kind in [ArgumentKind::Spatial, ArgumentKind::Spectral] {
                prop_assert!((phase_matching_value(1e-9, &approx, kind) - 1.0).abs() < 1e-7);
            }
        }

        #[test]
        fn euler_identity(s in 0.0..20.0f64, a in 0.0..3.0f64, b in 0.0..3.0f64) {
            let v = complex_gaussian(s, a, b).re;
            prop_assert!((v - (-a * s).exp() * (b * s).cos()).abs() <= 1e-15);
        }
    }
}
