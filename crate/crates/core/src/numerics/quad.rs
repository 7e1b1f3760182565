//! Adaptive Gauss-Kronrod quadrature on finite and semi-infinite ranges, and
//! tensor-product Gauss-Legendre cubature on boxes.
//!
//! Semi-infinite integrals of sinc-type integrands are cut at the zeros of the
//! oscillating factor (multiples of [`QuadSpec::oscillation_period`]); the
//! sequence of panel partial sums is then extrapolated: Levin u-transform for
//! alternating tails (damped sinc), Richardson extrapolation in 1/X for
//! one-signed tails (sinc squared).

use num_complex::Complex64;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use super::special::binomial;
use super::QuadSpec;
use crate::error::{Error, Result};

/// Scalar types the integrators can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn finite(&self) -> bool;
    fn over(self, other: Self) -> Self;
    fn recip(self) -> Self;
    /// Real part; used only to read the sign pattern of panel sums.
    fn real(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn over(self, other: Self) -> Self {
        self / other
    }
    fn recip(self) -> Self {
        1.0 / self
    }
    fn real(&self) -> f64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn over(self, other: Self) -> Self {
        self / other
    }
    fn recip(self) -> Self {
        self.inv()
    }
    fn real(&self) -> f64 {
        self.re
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 21-point Kronrod rule with the QUADPACK error heuristic.
fn gk21<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> Estimate<V> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = V::zero();
    let mut fv1 = [V::zero(); 10];
    let mut fv2 = [V::zero(); 10];
    let mut resabs = fc.magnitude() * WGK[10];
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let hab = half.abs();
    let resasc = resasc * hab;
    let resabs = resabs * hab;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Estimate {
        value: kronrod * half,
        error: err,
    }
}

struct Segment<V> {
    a: f64,
    b: f64,
    est: Estimate<V>,
}

/// Adaptive integration over a finite interval `[a, b]`.
pub fn quad<V: QuadValue, F: Fn(f64) -> V>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<Estimate<V>> {
    spec.validate()?;
    if a == b {
        return Ok(Estimate {
            value: V::zero(),
            error: 0.0,
        });
    }
    let first = gk21(&f, a, b);
    let mut segments = vec![Segment { a, b, est: first }];
    let mut total = first.value;
    let mut total_err = first.error;
    loop {
        if !total.finite() {
            return Err(Error::NonConvergence {
                estimate: f64::NAN,
                error: f64::INFINITY,
                subdivisions: segments.len(),
            });
        }
        let target = spec.abs_tol.max(spec.rel_tol * total.magnitude());
        if total_err <= target {
            return Ok(Estimate {
                value: total,
                error: total_err,
            });
        }
        if segments.len() >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: total.magnitude(),
                error: total_err,
                subdivisions: segments.len(),
            });
        }
        // bisect the segment with the largest error
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.est.error.total_cmp(&y.1.est.error))
            .expect("segment list is never empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // interval at machine resolution; accept what we have
            return Ok(Estimate {
                value: total,
                error: total_err,
            });
        }
        let left = gk21(&f, seg.a, mid);
        let right = gk21(&f, mid, seg.b);
        total = total - seg.est.value + left.value + right.value;
        total_err = total_err - seg.est.error + left.error + right.error;
        segments.push(Segment { a: seg.a, b: mid, est: left });
        segments.push(Segment { a: mid, b: seg.b, est: right });
        // keep the running error free of cancellation drift
        if segments.len() % 64 == 0 {
            total_err = segments.iter().map(|s| s.est.error).sum();
        }
    }
}

/// Integral over `[0, inf)`.
pub fn quad_semi_infinite<V: QuadValue, F: Fn(f64) -> V>(f: F, spec: &QuadSpec) -> Result<Estimate<V>> {
    quad_tail(f, 0.0, spec)
}

/// Integral over `[lower, inf)`.
///
/// With an oscillation period set, the range is cut at multiples of the period
/// and the panel sums are extrapolated; otherwise the range is mapped onto
/// `(0, 1]` by `x = lower + (1 - t) / t`.
pub fn quad_tail<V: QuadValue, F: Fn(f64) -> V>(f: F, lower: f64, spec: &QuadSpec) -> Result<Estimate<V>> {
    spec.validate()?;
    match spec.oscillation_period {
        Some(period) => panel_sum(&f, lower, period, spec),
        None => {
            let g = |t: f64| {
                let x = lower + (1.0 - t) / t;
                let v = f(x);
                if v.magnitude() == 0.0 {
                    V::zero()
                } else {
                    v * (1.0 / (t * t))
                }
            };
            quad(g, 0.0, 1.0, spec)
        }
    }
}

/// Integral over the whole real line, as two tails meeting at `center`.
pub fn quad_real_line<V: QuadValue, F: Fn(f64) -> V>(f: F, center: f64, spec: &QuadSpec) -> Result<Estimate<V>> {
    let right = quad_tail(&f, center, spec)?;
    let left = quad_tail(|x| f(2.0 * center - x), center, spec)?;
    Ok(Estimate {
        value: right.value + left.value,
        error: right.error + left.error,
    })
}

const LEVIN_WINDOW: usize = 16;
/// Number of trailing panel sums inspected to classify the tail.
const SIGN_WINDOW: usize = 8;
const RICHARDSON_DEPTH: usize = 8;

#[derive(PartialEq)]
enum TailShape {
    Alternating,
    OneSigned,
    Irregular,
}

fn tail_shape<V: QuadValue>(terms: &[V]) -> TailShape {
    if terms.len() < SIGN_WINDOW {
        return TailShape::Irregular;
    }
    let w = &terms[terms.len() - SIGN_WINDOW..];
    if w.windows(2).all(|p| p[0].real() * p[1].real() < 0.0) {
        TailShape::Alternating
    } else if w.iter().all(|t| t.real() > 0.0) || w.iter().all(|t| t.real() < 0.0) {
        TailShape::OneSigned
    } else {
        TailShape::Irregular
    }
}

// Panel sums of sinc-type integrands. Alternating sequences (a single
// oscillating factor) go through the Levin u-transform. One-signed sequences
// (sinc squared) converge logarithmically, where Levin is numerically
// unstable; for those the partial integrals at panel edges X admit an
// expansion in powers of 1/X and are extrapolated by Neville's scheme at
// doubling panel counts.
fn panel_sum<V: QuadValue, F: Fn(f64) -> V>(f: &F, lower: f64, period: f64, spec: &QuadSpec) -> Result<Estimate<V>> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::Domain("oscillation period must be positive".into()));
    }
    let panel_spec = QuadSpec {
        rel_tol: spec.rel_tol * 0.1,
        abs_tol: spec.abs_tol * 0.1,
        oscillation_period: None,
        ..*spec
    };
    let mut edge = lower;
    let mut next = ((lower / period).floor() + 1.0) * period;
    if next - lower < 1e-12 * period.max(lower.abs()) {
        next += period;
    }

    let mut partial: Vec<V> = Vec::new();
    let mut terms: Vec<V> = Vec::new();
    let mut sum = V::zero();
    let mut quad_err = 0.0;
    let mut last_extrap: Option<V> = None;
    let mut tiny_run = 0;
    // (1/X, partial integral) at panel counts 4, 8, 16, ...
    let mut checkpoints: Vec<(f64, V)> = Vec::new();

    for _ in 0..spec.max_subdivisions {
        let piece = quad(f, edge, next, &panel_spec)?;
        sum = sum + piece.value;
        quad_err += piece.error;
        partial.push(sum);
        terms.push(piece.value);
        edge = next;
        next += period;

        let target = spec.abs_tol.max(spec.rel_tol * sum.magnitude());
        if piece.value.magnitude() <= 0.01 * target {
            tiny_run += 1;
            if tiny_run >= 3 {
                return Ok(Estimate {
                    value: sum,
                    error: quad_err + piece.value.magnitude(),
                });
            }
            continue;
        }
        tiny_run = 0;

        match tail_shape(&terms) {
            TailShape::Alternating => {
                if let Some(est) = levin_u(&partial, &terms) {
                    if let Some(prev) = last_extrap {
                        let diff = (est - prev).magnitude();
                        let target = spec.abs_tol.max(spec.rel_tol * est.magnitude());
                        if diff <= target && partial.len() >= 10 {
                            return Ok(Estimate {
                                value: est,
                                error: diff + quad_err,
                            });
                        }
                    }
                    last_extrap = Some(est);
                }
            }
            TailShape::OneSigned => {
                let n = partial.len();
                if n.is_power_of_two() && edge > 0.0 {
                    checkpoints.push((1.0 / edge, sum));
                    if checkpoints.len() > RICHARDSON_DEPTH {
                        checkpoints.remove(0);
                    }
                    if let Some((est, diff)) = neville_at_zero(&checkpoints) {
                        let target = spec.abs_tol.max(spec.rel_tol * est.magnitude());
                        if diff <= target {
                            return Ok(Estimate {
                                value: est,
                                error: diff + quad_err,
                            });
                        }
                    }
                }
            }
            TailShape::Irregular => checkpoints.clear(),
        }
    }
    Err(Error::NonConvergence {
        estimate: sum.magnitude(),
        error: f64::INFINITY,
        subdivisions: spec.max_subdivisions,
    })
}

// Polynomial extrapolation of (h, S(h)) to h = 0; returns the estimate and the
// change from the previous diagonal element. Needs at least three points.
fn neville_at_zero<V: QuadValue>(points: &[(f64, V)]) -> Option<(V, f64)> {
    let m = points.len();
    if m < 3 {
        return None;
    }
    let h: Vec<f64> = points.iter().map(|p| p.0).collect();
    // p[j] holds the interpolant through points j-k..=j evaluated at zero
    let mut p: Vec<V> = points.iter().map(|p| p.1).collect();
    let mut before = p[m - 1];
    for k in 1..m {
        before = p[m - 1];
        for j in (k..m).rev() {
            p[j] = p[j] + (p[j] - p[j - 1]) * (h[j] / (h[j - k] - h[j]));
        }
    }
    Some((p[m - 1], (p[m - 1] - before).magnitude()))
}

// Levin u-transform over the trailing window of partial sums.
fn levin_u<V: QuadValue>(partial: &[V], terms: &[V]) -> Option<V> {
    let n = partial.len();
    let k = (n - 1).min(LEVIN_WINDOW);
    let start = n - 1 - k;
    let beta = 1.0;
    let last = beta + (start + k) as f64;
    let mut num = V::zero();
    let mut den = V::zero();
    for j in 0..=k {
        let idx = start + j;
        let a = terms[idx];
        if a.magnitude() == 0.0 {
            return None;
        }
        let pos = beta + idx as f64;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let weight = sign * binomial(k as u64, j as u64) * (pos / last).powi(k as i32 - 1) / pos;
        // weights carry 1/omega_j with omega_j = pos * a_j
        num = num + partial[idx].over(a) * weight;
        den = den + a.recip() * weight;
    }
    let out = num.over(den);
    out.finite().then_some(out)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

const GL_ORDER: usize = 20;

fn gl_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Composite Gauss-Legendre nodes/weights on `[a, b]` with `panels` equal panels.
pub(crate) fn composite_rule(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let (x, w) = gl_rule();
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * GL_ORDER);
    for p in 0..panels {
        let c = a + h * (p as f64 + 0.5);
        for (xi, wi) in x.iter().zip(w) {
            out.push((c + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

/// Cubature over a 2-D or 3-D box.
///
/// Tensor-product composite Gauss-Legendre; the number of panels per axis is
/// doubled until two successive estimates agree to tolerance. Intended for
/// smooth integrands (Gaussian envelopes truncated by the caller).
pub fn quad_nd<V: QuadValue, F: Fn(&[f64]) -> V>(f: F, bounds: &[(f64, f64)], spec: &QuadSpec) -> Result<Estimate<V>> {
    spec.validate()?;
    if !(2..=3).contains(&bounds.len()) {
        return Err(Error::Domain(format!("quad_nd supports 2 or 3 dimensions, got {}", bounds.len())));
    }
    let mut panels = 1;
    let mut previous: Option<V> = None;
    loop {
        let value = tensor_sum(&f, bounds, panels);
        if !value.finite() {
            return Err(Error::NonConvergence {
                estimate: f64::NAN,
                error: f64::INFINITY,
                subdivisions: panels,
            });
        }
        if let Some(prev) = previous {
            let diff = (value - prev).magnitude();
            if diff <= spec.abs_tol.max(spec.rel_tol * value.magnitude()) {
                return Ok(Estimate { value, error: diff });
            }
            if panels * 2 > spec.max_subdivisions.max(2) {
                return Err(Error::NonConvergence {
                    estimate: value.magnitude(),
                    error: diff,
                    subdivisions: panels,
                });
            }
        }
        previous = Some(value);
        panels *= 2;
    }
}

fn tensor_sum<V: QuadValue, F: Fn(&[f64]) -> V>(f: &F, bounds: &[(f64, f64)], panels: usize) -> V {
    let rules: Vec<_> = bounds.iter().map(|&(a, b)| composite_rule(a, b, panels)).collect();
    let mut total = V::zero();
    let mut point = vec![0.0; bounds.len()];
    match bounds.len() {
        2 => {
            for &(x, wx) in &rules[0] {
                point[0] = x;
                let mut row = V::zero();
                for &(y, wy) in &rules[1] {
                    point[1] = y;
                    row = row + f(&point) * wy;
                }
                total = total + row * wx;
            }
        }
        _ => {
            for &(x, wx) in &rules[0] {
                point[0] = x;
                let mut plane = V::zero();
                for &(y, wy) in &rules[1] {
                    point[1] = y;
                    let mut row = V::zero();
                    for &(z, wz) in &rules[2] {
                        point[2] = z;
                        row = row + f(&point) * wz;
                    }
                    plane = plane + row * wy;
                }
                total = total + plane * wx;
            }
        }
    }
    total
}
