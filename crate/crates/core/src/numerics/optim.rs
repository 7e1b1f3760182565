//! Derivative-free maximization over one or two bounded factors.
//!
//! One factor: a coarse scan locates the bracket, then Brent's
//! golden-section/parabolic search refines it. Two factors: Nelder-Mead from
//! the best few points of a coarse grid, with points projected onto the box.

use super::OptimResult;
use crate::error::{domain, Error, Result};

/// Stopping rules for [`maximize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimSpec {
    /// Target accuracy of the argmax in each factor.
    pub tol: f64,
    pub max_evals: usize,
    /// Coarse-scan points per factor before local refinement.
    pub scan: usize,
    /// Number of Nelder-Mead starts in 2-D.
    pub starts: usize,
}

impl Default for OptimSpec {
    fn default() -> Self {
        OptimSpec {
            tol: 1e-6,
            max_evals: 5000,
            scan: 24,
            starts: 4,
        }
    }
}

struct Counted<F> {
    f: F,
    evals: usize,
}

impl<F: FnMut(&[f64]) -> Result<f64>> Counted<F> {
    fn call(&mut self, x: &[f64]) -> Result<f64> {
        self.evals += 1;
        let v = (self.f)(x)?;
        if v.is_nan() {
            return Err(Error::Domain(format!("objective is NaN at {x:?}")));
        }
        Ok(v)
    }
}

/// Maximizes a fallible objective of one or two factors inside `bounds`.
pub fn maximize<F>(f: F, bounds: &[(f64, f64)], spec: &OptimSpec) -> Result<OptimResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(domain(format!("invalid bounds [{lo}, {hi}]")));
        }
    }
    if !(spec.tol > 0.0) || spec.max_evals == 0 {
        return Err(domain("optimizer tolerance and budget must be positive"));
    }
    let mut obj = Counted { f, evals: 0 };
    match bounds.len() {
        1 => maximize_1d(&mut obj, bounds[0], spec),
        2 => maximize_2d(&mut obj, bounds, spec),
        n => Err(domain(format!("maximize supports 1 or 2 factors, got {n}"))),
    }
}

/// Infallible-objective convenience wrapper.
pub fn maximize_fn<F>(mut f: F, bounds: &[(f64, f64)], spec: &OptimSpec) -> Result<OptimResult>
where
    F: FnMut(&[f64]) -> f64,
{
    maximize(|x| Ok(f(x)), bounds, spec)
}

fn maximize_1d<F>(obj: &mut Counted<F>, (lo, hi): (f64, f64), spec: &OptimSpec) -> Result<OptimResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let n = spec.scan.max(3);
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let v = obj.call(&[x])?;
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(n - 1)];
    let budget = spec.max_evals.saturating_sub(obj.evals);
    let (x, v, converged) = brent_max(|x| obj.call(&[x]), a, b, spec.tol, budget)?;
    let (x, v) = if v >= best_val { (x, v) } else { (grid[best], best_val) };
    Ok(OptimResult {
        argmax: vec![x],
        value: v,
        evaluations: obj.evals,
        converged,
    })
}

// Brent's method on [a, b], maximizing.
fn brent_max<G>(mut g: G, mut a: f64, mut b: f64, tol: f64, budget: usize) -> Result<(f64, f64, bool)>
where
    G: FnMut(f64) -> Result<f64>,
{
    const GOLD: f64 = 0.381_966_011_250_105_1;
    let mut x = a + GOLD * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = -g(x)?;
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let mut used = 1;
    while used < budget.max(2) {
        let m = 0.5 * (a + b);
        let tol1 = tol * 0.5 + 1e-12 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            return Ok((x, -fx, true));
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if m >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= m { a - x } else { b - x };
            d = GOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = -g(u)?;
        used += 1;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    Ok((x, -fx, false))
}

fn clamp_point(p: [f64; 2], bounds: &[(f64, f64)]) -> [f64; 2] {
    [p[0].clamp(bounds[0].0, bounds[0].1), p[1].clamp(bounds[1].0, bounds[1].1)]
}

fn maximize_2d<F>(obj: &mut Counted<F>, bounds: &[(f64, f64)], spec: &OptimSpec) -> Result<OptimResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let n = (spec.scan / 2).max(4);
    let mut scanned = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let p = [
                bounds[0].0 + (bounds[0].1 - bounds[0].0) * (i as f64 + 0.5) / n as f64,
                bounds[1].0 + (bounds[1].1 - bounds[1].0) * (j as f64 + 0.5) / n as f64,
            ];
            let v = obj.call(&p)?;
            scanned.push((v, p));
        }
    }
    scanned.sort_by(|x, y| y.0.total_cmp(&x.0));
    let starts = spec.starts.max(4).min(scanned.len());
    let step = [
        (bounds[0].1 - bounds[0].0) / n as f64,
        (bounds[1].1 - bounds[1].0) / n as f64,
    ];

    let mut best = (scanned[0].0, scanned[0].1);
    let mut all_converged = true;
    for &(_, start) in scanned.iter().take(starts) {
        let (mut p, mut v, mut ok) = nelder_mead(obj, start, step, bounds, spec)?;
        // one restart around the optimum guards against a collapsed simplex
        let small = [step[0] * 0.05, step[1] * 0.05];
        let (p2, v2, ok2) = nelder_mead(obj, p, small, bounds, spec)?;
        if v2 >= v {
            p = p2;
            v = v2;
        }
        ok &= ok2;
        all_converged &= ok;
        if v > best.0 {
            best = (v, p);
        }
    }
    Ok(OptimResult {
        argmax: best.1.to_vec(),
        value: best.0,
        evaluations: obj.evals,
        converged: all_converged,
    })
}

fn nelder_mead<F>(
    obj: &mut Counted<F>,
    start: [f64; 2],
    step: [f64; 2],
    bounds: &[(f64, f64)],
    spec: &OptimSpec,
) -> Result<([f64; 2], f64, bool)>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let eval = |obj: &mut Counted<F>, p: [f64; 2]| -> Result<([f64; 2], f64)> {
        let p = clamp_point(p, bounds);
        Ok((p, -obj.call(&p)?))
    };
    let mut simplex = [
        eval(obj, start)?,
        eval(obj, [start[0] + step[0], start[1]])?,
        eval(obj, [start[0], start[1] + step[1]])?,
    ];
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let size = simplex
            .iter()
            .skip(1)
            .map(|(p, _)| (p[0] - simplex[0].0[0]).abs().max((p[1] - simplex[0].0[1]).abs()))
            .fold(0.0, f64::max);
        let spread = (simplex[2].1 - simplex[0].1).abs();
        if size <= spec.tol && spread <= 1e-12 * simplex[0].1.abs().max(1.0) {
            return Ok((simplex[0].0, -simplex[0].1, true));
        }
        if obj.evals >= spec.max_evals {
            return Ok((simplex[0].0, -simplex[0].1, false));
        }
        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let worst = simplex[2];
        let along = |t: f64| [centroid[0] + t * (worst.0[0] - centroid[0]), centroid[1] + t * (worst.0[1] - centroid[1])];
        let reflected = eval(obj, along(-1.0))?;
        if reflected.1 < simplex[0].1 {
            let expanded = eval(obj, along(-2.0))?;
            simplex[2] = if expanded.1 < reflected.1 { expanded } else { reflected };
        } else if reflected.1 < simplex[1].1 {
            simplex[2] = reflected;
        } else {
            let contracted = if reflected.1 < worst.1 {
                eval(obj, along(-0.5))?
            } else {
                eval(obj, along(0.5))?
            };
            if contracted.1 < worst.1.min(reflected.1) {
                simplex[2] = contracted;
            } else {
                let best = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    let p = vertex.0;
                    *vertex = eval(obj, [best[0] + 0.5 * (p[0] - best[0]), best[1] + 0.5 * (p[1] - best[1])])?;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_1d() {
        let r = maximize_fn(|x| -(x[0] - 2.0).powi(2), &[(0.0, 5.0)], &OptimSpec::default()).unwrap();
        assert!((r.argmax[0] - 2.0).abs() < 1e-5);
        assert!(r.value.abs() < 1e-10);
        assert!(r.converged);
    }

    #[test]
    fn maximum_on_boundary() {
        let r = maximize_fn(|x| x[0], &[(0.0, 1.0)], &OptimSpec::default()).unwrap();
        assert!((r.argmax[0] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn two_peaks_2d_finds_global() {
        // local bump at (0.2, 0.2), global at (0.8, 0.7)
        let f = |p: &[f64]| {
            0.5 * (-((p[0] - 0.2).powi(2) + (p[1] - 0.2).powi(2)) * 50.0).exp()
                + (-((p[0] - 0.8).powi(2) + (p[1] - 0.7).powi(2)) * 30.0).exp()
        };
        let r = maximize_fn(f, &[(0.0, 1.0), (0.0, 1.0)], &OptimSpec::default()).unwrap();
        assert!((r.argmax[0] - 0.8).abs() < 1e-4 && (r.argmax[1] - 0.7).abs() < 1e-4, "{:?}", r.argmax);
        assert!((r.value - f(&r.argmax)).abs() < 1e-15);
    }

    #[test]
    fn value_matches_objective_at_argmax() {
        let f = |x: &[f64]| (x[0] * 3.0).sin() * (-x[0]).exp();
        let r = maximize_fn(f, &[(0.0, 3.0)], &OptimSpec::default()).unwrap();
        assert_eq!(r.value, f(&r.argmax));
        // concave near the optimum: central difference vanishes
        let h = 1e-4;
        let d = (f(&[r.argmax[0] + h]) - f(&[r.argmax[0] - h])) / (2.0 * h);
        assert!(d.abs() < 10.0 * 1e-5, "derivative {d}");
    }

    #[test]
    fn errors_and_flags() {
        assert!(maximize_fn(|x| x[0], &[(1.0, 0.0)], &OptimSpec::default()).is_err());
        assert!(maximize_fn(|x| x[0], &[(0.0, 1.0); 3], &OptimSpec::default()).is_err());
        let tight = OptimSpec { max_evals: 30, ..OptimSpec::default() };
        let r = maximize_fn(|x| -(x[0] - 0.3).powi(2), &[(0.0, 1.0)], &tight).unwrap();
        assert!(!r.converged);
        let failing = maximize(|_| Err(Error::Domain("boom".into())), &[(0.0, 1.0)], &OptimSpec::default());
        assert!(failing.is_err());
    }
}
