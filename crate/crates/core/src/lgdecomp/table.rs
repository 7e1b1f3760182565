use nalgebra::DMatrix;
use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::analytic::amplitude;
use super::ModeIndices;
use crate::error::{domain, Result};
use crate::model::{ApproxSpec, CrystalOptics, Family, PumpSpec};

/// Captured weight below which a truncated table is flagged.
const WEIGHT_WARNING: f64 = 0.99;

/// One coincidence amplitude. A failed evaluation keeps its row with a zero
/// amplitude and the error message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub p_signal: u32,
    pub oam_signal: i32,
    pub p_idler: u32,
    pub oam_idler: i32,
    pub amplitude: Complex64,
    pub probability: f64,
    pub error: Option<String>,
}

/// Amplitudes for all `p_s, p_i <= p_max` and `|l_s|, |l_i| <= l_max` allowed by OAM conservation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeTable {
    pub p_max: u32,
    pub l_max: u32,
    pub pump_oam: i32,
    pub entries: Vec<TableEntry>,
    /// `sum |C|^2` over the table; 1 for a complete basis.
    pub captured_weight: f64,
}

/// Schmidt decomposition summary of a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtReport {
    pub schmidt_number: f64,
    pub captured_weight: f64,
    /// Normalized Schmidt weights, largest first.
    pub weights: Vec<f64>,
    /// True when the captured weight is below 0.99 and the table is too small.
    pub truncated: bool,
}

/// Evaluates every amplitude of the truncated basis.
///
/// Invalid inputs shared by all rows (waists, family, crystal) are rejected
/// up front; per-row failures are recorded in the rows.
pub fn amplitude_table(
    pump: &PumpSpec,
    opt: &CrystalOptics,
    approx: &ApproxSpec,
    waist_signal: f64,
    waist_idler: f64,
    p_max: u32,
    l_max: u32,
) -> Result<AmplitudeTable> {
    pump.validate()?;
    opt.validate()?;
    approx.validate()?;
    if !matches!(approx.family, Family::Gaussian | Family::CosineGaussian) {
        return Err(domain(format!("LG amplitudes are available for gaussian and cosine-gaussian, got {}", approx.family)));
    }
    let l_max_i = i32::try_from(l_max).map_err(|_| domain("l_max is too large"))?;
    let mut index = Vec::new();
    for ls in -l_max_i..=l_max_i {
        let li = pump.oam - ls;
        if li.abs() > l_max_i {
            continue;
        }
        for ps in 0..=p_max {
            for pi in 0..=p_max {
                index.push(ModeIndices::new(ps, ls, pi, li, waist_signal, waist_idler)?);
            }
        }
    }
    let run = |m: &ModeIndices| -> TableEntry {
        let (c, error) = match amplitude(pump, m, opt, approx) {
            Ok(c) => (c, None),
            Err(e) => (Complex64::new(0.0, 0.0), Some(e.to_string())),
        };
        TableEntry {
            p_signal: m.p_signal,
            oam_signal: m.oam_signal,
            p_idler: m.p_idler,
            oam_idler: m.oam_idler,
            amplitude: c,
            probability: c.norm_sqr(),
            error,
        }
    };
    #[cfg(feature = "parallel")]
    let entries: Vec<_> = index.par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let entries: Vec<_> = index.iter().map(run).collect();
    let captured_weight = entries.iter().map(|e| e.probability).sum();
    Ok(AmplitudeTable {
        p_max,
        l_max,
        pump_oam: pump.oam,
        entries,
        captured_weight,
    })
}

/// Schmidt number `K = 1 / sum lambda_k^2` of the table renormalized to unit weight.
///
/// The amplitudes form a matrix indexed by signal `(p_s, l_s)` and idler
/// `(p_i, l_i)`; its squared singular values are the Schmidt weights.
pub fn schmidt_number(table: &AmplitudeTable) -> Result<SchmidtReport> {
    if !(table.captured_weight > 0.0) {
        return Err(domain("the table carries no weight"));
    }
    let side = |p: u32, l: i32| -> usize {
        ((l + table.l_max as i32) as usize) * (table.p_max as usize + 1) + p as usize
    };
    let n = (2 * table.l_max as usize + 1) * (table.p_max as usize + 1);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for e in &table.entries {
        let outside = |p: u32, l: i32| p > table.p_max || l.unsigned_abs() > table.l_max;
        if outside(e.p_signal, e.oam_signal) || outside(e.p_idler, e.oam_idler) {
            return Err(domain("table entry lies outside the declared p_max / l_max"));
        }
        m[(side(e.p_signal, e.oam_signal), side(e.p_idler, e.oam_idler))] = e.amplitude;
    }
    let sv = m.singular_values();
    let total: f64 = sv.iter().map(|s| s * s).sum();
    let mut weights: Vec<f64> = sv.iter().map(|s| s * s / total).filter(|&w| w > 0.0).collect();
    weights.sort_by(|a, b| b.total_cmp(a));
    let purity: f64 = weights.iter().map(|w| w * w).sum();
    Ok(SchmidtReport {
        schmidt_number: 1.0 / purity,
        captured_weight: table.captured_weight,
        weights,
        truncated: table.captured_weight < WEIGHT_WARNING,
    })
}

/// Weight per signal OAM value, summed over radial indices.
pub fn spiral_spectrum(table: &AmplitudeTable) -> BTreeMap<i32, f64> {
    let mut out = BTreeMap::new();
    for e in &table.entries {
        *out.entry(e.oam_signal).or_insert(0.0) += e.probability;
    }
    out
}
