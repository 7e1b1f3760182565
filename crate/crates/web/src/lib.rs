//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Three operations, each returning plain JS objects: the spatial fidelity
//! curve of one family, the cosine-Gaussian fidelity map over `(alpha, beta)`,
//! and the spiral (OAM) spectrum of the Gaussian-approximated state.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use spdc_gauss::fidelity::{fidelity, Method, Mode};
use spdc_gauss::lgdecomp::{amplitude_table, schmidt_number, spiral_spectrum};
use spdc_gauss::preset::typical_ppktp_like;
use spdc_gauss::{ApproxSpec, CrystalOptics, Family, PumpSpec, QuadSpec};

/// Grid sizes above this would stall the page.
const MAX_POINTS: usize = 400;
const MAX_ORDER: u32 = 12;

type Result<T> = std::result::Result<T, String>;

fn text(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn to_js<T: Serialize>(v: Result<T>) -> std::result::Result<JsValue, JsError> {
    let v = v.map_err(|e| JsError::new(&e))?;
    serde_wasm_bindgen::to_value(&v).map_err(|e| JsError::new(&e.to_string()))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn check_grid(lo: f64, hi: f64, n: usize) -> Result<()> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err("the range needs 0 < start < stop".into());
    }
    if n == 0 || n > MAX_POINTS {
        return Err(format!("point count must lie in 1..={MAX_POINTS}"));
    }
    Ok(())
}

fn spatial(approx: &ApproxSpec) -> spdc_gauss::Result<f64> {
    let preset = typical_ppktp_like();
    // the spatial fidelity does not depend on the crystal or pump
    let (opt, pump) = (preset.optics()?, preset.pump()?);
    fidelity(approx, Mode::Spatial, &opt, &pump, &QuadSpec::default(), Method::ClosedForm).map(|r| r.fidelity)
}

#[derive(Debug, Serialize)]
pub struct Curve {
    pub alpha: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub best_alpha: f64,
    pub best_fidelity: f64,
}

/// Spatial fidelity of `family` against `alpha` on a linear grid.
///
/// `beta` is used by the cosine families only.
pub fn fidelity_curve(family: &str, beta: f64, alpha_min: f64, alpha_max: f64, points: usize) -> Result<Curve> {
    let family: Family = family.parse().map_err(text)?;
    if !matches!(family, Family::Gaussian | Family::SuperGaussian | Family::CosineGaussian) {
        return Err(format!("{family} has no closed form; use the CLI"));
    }
    check_grid(alpha_min, alpha_max, points)?;
    let alpha = linspace(alpha_min, alpha_max, points);
    let fidelity = alpha
        .iter()
        .map(|&a| spatial(&ApproxSpec::new(family, a, beta)?))
        .collect::<spdc_gauss::Result<Vec<f64>>>()
        .map_err(text)?;
    let best = (0..points).max_by(|&i, &j| fidelity[i].total_cmp(&fidelity[j])).unwrap_or(0);
    Ok(Curve {
        best_alpha: alpha[best],
        best_fidelity: fidelity[best],
        alpha,
        fidelity,
    })
}

#[wasm_bindgen(js_name = fidelityCurve)]
pub fn fidelity_curve_js(family: &str, beta: f64, alpha_min: f64, alpha_max: f64, points: usize) -> std::result::Result<JsValue, JsError> {
    to_js(fidelity_curve(family, beta, alpha_min, alpha_max, points))
}

#[derive(Debug, Serialize)]
pub struct Map {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Row-major, one row per beta value.
    pub fidelity: Vec<f64>,
    pub best_alpha: f64,
    pub best_beta: f64,
    pub best_fidelity: f64,
}

/// Cosine-Gaussian spatial fidelity on an `n x n` grid of `(alpha, beta)`.
pub fn cosine_gaussian_map(alpha_max: f64, beta_max: f64, n: usize) -> Result<Map> {
    if !(2..=MAX_POINTS / 2).contains(&n) {
        return Err(format!("grid side must lie in 2..={}", MAX_POINTS / 2));
    }
    check_grid(alpha_max / n as f64, alpha_max, n)?;
    if !(beta_max > 0.0 && beta_max.is_finite()) {
        return Err("beta range must be positive".into());
    }
    let alpha = linspace(alpha_max / n as f64, alpha_max, n);
    let beta = linspace(0.0, beta_max, n);
    let mut fidelity = Vec::with_capacity(n * n);
    for &b in &beta {
        for &a in &alpha {
            fidelity.push(ApproxSpec::new(Family::CosineGaussian, a, b).and_then(|s| spatial(&s)).map_err(text)?);
        }
    }
    let best = (0..fidelity.len()).max_by(|&i, &j| fidelity[i].total_cmp(&fidelity[j])).unwrap_or(0);
    Ok(Map {
        best_alpha: alpha[best % n],
        best_beta: beta[best / n],
        best_fidelity: fidelity[best],
        alpha,
        beta,
        fidelity,
    })
}

#[wasm_bindgen(js_name = cosineGaussianMap)]
pub fn cosine_gaussian_map_js(alpha_max: f64, beta_max: f64, n: usize) -> std::result::Result<JsValue, JsError> {
    to_js(cosine_gaussian_map(alpha_max, beta_max, n))
}

#[derive(Debug, Serialize)]
pub struct Spectrum {
    pub oam: Vec<i32>,
    pub weight: Vec<f64>,
    pub captured_weight: f64,
    pub schmidt_number: Option<f64>,
}

/// Spiral spectrum of the signal photon for an LG pump.
///
/// The crystal is the bundled preset with the given length; signal and idler
/// waists equal the pump waist. Lengths in millimeters, waist in micrometers.
pub fn oam_spectrum(
    pump_p: u32,
    pump_l: i32,
    waist_um: f64,
    length_mm: f64,
    alpha: f64,
    p_max: u32,
    l_max: u32,
) -> Result<Spectrum> {
    if p_max > MAX_ORDER || l_max > MAX_ORDER {
        return Err(format!("p_max and l_max must not exceed {MAX_ORDER}"));
    }
    let base = typical_ppktp_like().optics().map_err(text)?;
    let opt = CrystalOptics::new(length_mm * 1e-3, base.pump_wavenumber, base.u_pump, base.u_signal, base.u_idler)
        .map_err(text)?;
    let w = waist_um * 1e-6;
    let pump = PumpSpec::new(w, pump_p, pump_l, typical_ppktp_like().pulse_duration_s).map_err(text)?;
    let approx = ApproxSpec::gaussian(alpha).map_err(text)?;
    let table = amplitude_table(&pump, &opt, &approx, w, w, p_max, l_max).map_err(text)?;
    let spectrum = spiral_spectrum(&table);
    Ok(Spectrum {
        oam: spectrum.keys().copied().collect(),
        weight: spectrum.values().copied().collect(),
        captured_weight: table.captured_weight,
        schmidt_number: schmidt_number(&table).ok().map(|s| s.schmidt_number),
    })
}

#[wasm_bindgen(js_name = spiralSpectrum)]
pub fn oam_spectrum_js(
    pump_p: u32,
    pump_l: i32,
    waist_um: f64,
    length_mm: f64,
    alpha: f64,
    p_max: u32,
    l_max: u32,
) -> std::result::Result<JsValue, JsError> {
    to_js(oam_spectrum(pump_p, pump_l, waist_um, length_mm, alpha, p_max, l_max))
}
