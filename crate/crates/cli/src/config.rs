//! Run parameters: command-line flags merged over an optional JSON config file,
//! then resolved into the SI-valued types of the core crate.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use spdc_gauss::fidelity::{Method, Mode, SweepAxis};
use spdc_gauss::numerics::OptimSpec;
use spdc_gauss::preset::{Preset, SPEED_OF_LIGHT};
use spdc_gauss::{ApproxSpec, CrystalOptics, Family, PumpSpec, QuadSpec};

use crate::CliError;

/// Directory that relative `--output` paths resolve against.
pub const OUTPUT_DIR_ENV: &str = "SPDC_GAUSS_OUTPUT_DIR";

/// Every flag is optional here; requirements depend on the command and are
/// checked during resolution. Config-file keys are the flag names without
/// the leading dashes.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Params {
    /// JSON file with the same keys as the flags; flags take precedence
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// sinc-exact, gaussian, super-gaussian, cosine-gaussian, cosine-super-gaussian
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// spatial, spectral, spatio-temporal
    #[arg(long)]
    pub mode: Option<String>,
    /// closed-form (falls back to the oracle when none exists) or oracle
    #[arg(long)]
    pub method: Option<String>,

    /// Named crystal and pump defaults (typical-ppktp-like)
    #[arg(long)]
    pub preset: Option<String>,
    /// Crystal length, m
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub length_mm: Option<f64>,
    /// Pump vacuum wavelength, m
    #[arg(long)]
    pub pump_wavelength: Option<f64>,
    #[arg(long)]
    pub pump_wavelength_nm: Option<f64>,
    /// Pump refractive index
    #[arg(long)]
    pub pump_index: Option<f64>,
    /// Pump wavenumber in the crystal, rad/m
    #[arg(long)]
    pub pump_wavenumber: Option<f64>,
    /// Group index c/u of the pump
    #[arg(long)]
    pub group_index_pump: Option<f64>,
    #[arg(long)]
    pub group_index_signal: Option<f64>,
    #[arg(long)]
    pub group_index_idler: Option<f64>,
    /// Group velocity of the pump, m/s
    #[arg(long)]
    pub u_pump: Option<f64>,
    #[arg(long)]
    pub u_signal: Option<f64>,
    #[arg(long)]
    pub u_idler: Option<f64>,

    /// Pump waist, m
    #[arg(long)]
    pub pump_waist: Option<f64>,
    #[arg(long)]
    pub pump_waist_um: Option<f64>,
    /// Pump pulse duration t0, s
    #[arg(long)]
    pub pulse_duration: Option<f64>,
    #[arg(long)]
    pub pulse_duration_fs: Option<f64>,
    /// Pump LG radial index
    #[arg(long)]
    pub pump_p: Option<u32>,
    /// Pump LG azimuthal index
    #[arg(long)]
    pub pump_l: Option<i32>,

    /// Signal mode waist, m (default: pump waist)
    #[arg(long)]
    pub waist_signal: Option<f64>,
    #[arg(long)]
    pub waist_signal_um: Option<f64>,
    /// Idler mode waist, m (default: pump waist)
    #[arg(long)]
    pub waist_idler: Option<f64>,
    #[arg(long)]
    pub waist_idler_um: Option<f64>,
    #[arg(long)]
    pub p_max: Option<u32>,
    #[arg(long)]
    pub l_max: Option<u32>,

    /// alpha, beta, pulse-duration
    #[arg(long)]
    pub axis: Option<String>,
    /// start:stop:count
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// linear or log
    #[arg(long)]
    pub spacing: Option<String>,

    /// json or csv
    #[arg(long)]
    pub format: Option<String>,
    /// Output file; relative paths resolve against $SPDC_GAUSS_OUTPUT_DIR when set
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    /// Optimizer tolerance on the argmax
    #[arg(long)]
    pub optim_tol: Option<f64>,
    #[arg(long)]
    pub max_evals: Option<usize>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

impl Params {
    /// Flags over the config file named by `--config`, if any.
    pub fn merged(self) -> Result<Params, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| invalid(format!("--config: cannot read {}: {e}", path.display())))?;
        let mut base: Value = serde_json::from_str(&text)
            .map_err(|e| invalid(format!("--config: {} is not valid JSON: {e}", path.display())))?;
        let Value::Object(ref mut map) = base else {
            return Err(invalid("--config: the file must hold a JSON object"));
        };
        let Value::Object(flags) = serde_json::to_value(&self).expect("flags serialize") else {
            unreachable!("a struct serializes to an object")
        };
        for (k, v) in flags {
            if !v.is_null() {
                map.insert(k, v);
            }
        }
        let mut out: Params = serde_json::from_value(base).map_err(|e| invalid(format!("--config: {e}")))?;
        out.config = Some(path);
        Ok(out)
    }

    pub fn family(&self) -> Result<Family, CliError> {
        let name = self.family.as_deref().ok_or_else(|| invalid("--family is required"))?;
        Family::from_str(name).map_err(|_| invalid(format!("--family: unknown family '{name}'")))
    }

    /// Family and factors; `beta` defaults to 0.
    pub fn approx(&self) -> Result<ApproxSpec, CliError> {
        let family = self.family()?;
        if family == Family::SincExact {
            return Err(invalid("--family: sinc-exact has no factors to evaluate"));
        }
        let alpha = self.alpha.ok_or_else(|| invalid("--alpha is required"))?;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid(format!("--alpha must be positive, got {alpha}")));
        }
        let beta = self.beta.unwrap_or(0.0);
        if self.beta.is_some() && !family.has_cosine() {
            return Err(invalid(format!("--beta: {family} has no beta factor")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(invalid(format!("--beta must be non-negative, got {beta}")));
        }
        Ok(ApproxSpec { family, alpha, beta })
    }

    pub fn mode(&self) -> Result<Mode, CliError> {
        match self.mode.as_deref() {
            None => Ok(Mode::Spatial),
            Some(m) => Mode::from_str(m).map_err(|_| invalid(format!("--mode: unknown mode '{m}'"))),
        }
    }

    pub fn method(&self) -> Result<Method, CliError> {
        match self.method.as_deref() {
            None | Some("closed-form") => Ok(Method::ClosedForm),
            Some("oracle") => Ok(Method::Oracle),
            Some(m) => Err(invalid(format!("--method: expected closed-form or oracle, got '{m}'"))),
        }
    }

    fn preset(&self) -> Result<Option<Preset>, CliError> {
        self.preset
            .as_deref()
            .map(|name| Preset::by_name(name).map_err(|_| invalid(format!("--preset: unknown preset '{name}'"))))
            .transpose()
    }

    /// Crystal optics from the flags, with gaps filled from `--preset`.
    ///
    /// Spatial-mode fidelities do not depend on the crystal; there the bundled
    /// preset fills every gap.
    pub fn optics(&self, required: bool) -> Result<CrystalOptics, CliError> {
        let preset = match self.preset()? {
            Some(p) => Some(p),
            None if !required => Some(spdc_gauss::preset::typical_ppktp_like()),
            None => None,
        };
        let p = preset.as_ref();
        let length = pick(("--length", self.length), ("--length-mm", self.length_mm.map(|v| v * 1e-3)), p.map(|p| p.length_m))?;
        let wavenumber = match (self.pump_wavenumber, self.pump_index, self.pump_wavelength, self.pump_wavelength_nm) {
            (Some(k), None, None, None) => positive("--pump-wavenumber", k)?,
            (Some(_), _, _, _) => {
                return Err(invalid("--pump-wavenumber excludes --pump-index and --pump-wavelength"));
            }
            (None, index, _, _) => {
                let lambda = pick(
                    ("--pump-wavelength", self.pump_wavelength),
                    ("--pump-wavelength-nm", self.pump_wavelength_nm.map(|v| v * 1e-9)),
                    p.map(|p| p.pump_wavelength_m),
                )?;
                let n = match index.or(p.map(|p| p.pump_refractive_index)) {
                    Some(n) => positive("--pump-index", n)?,
                    None => return Err(invalid("--pump-index (or --pump-wavenumber) is required")),
                };
                2.0 * std::f64::consts::PI * n / lambda
            }
        };
        let velocity = |name: &str, u: Option<f64>, ng: Option<f64>, preset_ng: Option<f64>| -> Result<f64, CliError> {
            match (u, ng) {
                (Some(_), Some(_)) => Err(invalid(format!("--u-{name} and --group-index-{name} are mutually exclusive"))),
                (Some(u), None) => positive(&format!("--u-{name}"), u),
                (None, Some(ng)) => Ok(SPEED_OF_LIGHT / positive(&format!("--group-index-{name}"), ng)?),
                (None, None) => preset_ng
                    .map(|ng| SPEED_OF_LIGHT / ng)
                    .ok_or_else(|| invalid(format!("--group-index-{name} (or --u-{name}) is required"))),
            }
        };
        let u_p = velocity("pump", self.u_pump, self.group_index_pump, p.map(|p| p.group_index_pump))?;
        let u_s = velocity("signal", self.u_signal, self.group_index_signal, p.map(|p| p.group_index_signal))?;
        let u_i = velocity("idler", self.u_idler, self.group_index_idler, p.map(|p| p.group_index_idler))?;
        Ok(CrystalOptics::new(length, wavenumber, u_p, u_s, u_i)?)
    }

    /// Pump beam from the flags, with gaps filled from `--preset` (or the
    /// bundled preset when `required` is false).
    pub fn pump(&self, required: bool) -> Result<PumpSpec, CliError> {
        let preset = match self.preset()? {
            Some(p) => Some(p),
            None if !required => Some(spdc_gauss::preset::typical_ppktp_like()),
            None => None,
        };
        let p = preset.as_ref();
        let waist = pick(("--pump-waist", self.pump_waist), ("--pump-waist-um", self.pump_waist_um.map(|v| v * 1e-6)), p.map(|p| p.pump_waist_m))?;
        let t0 = pick(
            ("--pulse-duration", self.pulse_duration),
            ("--pulse-duration-fs", self.pulse_duration_fs.map(|v| v * 1e-15)),
            p.map(|p| p.pulse_duration_s),
        )?;
        Ok(PumpSpec::new(waist, self.pump_p.unwrap_or(0), self.pump_l.unwrap_or(0), t0)?)
    }

    /// Signal and idler waists; each defaults to the pump waist.
    pub fn mode_waists(&self, pump: &PumpSpec) -> Result<(f64, f64), CliError> {
        let ws = pick(("--waist-signal", self.waist_signal), ("--waist-signal-um", self.waist_signal_um.map(|v| v * 1e-6)), Some(pump.waist))?;
        let wi = pick(("--waist-idler", self.waist_idler), ("--waist-idler-um", self.waist_idler_um.map(|v| v * 1e-6)), Some(pump.waist))?;
        Ok((ws, wi))
    }

    pub fn quad(&self) -> Result<QuadSpec, CliError> {
        let mut q = QuadSpec::default();
        if let Some(v) = self.rel_tol {
            q.rel_tol = positive("--rel-tol", v)?;
        }
        if let Some(v) = self.abs_tol {
            q.abs_tol = positive("--abs-tol", v)?;
        }
        if let Some(v) = self.max_subdivisions {
            if v == 0 {
                return Err(invalid("--max-subdivisions must be at least 1"));
            }
            q.max_subdivisions = v;
        }
        Ok(q)
    }

    pub fn optim(&self) -> Result<OptimSpec, CliError> {
        let mut o = OptimSpec::default();
        if let Some(v) = self.optim_tol {
            o.tol = positive("--optim-tol", v)?;
        }
        if let Some(v) = self.max_evals {
            if v == 0 {
                return Err(invalid("--max-evals must be at least 1"));
            }
            o.max_evals = v;
        }
        Ok(o)
    }

    pub fn axis(&self) -> Result<SweepAxis, CliError> {
        match self.axis.as_deref() {
            None | Some("alpha") => Ok(SweepAxis::Alpha),
            Some("beta") => Ok(SweepAxis::Beta),
            Some("pulse-duration") => Ok(SweepAxis::PulseDuration),
            Some(a) => Err(invalid(format!("--axis: expected alpha, beta or pulse-duration, got '{a}'"))),
        }
    }

    /// Grid points from `--grid start:stop:count`; `None` when the flag is absent.
    pub fn grid(&self, axis: SweepAxis) -> Result<Option<Vec<f64>>, CliError> {
        let Some(text) = self.grid.as_deref() else {
            return Ok(None);
        };
        let log = match self.spacing.as_deref() {
            None => axis == SweepAxis::PulseDuration,
            Some("linear") => false,
            Some("log") => true,
            Some(s) => return Err(invalid(format!("--spacing: expected linear or log, got '{s}'"))),
        };
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || invalid(format!("--grid: expected start:stop:count, got '{text}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if count == 0 || !start.is_finite() || !stop.is_finite() {
            return Err(bad());
        }
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(invalid("--grid: logarithmic spacing needs positive end points"));
        }
        if count == 1 {
            return Ok(Some(vec![start]));
        }
        let step = |k: usize| k as f64 / (count - 1) as f64;
        let points = (0..count)
            .map(|k| match (k, log) {
                (0, _) => start,
                (k, _) if k == count - 1 => stop,
                (k, true) => (start.ln() + (stop.ln() - start.ln()) * step(k)).exp(),
                (k, false) => start + (stop - start) * step(k),
            })
            .collect();
        Ok(Some(points))
    }

    pub fn csv(&self) -> Result<bool, CliError> {
        match self.format.as_deref() {
            None | Some("json") => Ok(false),
            Some("csv") => Ok(true),
            Some(f) => Err(invalid(format!("--format: expected json or csv, got '{f}'"))),
        }
    }

    /// Where to write: `None` for standard output.
    pub fn output_path(&self, env_dir: Option<&Path>) -> Option<PathBuf> {
        let path = self.output.as_ref()?;
        match env_dir {
            Some(dir) if path.is_relative() => Some(dir.join(path)),
            _ => Some(path.clone()),
        }
    }
}

fn positive(flag: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("{flag} must be positive, got {v}")))
    }
}

/// SI flag, convenience-unit flag (already converted), then the preset value.
fn pick(si: (&str, Option<f64>), unit: (&str, Option<f64>), fallback: Option<f64>) -> Result<f64, CliError> {
    match (si.1, unit.1) {
        (Some(_), Some(_)) => Err(invalid(format!("{} and {} are mutually exclusive", si.0, unit.0))),
        (Some(v), None) => positive(si.0, v),
        (None, Some(v)) => positive(unit.0, v),
        (None, None) => fallback.ok_or_else(|| invalid(format!("{} (or {}) is required", si.0, unit.0))),
    }
}
