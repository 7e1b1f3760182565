use std::io::Write;

use serde_json::{json, Value};

use spdc_gauss::fidelity::{fidelity, optimize_factors, pulse_duration_grid, sweep, Mode, SweepAxis};
use spdc_gauss::lgdecomp::{amplitude_table, schmidt_number, spiral_spectrum};
use spdc_gauss::Family;

use crate::config::Params;
use crate::output::{num, opt_num, write_csv, write_json, Table};
use crate::CliError;

/// Points per decade and decades of the default pulse-duration grid.
const DEFAULT_T0_GRID: (usize, f64) = (8, 4.0);

fn needs_crystal(mode: Mode) -> bool {
    mode != Mode::Spatial
}

pub fn run_fidelity(p: &Params, out: &mut dyn Write) -> Result<(), CliError> {
    let approx = p.approx()?;
    let mode = p.mode()?;
    let (opt, pump) = (p.optics(needs_crystal(mode))?, p.pump(needs_crystal(mode))?);
    let (quad, method, csv) = (p.quad()?, p.method()?, p.csv()?);
    let r = fidelity(&approx, mode, &opt, &pump, &quad, method)?;
    if csv {
        let mut t = Table::new(vec!["family", "mode", "alpha", "beta", "fidelity", "method", "error_estimate"]);
        t.push(vec![
            r.family.to_string(),
            mode.to_string(),
            num(r.alpha),
            num(r.beta),
            num(r.fidelity),
            method_name(r.method),
            opt_num(r.oracle_error),
        ]);
        return write_csv(out, &t);
    }
    write_json(
        out,
        json!({
            "command": "fidelity",
            "family": r.family,
            "mode": mode,
            "alpha": r.alpha,
            "beta": r.beta,
            "fidelity": r.fidelity,
            "method": r.method,
            "error_estimate": r.oracle_error,
        }),
    )
}

fn method_name(m: spdc_gauss::fidelity::Method) -> String {
    serde_json::to_value(m).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

/// Writes the best point found; exits with a numerical failure afterwards
/// when the optimizer ran out of evaluations.
pub fn run_optimize(p: &Params, out: &mut dyn Write) -> Result<(), CliError> {
    let family = p.family()?;
    if family == Family::SincExact {
        return Err(CliError::Invalid("--family: sinc-exact has no factors to optimize".into()));
    }
    let mode = p.mode()?;
    let (opt, pump) = (p.optics(needs_crystal(mode))?, p.pump(needs_crystal(mode))?);
    let (quad, optim, csv) = (p.quad()?, p.optim()?, p.csv()?);
    let r = optimize_factors(family, mode, &opt, &pump, &quad, &optim)?;
    let alpha = r.argmax[0];
    let beta = r.argmax.get(1).copied();
    if csv {
        let mut t = Table::new(vec!["family", "mode", "alpha", "beta", "fidelity", "evaluations", "converged"]);
        t.push(vec![
            family.to_string(),
            mode.to_string(),
            num(alpha),
            opt_num(beta),
            num(r.value),
            r.evaluations.to_string(),
            r.converged.to_string(),
        ]);
        write_csv(out, &t)?;
    } else {
        write_json(
            out,
            json!({
                "command": "optimize",
                "family": family,
                "mode": mode,
                "argmax": {"alpha": alpha, "beta": beta},
                "fidelity": r.value,
                "evaluations": r.evaluations,
                "converged": r.converged,
            }),
        )?;
    }
    if !r.converged {
        return Err(CliError::Numerical(format!(
            "optimizer did not converge after {} evaluations; the best point found was written",
            r.evaluations
        )));
    }
    Ok(())
}

pub fn run_sweep(p: &Params, out: &mut dyn Write) -> Result<(), CliError> {
    let axis = p.axis()?;
    let mode = p.mode()?;
    let (opt, pump) = (p.optics(needs_crystal(mode))?, p.pump(needs_crystal(mode))?);
    let grid = match (p.grid(axis)?, axis) {
        (Some(g), _) => g,
        (None, SweepAxis::PulseDuration) => pulse_duration_grid(&opt, DEFAULT_T0_GRID.0, DEFAULT_T0_GRID.1)?,
        (None, _) => return Err(CliError::Invalid("--grid is required for this axis".into())),
    };
    let mut base = p.clone();
    match axis {
        SweepAxis::Alpha if base.alpha.is_none() => base.alpha = Some(grid[0].abs().max(f64::MIN_POSITIVE)),
        SweepAxis::Beta if base.beta.is_none() => base.beta = Some(0.0),
        _ => {}
    }
    let approx = base.approx()?;
    if axis == SweepAxis::Beta && !approx.family.has_cosine() {
        return Err(CliError::Invalid(format!("--axis: {} has no beta factor", approx.family)));
    }
    let (quad, method, csv) = (p.quad()?, p.method()?, p.csv()?);
    let rows = sweep(&approx, mode, axis, &grid, &opt, &pump, &quad, method)?;

    let at = |x: f64, which: SweepAxis, fixed: f64| if axis == which { x } else { fixed };
    if csv {
        let mut t = Table::new(vec![
            "coordinate", "family", "mode", "alpha", "beta", "pulse_duration", "fidelity", "method", "error_estimate", "error",
        ]);
        for r in &rows {
            t.push(vec![
                num(r.coordinate),
                approx.family.to_string(),
                mode.to_string(),
                num(at(r.coordinate, SweepAxis::Alpha, approx.alpha)),
                num(at(r.coordinate, SweepAxis::Beta, approx.effective_beta())),
                num(at(r.coordinate, SweepAxis::PulseDuration, pump.pulse_duration)),
                opt_num(r.report.map(|x| x.fidelity)),
                r.report.map(|x| method_name(x.method)).unwrap_or_default(),
                opt_num(r.report.and_then(|x| x.oracle_error)),
                r.error.clone().unwrap_or_default(),
            ]);
        }
        write_csv(out, &t)?;
    } else {
        let items: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "coordinate": r.coordinate,
                    "alpha": at(r.coordinate, SweepAxis::Alpha, approx.alpha),
                    "beta": at(r.coordinate, SweepAxis::Beta, approx.effective_beta()),
                    "pulse_duration": at(r.coordinate, SweepAxis::PulseDuration, pump.pulse_duration),
                    "fidelity": r.report.map(|x| x.fidelity),
                    "method": r.report.map(|x| x.method),
                    "error_estimate": r.report.and_then(|x| x.oracle_error),
                    "error": r.error,
                })
            })
            .collect();
        write_json(
            out,
            json!({
                "command": "sweep",
                "family": approx.family,
                "mode": mode,
                "axis": axis,
                "rows": items,
            }),
        )?;
    }
    if rows.iter().any(|r| r.report.is_some()) {
        return Ok(());
    }
    let msg = format!("all {} sweep points failed; first error: {}", rows.len(), rows[0].error.as_deref().unwrap_or("?"));
    if rows.iter().any(|r| r.numerical_failure) {
        Err(CliError::Numerical(msg))
    } else {
        Err(CliError::Invalid(msg))
    }
}

pub fn run_decompose(p: &Params, out: &mut dyn Write) -> Result<(), CliError> {
    let approx = p.approx()?;
    if !matches!(approx.family, Family::Gaussian | Family::CosineGaussian) {
        return Err(CliError::Invalid(format!(
            "--family: amplitudes are available for gaussian and cosine-gaussian, got {}",
            approx.family
        )));
    }
    let opt = p.optics(true)?;
    if p.preset.is_none() && p.pump_waist.is_none() && p.pump_waist_um.is_none() {
        return Err(CliError::Invalid("--pump-waist (or --pump-waist-um) is required".into()));
    }
    // the pulse duration plays no part in the transverse decomposition
    let pump = p.pump(false)?;
    let (ws, wi) = p.mode_waists(&pump)?;
    let (p_max, l_max) = (p.p_max.unwrap_or(2), p.l_max.unwrap_or(2));
    let csv = p.csv()?;
    let table = amplitude_table(&pump, &opt, &approx, ws, wi, p_max, l_max)?;

    if csv {
        let mut t = Table::new(vec!["p_signal", "l_signal", "p_idler", "l_idler", "real", "imag", "probability", "error"]);
        for e in &table.entries {
            t.push(vec![
                e.p_signal.to_string(),
                e.oam_signal.to_string(),
                e.p_idler.to_string(),
                e.oam_idler.to_string(),
                num(e.amplitude.re),
                num(e.amplitude.im),
                num(e.probability),
                e.error.clone().unwrap_or_default(),
            ]);
        }
        write_csv(out, &t)?;
    } else {
        let schmidt = schmidt_number(&table).ok();
        let entries: Vec<Value> = table
            .entries
            .iter()
            .map(|e| {
                json!({
                    "p_signal": e.p_signal,
                    "l_signal": e.oam_signal,
                    "p_idler": e.p_idler,
                    "l_idler": e.oam_idler,
                    "real": e.amplitude.re,
                    "imag": e.amplitude.im,
                    "probability": e.probability,
                    "error": e.error,
                })
            })
            .collect();
        let spectrum: Vec<Value> = spiral_spectrum(&table)
            .into_iter()
            .map(|(l, w)| json!({"l_signal": l, "weight": w}))
            .collect();
        write_json(
            out,
            json!({
                "command": "decompose",
                "family": approx.family,
                "alpha": approx.alpha,
                "beta": approx.effective_beta(),
                "pump": {"p": pump.radial_index, "l": pump.oam, "waist": pump.waist},
                "waist_signal": ws,
                "waist_idler": wi,
                "p_max": p_max,
                "l_max": l_max,
                "entries": entries,
                "captured_weight": table.captured_weight,
                "schmidt_number": schmidt.as_ref().map(|s| s.schmidt_number),
                "schmidt_weights": schmidt.as_ref().map(|s| s.weights.clone()).unwrap_or_default(),
                "truncated": schmidt.as_ref().is_none_or(|s| s.truncated),
                "spiral_spectrum": spectrum,
            }),
        )?;
    }
    let failed = table.entries.iter().filter(|e| e.error.is_some()).count();
    if failed > 0 && failed == table.entries.len() {
        return Err(CliError::Numerical(format!("all {failed} amplitudes failed")));
    }
    if failed > 0 {
        eprintln!("warning: {failed} of {} amplitudes failed; see the error column", table.entries.len());
    }
    Ok(())
}
