//! Serialization of results: JSON objects and fixed-column CSV, numbers
//! rounded to 12 significant digits.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Number, Value};

use crate::CliError;

/// Significant digits kept in every serialized number.
pub const DIGITS: usize = 12;

pub fn round(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Rounds every float in `v`; integers are left alone.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| Number::from_f64(round(x))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// A table with a fixed header; cells are already formatted.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// CSV cell: plain decimal for moderate magnitudes, exponent form otherwise.
pub fn num(x: f64) -> String {
    let r = round(x);
    if r == 0.0 || (1e-4..1e15).contains(&r.abs()) {
        r.to_string()
    } else {
        format!("{r:e}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Opens the destination before any computation so an unwritable path fails fast.
pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Invalid(format!("--output: cannot write {}: {e}", p.display())))?;
            Ok(Box::new(io::BufWriter::new(f)))
        }
    }
}

pub fn write_json(out: &mut dyn Write, mut v: Value) -> Result<(), CliError> {
    round_json(&mut v);
    let text = serde_json::to_string_pretty(&v).expect("JSON value serializes");
    writeln!(out, "{text}").and_then(|_| out.flush()).map_err(io_error)
}

pub fn write_csv(out: &mut dyn Write, table: &Table) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header).map_err(csv_error)?;
    for row in &table.rows {
        w.write_record(row).map_err(csv_error)?;
    }
    w.flush().map_err(io_error)
}

fn io_error(e: io::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}
