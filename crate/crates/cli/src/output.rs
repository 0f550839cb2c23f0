//! CSV output. Floats are written with 17 significant digits.

use std::io::Write;
use std::path::Path;

use crate::input::{C, Q};
use crate::CliError;

pub fn fmt(x: f64) -> String {
    // no negative zeros in output
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn complex_cells(z: C) -> [String; 2] {
    [fmt(z.re), fmt(z.im)]
}

pub fn quaternion_cells(q: Q) -> [String; 4] {
    q.to_array().map(fmt)
}

pub fn complex_header(name: &str) -> [String; 2] {
    [format!("{name}.re"), format!("{name}.im")]
}

pub fn quaternion_header(name: &str) -> [String; 4] {
    ["w", "x", "y", "z"].map(|s| format!("{name}.{s}"))
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(io_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(io_err)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

fn io_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

pub fn emit_json(v: &serde_json::Value, path: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    emit(text.as_bytes(), path)
}
