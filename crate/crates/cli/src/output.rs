//! Report envelope and JSON/CSV rendering.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

/// A cell of a CSV table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => float17(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Cell {
        Cell::Int(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Cell {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Cell {
        Cell::Text(x.to_string())
    }
}

/// Seventeen significant digits, locale-free; non-finite values as `inf`, `-inf`, `nan`.
pub fn float17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// What a subcommand produces: a JSON result and its tabular form.
#[derive(Debug, Clone)]
pub struct Report {
    pub result: Value,
    pub table: Table,
    /// False when a check in the report failed (drives the exit code of `verify`).
    pub ok: bool,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    resolution: usize,
    result: &'a Value,
}

pub fn render(report: &Report, command: &str, seed: u64, resolution: usize, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let env = Envelope { command, version: env!("CARGO_PKG_VERSION"), seed, resolution, result: &report.result };
            let mut out = serde_json::to_vec_pretty(&env)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.table.columns)?;
            for row in &report.table.rows {
                w.write_record(row.iter().map(Cell::render))?;
            }
            w.flush()?;
            Ok(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)
        }
    }
}

pub fn write(bytes: &[u8], out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

/// JSON number, or the string `"inf"`/`"-inf"`/`"nan"` for non-finite values.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        Value::String(float17(x))
    }
}
