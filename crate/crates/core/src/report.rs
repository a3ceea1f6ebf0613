//! Tabular output: statevector dumps, histograms, profiles, metrics and
//! fidelity tables, written as CSV or JSON.
//!
//! Floats in CSV are printed in scientific notation with 17 significant
//! digits; JSON uses the shortest representation that parses back to the
//! same double. Files are written to a temporary sibling and renamed into
//! place.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::analysis::FidelityReport;
use crate::circuit::{baseline_gate_count, count_gates, qate_gate_count};
use crate::encoder::encode_qate;
use crate::error::{Error, Result};
use crate::evolution::Mode;
use crate::grid::{kinetic_phase_profile, Grid};
use crate::statevector::{Histogram, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Seventeen significant digits, always in exponent form.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// A named table with fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, headers: Vec<&'static str>) -> Self {
        Table {
            name: name.into(),
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        writer.write_record(&self.headers).map_err(ser)?;
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Cell::csv))
                .map_err(ser)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// An array of objects with keys in header order.
    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> = self
                    .headers
                    .iter()
                    .zip(row)
                    .map(|(h, c)| (h.to_string(), c.json()))
                    .collect();
                Value::Object(object)
            })
            .collect();
        let mut text =
            serde_json::to_string_pretty(&rows).map_err(|e| Error::Serialization(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes `<dir>/<name>.<ext>` and returns the path.
    pub fn write(&self, dir: &Path, format: Format) -> Result<PathBuf> {
        let path = dir.join(format!("{}.{}", self.name, format.extension()));
        write_atomic(&path, self.render(format)?.as_bytes())?;
        Ok(path)
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

/// Writes every table into `dir`.
pub fn emit_report(tables: &[Table], dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    tables.iter().map(|t| t.write(dir, format)).collect()
}

fn bitstring(index: usize, n: usize) -> String {
    format!("{index:0n$b}")
}

pub fn state_table(name: impl Into<String>, state: &StateVector) -> Table {
    let mut t = Table::new(
        name,
        vec!["index", "bitstring", "real", "imag", "probability"],
    );
    for (i, a) in state.amplitudes().iter().enumerate() {
        t.push(vec![
            i.into(),
            bitstring(i, state.n_qubits()).into(),
            a.re.into(),
            a.im.into(),
            a.norm_sqr().into(),
        ]);
    }
    t
}

/// Every basis state appears, including those never observed.
pub fn histogram_table(name: impl Into<String>, histogram: &Histogram) -> Table {
    let mut t = Table::new(name, vec!["bitstring", "count", "frequency"]);
    for i in 0..1usize << histogram.n_qubits() {
        t.push(vec![
            bitstring(i, histogram.n_qubits()).into(),
            histogram.count(i).into(),
            histogram.frequency(i).into(),
        ]);
    }
    t
}

pub fn profile_table(name: impl Into<String>, theta: &[f64]) -> Table {
    let mut t = Table::new(name, vec!["index", "theta"]);
    for (i, v) in theta.iter().enumerate() {
        t.push(vec![i.into(), (*v).into()]);
    }
    t
}

pub fn diagonal_table(name: impl Into<String>, diagonal: &[Complex64]) -> Table {
    let mut t = Table::new(name, vec!["index", "re", "im", "phase"]);
    for (i, z) in diagonal.iter().enumerate() {
        t.push(vec![i.into(), z.re.into(), z.im.into(), z.arg().into()]);
    }
    t
}

/// Depths reported for the proposed circuit, n = 3..=6.
pub const REFERENCE_DEPTHS: [(usize, usize); 4] = [(3, 9), (4, 18), (5, 22), (6, 36)];

/// Depths reported for the reference circuit, n = 3..=6.
pub const REFERENCE_BASELINE_DEPTHS: [(usize, usize); 4] = [(3, 16), (4, 24), (5, 32), (6, 40)];

/// Reported swap-test fidelities by register width.
pub const REFERENCE_FIDELITIES: [(usize, f64); 2] = [(3, 0.73), (9, 0.99)];

/// Deviation from a reported fidelity that gets flagged.
pub const FIDELITY_FLAG_THRESHOLD: f64 = 0.15;

fn lookup<T: Copy>(table: &[(usize, T)], n: usize) -> Option<T> {
    table.iter().find(|(k, _)| *k == n).map(|(_, v)| *v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub n: usize,
    pub qate_1q: usize,
    pub qate_2q: usize,
    pub qate_total: usize,
    pub baseline_total: usize,
    pub depth_ours: usize,
    pub depth_paper_ref: Option<usize>,
    pub depth_baseline_paper_ref: Option<usize>,
}

/// Counts from the QATE circuit built for the kinetic profile at
/// `d = 10`, `Δt = 0.1`.
pub fn metrics_row(n: usize) -> Result<MetricsRow> {
    let predicted = qate_gate_count(n)?;
    let grid = Grid::new(10.0, n)?;
    let built = count_gates(&encode_qate(&kinetic_phase_profile(&grid, 0.1, 1.0)?)?)?;
    debug_assert_eq!(built.total, predicted.total);
    Ok(MetricsRow {
        n,
        qate_1q: built.one_qubit_count,
        qate_2q: built.two_qubit_count,
        qate_total: built.total,
        baseline_total: baseline_gate_count(n),
        depth_ours: built.depth,
        depth_paper_ref: lookup(&REFERENCE_DEPTHS, n),
        depth_baseline_paper_ref: lookup(&REFERENCE_BASELINE_DEPTHS, n),
    })
}

pub fn metrics_table(rows: &[MetricsRow]) -> Table {
    let mut t = Table::new(
        "metrics",
        vec![
            "n",
            "qate_1q",
            "qate_2q",
            "qate_total",
            "baseline_total",
            "depth_ours",
            "depth_paper_ref",
            "depth_baseline_paper_ref",
        ],
    );
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.qate_1q.into(),
            r.qate_2q.into(),
            r.qate_total.into(),
            r.baseline_total.into(),
            r.depth_ours.into(),
            r.depth_paper_ref.into(),
            r.depth_baseline_paper_ref.into(),
        ]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    pub n: usize,
    pub mode: Mode,
    pub nt: usize,
    pub report: FidelityReport,
}

pub fn fidelity_table(rows: &[FidelityRow]) -> Table {
    let mut t = Table::new(
        "fidelity",
        vec!["n", "mode", "Nt", "exact", "swap_estimate", "std_error"],
    );
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.mode.to_string().into(),
            r.nt.into(),
            r.report.exact.into(),
            r.report.estimated.into(),
            r.report.std_error.into(),
        ]);
    }
    t
}

/// Exact fidelities next to the reported values, flagging gaps wider than
/// [`FIDELITY_FLAG_THRESHOLD`].
pub fn fidelity_reference_table(rows: &[FidelityRow]) -> Table {
    let mut t = Table::new(
        "fidelity_reference",
        vec!["n", "mode", "exact", "reference", "deviation", "flagged"],
    );
    for r in rows {
        let reference = lookup(&REFERENCE_FIDELITIES, r.n);
        let deviation = reference.map(|p| r.report.exact - p);
        t.push(vec![
            r.n.into(),
            r.mode.to_string().into(),
            r.report.exact.into(),
            reference.into(),
            deviation.into(),
            deviation.map(|d| d.abs() > FIDELITY_FLAG_THRESHOLD).into(),
        ]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub step: usize,
    pub exact_fidelity: f64,
    pub swap_fidelity: f64,
    pub norm: f64,
}

pub fn summary_table(rows: &[SummaryRow]) -> Table {
    let mut t = Table::new(
        "summary",
        vec!["step", "exact_fidelity", "swap_fidelity", "norm"],
    );
    for r in rows {
        t.push(vec![
            r.step.into(),
            r.exact_fidelity.into(),
            r.swap_fidelity.into(),
            r.norm.into(),
        ]);
    }
    t
}

/// Key/value rendering of a budget.
pub fn budget_text(b: &crate::analysis::ErrorBudget) -> String {
    let mut s = String::new();
    for (k, v) in [
        ("discretization", b.discretization),
        ("gate", b.gate),
        ("decoherence", b.decoherence),
        ("readout", b.readout),
        ("total", b.total),
    ] {
        let _ = writeln!(s, "{k} = {}", format_float(v));
    }
    s
}
