//! CSV and JSON writers. Output depends only on the inputs: no timestamps,
//! host names or thread counts.

use std::fmt::Write as _;

use lasercool_core::WorkingPoint;
use serde_json::{json, Map, Value};

use crate::config::{num, Format, RunConfig};

pub const TOOL: &str = "lasercool";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Num(x.unwrap_or(f64::NAN))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Num(if b { 1.0 } else { 0.0 })
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

/// Everything a command produces, ready to serialize.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub working_point: Vec<(String, f64)>,
    pub summary: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: impl Into<String>, config: &RunConfig, wp: Option<&WorkingPoint>) -> Self {
        Self {
            command: command.into(),
            parameters: config.to_pairs(),
            working_point: wp.map(working_point_summary).unwrap_or_default(),
            summary: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn columns(mut self, names: &[&str]) -> Self {
        self.columns = names.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].clone()).collect())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {TOOL} {VERSION}");
        let _ = writeln!(s, "# command = {}", self.command);
        let _ = writeln!(s, "# [parameters]");
        for (k, v) in &self.parameters {
            let _ = writeln!(s, "# {k} = {v}");
        }
        if !self.working_point.is_empty() {
            let _ = writeln!(s, "# [working_point]");
            for (k, v) in &self.working_point {
                let _ = writeln!(s, "# {k} = {}", num(*v));
            }
        }
        if !self.summary.is_empty() {
            let _ = writeln!(s, "# [summary]");
            for (k, v) in &self.summary {
                let _ = writeln!(s, "# {k} = {}", v.csv());
            }
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let parameters: Map<String, Value> = self.parameters.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let wp: Map<String, Value> =
            self.working_point.iter().map(|(k, v)| (k.clone(), Cell::Num(*v).json())).collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "parameters": parameters,
            "working_point": wp,
            "summary": summary,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
        s.push('\n');
        s
    }
}

pub fn working_point_summary(wp: &WorkingPoint) -> Vec<(String, f64)> {
    let [p, m] = wp.omega_pm;
    [
        ("w", wp.w),
        ("d_th", wp.d_th),
        ("n_sat", wp.n_sat),
        ("d0_over_dth", wp.laser.d0 / wp.d_th),
        ("xi", wp.xi),
        ("d_bar", wp.d_bar),
        ("n_bar", wp.n_bar),
        ("a_bar", wp.a_bar),
        ("omega_s", wp.omega_s.unwrap_or(f64::NAN)),
        ("field_phase", wp.field_phase),
        ("kappa_tilde", wp.kappa_tilde),
        ("delta_tilde", wp.delta_tilde),
        ("kappa_over_kappa_tilde", wp.laser.kappa / wp.kappa_tilde),
        ("omega_plus_re", p.re),
        ("omega_plus_im", p.im),
        ("omega_minus_re", m.re),
        ("omega_minus_im", m.im),
        ("bistable", if wp.bistable { 1.0 } else { 0.0 }),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}
