//! Result tables and their CSV/JSON serialization.
//!
//! CSV: UTF-8, metadata as leading `# key=value` lines, one header row, then
//! comma-separated records. JSON: `{"metadata": {...}, "header": [...],
//! "rows": [[...], ...]}`. Floats are written with 17 significant digits in
//! both formats; non-finite floats are `NaN`/`inf`/`-inf` in CSV and `null` in JSON.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new(header: &[&str], metadata: Vec<(String, String)>) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new(), metadata }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Float view of a column; integers are widened, other cells become NaN.
    pub fn floats(&self, name: &str) -> Vec<f64> {
        let Some(k) = self.column(name) else { return Vec::new() };
        self.rows
            .iter()
            .map(|r| match &r[k] {
                Cell::Float(v) => *v,
                Cell::Int(v) => *v as f64,
                _ => f64::NAN,
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s.push_str(&self.header.iter().map(|h| csv_text(h)).collect::<Vec<_>>().join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Text(t) => csv_text(t),
                    other => scalar_text(other),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let meta: serde_json::Map<String, serde_json::Value> =
            self.metadata.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|row| format!("[{}]", row.iter().map(json_cell).collect::<Vec<_>>().join(",")))
            .collect();
        format!(
            "{{\"metadata\":{},\"header\":{},\"rows\":[{}]}}\n",
            serde_json::Value::Object(meta),
            serde_json::to_string(&self.header).expect("strings serialize"),
            rows.join(",")
        )
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn scalar_text(c: &Cell) -> String {
    match c {
        Cell::Float(v) => format_float(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(t) => t.clone(),
    }
}

fn csv_text(t: &str) -> String {
    if t.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", t.replace('"', "\"\""))
    } else {
        t.to_string()
    }
}

fn json_cell(c: &Cell) -> String {
    match c {
        Cell::Float(v) if !v.is_finite() => "null".into(),
        Cell::Text(t) => serde_json::Value::String(t.clone()).to_string(),
        other => scalar_text(other),
    }
}

/// Writes the table to `out`, or to standard output when `out` is `None`.
pub fn emit_table(table: &ResultTable, format: Format, out: Option<&Path>) -> io::Result<()> {
    let text = table.render(format);
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}
