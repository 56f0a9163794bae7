//! Tables and their CSV / JSON rendering.

use serde_json::{Map, Value as Json};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    /// `None` renders as an empty CSV field or JSON null.
    Num(Option<f64>),
    Int(i64),
    Bool(bool),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(Some(v))
    }
}

impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        Value::Num(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
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

/// Numbers in CSV: three decimals, or 17 significant digits with `full`.
pub fn format_number(v: f64, full: bool) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if full {
        format!("{v:.16e}")
    } else {
        format!("{v:.3}")
    }
}

fn cell(v: &Value, full: bool) -> String {
    match v {
        Value::Text(s) => s.clone(),
        Value::Num(Some(x)) => format_number(*x, full),
        Value::Num(None) => String::new(),
        Value::Int(i) => i.to_string(),
        Value::Bool(b) => b.to_string(),
    }
}

pub fn to_csv(table: &Table, full: bool) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| cell(v, full)))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_value(v: &Value) -> Json {
    match v {
        Value::Text(s) => Json::String(s.clone()),
        Value::Num(Some(x)) => serde_json::Number::from_f64(*x).map_or(Json::Null, Json::Number),
        Value::Num(None) => Json::Null,
        Value::Int(i) => Json::from(*i),
        Value::Bool(b) => Json::Bool(*b),
    }
}

/// Rows as objects keyed by column name.
pub fn to_json(table: &Table) -> Json {
    Json::Array(
        table
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> = table
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(json_value))
                    .collect();
                Json::Object(obj)
            })
            .collect(),
    )
}

/// Render all tables for stdout. Several CSV tables are separated by a blank
/// line; JSON nests them under their names.
pub fn render(tables: &[Table], format: Format, full: bool) -> Result<String, csv::Error> {
    match format {
        Format::Csv => {
            let parts: Vec<String> = tables.iter().map(|t| to_csv(t, full)).collect::<Result<_, _>>()?;
            Ok(parts.join("\n"))
        }
        Format::Json => {
            let json = if tables.len() == 1 {
                to_json(&tables[0])
            } else {
                Json::Object(tables.iter().map(|t| (t.name.clone(), to_json(t))).collect())
            };
            Ok(serde_json::to_string_pretty(&json).expect("json values serialize") + "\n")
        }
    }
}

/// Output files for `--out`: the path itself for one table, otherwise the
/// table name is appended to the file stem (`run.csv` → `run-ier.csv`).
pub fn out_paths(out: &Path, tables: &[Table], format: Format) -> Vec<PathBuf> {
    if tables.len() == 1 {
        return vec![out.to_path_buf()];
    }
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| format.extension().to_string());
    tables
        .iter()
        .map(|t| out.with_file_name(format!("{stem}-{}.{ext}", t.name)))
        .collect()
}
