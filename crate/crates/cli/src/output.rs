//! Tabular output as CSV with `#` header comments, or as JSON.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Flag(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // Debug formatting of f64 is the shortest round-trip form.
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Flag(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Flag(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Output records of one subcommand, with extra comment lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
    /// Set when some records failed while the table itself is complete.
    pub failure: Option<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Table {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
            notes: Vec::new(),
            failure: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn version_string() -> String {
    format!("optobessel {}", env!("CARGO_PKG_VERSION"))
}

/// Renders `table` in the configured format, headed by the resolved config.
/// The output path is left out of the header so a report does not depend on
/// where it is written.
pub fn render(table: &Table, mode: &str, cfg: &RunConfig) -> String {
    let mut echoed = cfg.clone();
    echoed.output.path = None;
    let config = serde_json::to_string(&echoed).unwrap_or_default();
    match cfg.output.format {
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "# {}", version_string());
            let _ = writeln!(out, "# subcommand: {mode}");
            let _ = writeln!(out, "# config: {config}");
            for note in &table.notes {
                let _ = writeln!(out, "# {note}");
            }
            let _ = writeln!(out, "{}", table.columns.join(","));
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                .collect();
            let doc = json!({
                "version": version_string(),
                "subcommand": mode,
                "config": serde_json::from_str::<Value>(&config).unwrap_or(Value::Null),
                "notes": table.notes,
                "columns": table.columns,
                "rows": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).unwrap_or_default();
            s.push('\n');
            s
        }
    }
}
