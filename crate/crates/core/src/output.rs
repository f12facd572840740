//! Deterministic tabular output: CSV, JSON and fixed-width tables.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            _ => Err(Error::Parse(format!(
                "format {s:?}: expected json, csv or table"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    /// CSV rendering: shortest round-trip float text, booleans as 0/1. Text is
    /// quoted only when it holds a comma, quote or newline.
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            other => other.plain(),
        }
    }

    fn plain(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => u8::from(*b).to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Num(v) => sig6(*v),
            other => other.plain(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v)
                .map(Value::Number)
                .unwrap_or_else(|| Value::String(v.to_string())),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

/// Six significant digits.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.5e}")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (h, c) in self.headers.iter().zip(row) {
                        obj.insert(h.clone(), c.json());
                    }
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::human).collect())
            .collect();
        let widths: Vec<usize> = self
            .headers
            .iter()
            .enumerate()
            .map(|(i, h)| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([h.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: &[String]| {
            let padded: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(&mut out, &self.headers);
        for r in &cells {
            line(&mut out, r);
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Table => self.to_table(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

/// Flattens a JSON object into `key, value` rows for table/CSV display.
pub fn flatten_json(value: &Value) -> Table {
    let mut table = Table::new(["field", "value"]);
    fn walk(prefix: &str, v: &Value, table: &mut Table) {
        match v {
            Value::Object(map) => {
                for (k, v) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, v, table);
                }
            }
            Value::Number(n) => {
                let cell = n
                    .as_u64()
                    .map(Cell::Int)
                    .unwrap_or_else(|| Cell::Num(n.as_f64().unwrap_or(f64::NAN)));
                table.push(vec![Cell::Text(prefix.to_string()), cell]);
            }
            Value::Bool(b) => table.push(vec![Cell::Text(prefix.to_string()), Cell::Bool(*b)]),
            Value::Null => table.push(vec![
                Cell::Text(prefix.to_string()),
                Cell::Text("null".into()),
            ]),
            Value::String(s) => {
                table.push(vec![Cell::Text(prefix.to_string()), Cell::Text(s.clone())])
            }
            Value::Array(items) => {
                let text: Vec<String> = items
                    .iter()
                    .map(|i| match i {
                        Value::Number(n) => format!("{n}"),
                        other => other.to_string(),
                    })
                    .collect();
                table.push(vec![
                    Cell::Text(prefix.to_string()),
                    Cell::Text(text.join(";")),
                ]);
            }
        }
    }
    walk("", value, &mut table);
    table
}
