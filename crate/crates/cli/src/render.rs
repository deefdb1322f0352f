//! JSON is the canonical form of every report; CSV and text are views of it.

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Report {
    pub title: String,
    pub json: Value,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(title: impl Into<String>, json: Value) -> Self {
        Self { title: title.into(), json, table: None }
    }

    pub fn with_table(mut self, headers: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { headers, rows });
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Csv => self.csv(),
            Format::Text => Ok(self.text()),
        }
    }

    fn scalars(&self) -> Vec<(String, String)> {
        match &self.json {
            Value::Object(m) => scalar_fields(m),
            _ => Vec::new(),
        }
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.headers)?;
                for row in &t.rows {
                    w.write_record(row)?;
                }
            }
            None => {
                w.write_record(["key", "value"])?;
                for (k, v) in self.scalars() {
                    w.write_record([k, v])?;
                }
            }
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    fn text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        let scalars = self.scalars();
        let width = scalars.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &scalars {
            out.push_str(&format!("  {k:<width$}  {v}\n"));
        }
        if let Some(t) = &self.table {
            let mut widths: Vec<usize> = t.headers.iter().map(|h| h.len()).collect();
            for row in &t.rows {
                for (i, cell) in row.iter().enumerate() {
                    widths[i] = widths[i].max(cell.len());
                }
            }
            let line = |cells: Vec<&str>| {
                let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                format!("  {}\n", parts.join("  "))
            };
            out.push('\n');
            out.push_str(&line(t.headers.clone()));
            for row in &t.rows {
                out.push_str(&line(row.iter().map(String::as_str).collect()));
            }
        }
        out
    }
}

fn scalar_fields(m: &Map<String, Value>) -> Vec<(String, String)> {
    m.iter()
        .filter_map(|(k, v)| match v {
            Value::String(s) => Some((k.clone(), s.clone())),
            Value::Number(_) | Value::Bool(_) => Some((k.clone(), v.to_string())),
            _ => None,
        })
        .collect()
}

/// Round to 9 decimals so output does not depend on floating-point noise.
pub fn num(x: f64) -> Value {
    let r = (x * 1e9).round() / 1e9;
    let r = if r == 0.0 { 0.0 } else { r };
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

pub fn fmt_num(x: f64) -> String {
    num(x).to_string()
}
