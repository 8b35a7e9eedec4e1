//! Column tables written as CSV with `#` metadata lines, or as JSON.

use std::io::Write;

use serde_json::{Map, Value};

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    /// `None` marks a value that does not exist for that row.
    pub rows: Vec<Vec<Option<f64>>>,
    /// Ordered metadata; the effective config is stored under "config".
    pub meta: Vec<(String, Value)>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write(
        &self,
        format: Format,
        config_toml: &str,
        out: &mut dyn Write,
    ) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(config_toml, out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, config_toml: &str, out: &mut dyn Write) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Output(e.to_string());
        for (key, value) in &self.meta {
            if key == "config" {
                continue;
            }
            let text = match value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            writeln!(out, "# {key}: {text}").map_err(io)?;
        }
        writeln!(out, "# config:").map_err(io)?;
        for line in config_toml.lines() {
            writeln!(out, "#   {line}").map_err(io)?;
        }
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.map(format_float).unwrap_or_default()))
                .map_err(csv_err)?;
        }
        w.flush().map_err(io)
    }

    fn write_json(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let meta: Map<String, Value> = self.meta.iter().cloned().collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let record: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.map(Value::from).unwrap_or(Value::Null)))
                    .collect();
                Value::Object(record)
            })
            .collect();
        let doc = serde_json::json!({ "meta": meta, "rows": rows });
        serde_json::to_writer_pretty(&mut *out, &doc)
            .map_err(|e| CliError::Output(e.to_string()))?;
        writeln!(out).map_err(|e| CliError::Output(e.to_string()))
    }
}

/// Shortest round-trip text; exponent form for very large or small values.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}
