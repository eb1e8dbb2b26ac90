//! Rendering command results as JSON, aligned text or CSV.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::error::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

/// A command result: either named fields or a table of rows.
#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Record(Vec<(String, Value)>),
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<Value>>,
    },
}

impl Output {
    pub fn record() -> RecordBuilder {
        RecordBuilder(Vec::new())
    }

    pub fn table(columns: &[&str]) -> Output {
        Output::Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        if let Output::Table { rows, .. } = self {
            rows.push(row);
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Output::Record(fields) => Value::Object(fields.iter().cloned().collect::<Map<_, _>>()),
            Output::Table { columns, rows } => Value::Array(
                rows.iter()
                    .map(|r| Value::Object(columns.iter().cloned().zip(r.iter().cloned()).collect()))
                    .collect(),
            ),
        }
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> CliResult<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json()).map_err(std::io::Error::from)?;
                writeln!(out)?;
            }
            Format::Text => self.write_text(&mut out)?,
            Format::Csv => self.write_csv(&mut out)?,
        }
        Ok(())
    }

    fn write_text<W: Write>(&self, out: &mut W) -> CliResult<()> {
        match self {
            Output::Record(fields) => {
                let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in fields {
                    writeln!(out, "{k:<width$}  {}", plain(v))?;
                }
            }
            Output::Table { columns, rows } => {
                let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(plain).collect()).collect();
                let widths: Vec<usize> = (0..columns.len())
                    .map(|i| {
                        cells
                            .iter()
                            .map(|r| r[i].len())
                            .chain([columns[i].len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |items: Vec<&str>| -> String {
                    items
                        .iter()
                        .zip(&widths)
                        .map(|(s, w)| format!("{s:<w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                writeln!(out, "{}", line(columns.iter().map(String::as_str).collect()))?;
                for r in &cells {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
                }
            }
        }
        Ok(())
    }

    fn write_csv<W: Write>(&self, out: &mut W) -> CliResult<()> {
        let mut w = csv::WriterBuilder::new().from_writer(out);
        let io = |e: csv::Error| std::io::Error::other(e.to_string());
        match self {
            Output::Record(fields) => {
                w.write_record(["key", "value"]).map_err(io)?;
                for (k, v) in fields {
                    w.write_record([k.as_str(), &plain(v)]).map_err(io)?;
                }
            }
            Output::Table { columns, rows } => {
                w.write_record(columns).map_err(io)?;
                for r in rows {
                    w.write_record(r.iter().map(plain)).map_err(io)?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Builds a [`Output::Record`] field by field, keeping insertion order.
pub struct RecordBuilder(Vec<(String, Value)>);

impl RecordBuilder {
    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn field_opt(self, key: &str, value: Option<impl Into<Value>>) -> Self {
        match value {
            Some(v) => self.field(key, v),
            None => self,
        }
    }

    pub fn build(self) -> Output {
        Output::Record(self.0)
    }
}

/// Strings bare, everything else as compact JSON.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
