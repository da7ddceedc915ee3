//! CSV and JSON emission. CSV floats use `{:.16e}` (17 significant digits).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, c)| ((*k).to_string(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// A command's result: one main table, optional side tables, and metadata.
pub struct Report {
    pub meta: Value,
    pub table: Table,
    /// Written to `<out>.<name>.csv` in CSV mode, embedded under `name` in JSON.
    pub extra: Vec<(&'static str, Table)>,
}

pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(path.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

pub fn write_text(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    let result = match out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            w.write_all(text.as_bytes())?;
            w.flush()
        }),
        None => {
            let mut w = io::stdout().lock();
            w.write_all(text.as_bytes()).and_then(|()| w.flush())
        }
    };
    result.map_err(|e| CliError::io(out, e))
}

pub fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// In CSV mode the metadata goes to `<out>.meta.json` next to the table and
/// side tables are only written when `out` is a file.
pub fn emit(report: &Report, out: Option<&Path>, format: Format) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            write_text(out, &report.table.to_csv())?;
            if let Some(path) = out {
                write_text(Some(&with_suffix(path, ".meta.json")), &json_text(&report.meta))?;
                for (name, table) in &report.extra {
                    write_text(Some(&with_suffix(path, &format!(".{name}.csv"))), &table.to_csv())?;
                }
            }
            Ok(())
        }
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("meta".into(), report.meta.clone());
            doc.insert("rows".into(), report.table.to_json());
            for (name, table) in &report.extra {
                doc.insert((*name).into(), table.to_json());
            }
            write_text(out, &json_text(&Value::Object(doc)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_formatting() {
        let mut t = Table::new(&["lambda", "n", "zone"]);
        t.push(vec![Cell::Float(5.5), Cell::Int(15), Cell::Text("I1".into())]);
        t.push(vec![Cell::Float(f64::NAN), Cell::Int(0), Cell::Text("below".into())]);
        assert_eq!(t.to_csv(), "lambda,n,zone\n5.5000000000000000e0,15,I1\nNaN,0,below\n");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI * 1e7, -2.5e-300] {
            let s = Cell::Float(x).csv();
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_rows_map_nan_to_null() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![Cell::Float(f64::NAN), Cell::Int(3)]);
        assert_eq!(t.to_json(), serde_json::json!([{"a": null, "b": 3}]));
    }

    #[test]
    fn suffix_appends() {
        assert_eq!(with_suffix(Path::new("/tmp/x.csv"), ".meta.json"), PathBuf::from("/tmp/x.csv.meta.json"));
    }
}
