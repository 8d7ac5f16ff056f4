//! Table assembly and the CSV/JSON writers.
//!
//! Floats are serialized with 17 significant digits so re-parsing reproduces
//! every `f64` bit for bit, in both formats.

use eigencurve_core::harness::PowerLawFit;
use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: &str = "1";

/// 17 significant digits: exact `f64` round trip as text.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone)]
pub enum Cell {
    Str(String),
    Int(i64),
    UInt(u64),
    Float(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Str(s) => csv_quote(s),
            Cell::Int(v) => v.to_string(),
            Cell::UInt(v) => v.to_string(),
            Cell::Float(x) => format_f64(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

fn csv_quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Str(s) => serializer.serialize_str(s),
            Cell::Int(v) => serializer.serialize_i64(*v),
            Cell::UInt(v) => serializer.serialize_u64(*v),
            Cell::Float(x) =>
            // JSON numbers cannot carry infinities; those become null
            {
                if x.is_finite() {
                    RawValue::from_string(format_f64(*x))
                        .map_err(serde::ser::Error::custom)?
                        .serialize(serializer)
                } else {
                    serializer.serialize_none()
                }
            }
            Cell::Bool(b) => serializer.serialize_bool(*b),
            Cell::Empty => serializer.serialize_none(),
        }
    }
}

/// Fixed-column table plus the metadata of one command invocation.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("schema,");
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(SCHEMA_VERSION);
            for cell in row {
                out.push(',');
                out.push_str(&cell.csv());
            }
            out.push('\n');
        }
        out
    }
}

struct FitJson<'a>(&'a PowerLawFit);

impl Serialize for FitJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("fit", 4)?;
        st.serialize_field("exponent", &Cell::Float(self.0.exponent))?;
        st.serialize_field("log_intercept", &Cell::Float(self.0.log_intercept))?;
        st.serialize_field("r_squared", &Cell::Float(self.0.r_squared))?;
        let residuals: Vec<Cell> = self.0.residuals.iter().map(|&r| Cell::Float(r)).collect();
        st.serialize_field("residuals", &residuals)?;
        st.end()
    }
}

struct RowsJson<'a>(&'a Table);

impl Serialize for RowsJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&RowJson { table: self.0, row })?;
        }
        seq.end()
    }
}

struct RowJson<'a> {
    table: &'a Table,
    row: &'a [Cell],
}

impl Serialize for RowJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.row.len()))?;
        for (name, cell) in self.table.columns.iter().zip(self.row) {
            map.serialize_entry(name, cell)?;
        }
        map.end()
    }
}

/// The full machine-readable record of one invocation.
pub struct OutputRecord<'a> {
    pub command: String,
    pub table: &'a Table,
    pub fit: Option<&'a PowerLawFit>,
    pub extra: Vec<(&'static str, Cell)>,
    pub timing_ms: f64,
}

impl Serialize for OutputRecord<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("schema_version", SCHEMA_VERSION)?;
        map.serialize_entry("command", &self.command)?;
        for (key, cell) in &self.extra {
            map.serialize_entry(key, cell)?;
        }
        map.serialize_entry("rows", &RowsJson(self.table))?;
        match self.fit {
            Some(fit) => map.serialize_entry("fit", &FitJson(fit))?,
            None => map.serialize_entry("fit", &())?,
        }
        map.serialize_entry("timing_ms", &Cell::Float(self.timing_ms))?;
        map.end()
    }
}

impl OutputRecord<'_> {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("static schema serializes");
        text.push('\n');
        text
    }
}

/// Write to `path` (atomically, via a sibling temp file) or to stdout.
pub fn emit(path: Option<&Path>, payload: &str) -> io::Result<()> {
    match path {
        None => {
            io::stdout().write_all(payload.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let mut tmp: PathBuf = path.to_path_buf();
            let mut name = path
                .file_name()
                .map(|n| n.to_os_string())
                .unwrap_or_else(|| "out".into());
            name.push(".tmp");
            tmp.set_file_name(name);
            fs::write(&tmp, payload)?;
            fs::rename(&tmp, path)
        }
    }
}
