//! Machine-readable table output.
//!
//! JSON is the source of truth and serializes floats in their shortest
//! round-trip decimal form; CSV prints 17 significant digits, so both
//! encodings parse back to bit-identical values.

use serde::Serialize;
use serde_json::{json, Map, Value};

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    F64(f64),
    U64(u64),
    Bool(bool),
    Str(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F64(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::F64)
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::F64(v) => json!(v),
            Cell::U64(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Str(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }

    fn to_csv_field(&self) -> String {
        match self {
            Cell::F64(v) => format_float_17(*v),
            Cell::U64(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

/// 17 significant digits: enough to reproduce any binary64 exactly.
pub fn format_float_17(v: f64) -> String {
    format!("{v:.16e}")
}

/// A rectangular result set with named columns and run metadata.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub command: String,
    pub meta: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Serialize) -> Self {
        self.meta.push((
            key.to_string(),
            serde_json::to_value(value).expect("metadata serializes"),
        ));
        self
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        for (k, v) in &self.meta {
            obj.insert(k.clone(), v.clone());
        }
        obj.insert("columns".into(), json!(self.columns));
        obj.insert(
            "rows".into(),
            Value::Array(
                self.rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
                    .collect(),
            ),
        );
        Value::Object(obj)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::to_csv_field).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json())
                    .expect("table serializes");
                s.push('\n');
                s
            }
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> Table {
        let mut t = Table::new("demo", &["rho", "value"]).with_meta("seed", 7u64);
        t.push_row(vec![Cell::F64(0.5), Cell::F64(1.0 / 3.0)]);
        t.push_row(vec![Cell::F64(std::f64::consts::FRAC_PI_2), Cell::Empty]);
        t
    }

    #[test]
    fn deterministic_rendering() {
        let a = sample_table().render(OutputFormat::Json);
        let b = sample_table().render(OutputFormat::Json);
        assert_eq!(a, b);
        let a = sample_table().render(OutputFormat::Csv);
        let b = sample_table().render(OutputFormat::Csv);
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
        assert!(!a.contains('\r'));
    }

    #[test]
    fn csv_and_json_carry_identical_values() {
        let t = sample_table();
        let j = t.to_json();
        let csv = t.to_csv();
        let csv_rows: Vec<&str> = csv.lines().skip(1).collect();
        for (row_idx, row) in j["rows"].as_array().unwrap().iter().enumerate() {
            let fields: Vec<&str> = csv_rows[row_idx].split(',').collect();
            for (col_idx, v) in row.as_array().unwrap().iter().enumerate() {
                match v {
                    Value::Null => assert_eq!(fields[col_idx], ""),
                    Value::Number(n) => {
                        let from_json = n.as_f64().unwrap();
                        let from_csv: f64 = fields[col_idx].parse().unwrap();
                        assert_eq!(from_json.to_bits(), from_csv.to_bits());
                    }
                    _ => panic!("unexpected cell type"),
                }
            }
        }
    }

    #[test]
    fn seventeen_digit_floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, -2.5e17] {
            let s = format_float_17(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{s}");
        }
    }
}
