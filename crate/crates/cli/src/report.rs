//! Report tables and their CSV/JSON rendering.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::usage(format!("unknown format {other:?} (expected csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i128),
    Num(f64),
    Text(String),
    Bool(bool),
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v as i128)
    }
}

impl From<i64> for Field {
    fn from(v: i64) -> Self {
        Field::Int(v as i128)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i128)
    }
}

impl From<u32> for Field {
    fn from(v: u32) -> Self {
        Field::Int(v as i128)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

/// Fixed six decimals for `|x| >= 0.1` (and zero), otherwise six significant
/// digits in scientific notation. Ties round to even.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if x == 0.0 {
        "0.000000".to_string()
    } else if x.abs() >= 0.1 {
        format!("{x:.6}")
    } else {
        format!("{x:.5e}")
    }
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Num(v) => format_number(*v),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(v) => match i64::try_from(*v) {
                Ok(i) => Value::from(i),
                Err(_) => Value::from(v.to_string()),
            },
            Field::Num(v) if v.is_finite() => Value::from(*v),
            Field::Num(v) => Value::from(format_number(*v)),
            Field::Text(s) => Value::from(s.clone()),
            Field::Bool(b) => Value::from(*b),
        }
    }
}

/// One experiment's output: a fixed header and rows of matching width.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub kind: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
    /// Seed of a sampled run, written as a `# seed=` header line.
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(kind: &str, columns: &[&'static str]) -> Self {
        Report {
            kind: kind.to_string(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            seed: None,
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        assert_eq!(row.len(), self.columns.len(), "row width for {}", self.kind);
        self.rows.push(row);
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "# seed={seed}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Field::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, f)| (c.to_string(), f.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("kind".into(), Value::from(self.kind.clone()));
        if let Some(seed) = self.seed {
            obj.insert("seed".into(), Value::from(seed));
        }
        obj.insert("rows".into(), Value::Array(rows));
        Value::Object(obj)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formats() {
        assert_eq!(format_number(0.4472135954999579), "0.447214");
        assert_eq!(format_number(2.23606797749979), "2.236068");
        assert_eq!(format_number(0.2), "0.200000");
        assert_eq!(format_number(0.0), "0.000000");
        assert_eq!(format_number(0.012345678), "1.23457e-2");
        assert_eq!(format_number(-1234567.0), "-1234567.000000");
        assert_eq!(format_number(f64::INFINITY), "inf");
    }

    #[test]
    fn ties_round_to_even() {
        // exactly representable ties
        assert_eq!(format_number(0.1234565), format!("{:.6}", 0.1234565));
        assert_eq!(format!("{:.1}", 0.25), "0.2");
        assert_eq!(format!("{:.1}", 0.75), "0.8");
        assert_eq!(format!("{:.2e}", 1.125), "1.12e0");
    }

    #[test]
    fn csv_and_json_agree_on_columns() {
        let mut r = Report::new("vst", &["kind", "p", "ratio"]);
        r.push(vec!["vst".into(), 5u64.into(), 0.2.into()]);
        assert_eq!(r.to_csv(), "kind,p,ratio\nvst,5,0.200000\n");
        let v = r.to_json_value();
        assert_eq!(v["rows"][0]["p"], 5);
        assert_eq!(v["rows"][0]["ratio"], 0.2);
        let seeded = r.with_seed(9);
        assert!(seeded.to_csv().starts_with("# seed=9\n"));
    }
}
