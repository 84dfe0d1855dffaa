//! Tables of results rendered as CSV or JSON with 12 significant digits.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` with 12 significant digits: fixed notation for moderate magnitudes,
/// scientific otherwise.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding may carry into a new leading digit (9.99… → 10.0…)
        let digits = s.trim_start_matches('-').replace('.', "");
        let significant = digits.trim_start_matches('0').len();
        if significant > SIGNIFICANT_DIGITS && decimals > 0 {
            return format!("{x:.prec$}", prec = decimals - 1);
        }
        s
    } else {
        format!("{x:.prec$e}", prec = SIGNIFICANT_DIGITS - 1)
    }
}

/// `x` rounded to 12 significant digits.
pub fn round_significant(x: f64) -> f64 {
    format_number(x).parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Integer(i64),
    Text(String),
    Missing,
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Value::Number(x) => format_number(*x),
            Value::Integer(i) => i.to_string(),
            Value::Text(s) => s.clone(),
            Value::Missing => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Number(x) => serde_json::Number::from_f64(round_significant(*x))
                .map(Json::Number)
                .unwrap_or(Json::Null),
            Value::Integer(i) => json!(i),
            Value::Text(s) => json!(s),
            Value::Missing => Json::Null,
        }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Number(x)
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Value::Missing, Value::Number)
    }
}

impl From<usize> for Value {
    fn from(i: usize) -> Self {
        Value::Integer(i as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

/// Column-ordered rows plus free-form notes (per-row failures, warnings).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Config(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column (`None` for missing cells).
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Provenance block of a JSON report.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    /// Effective configuration, key → rendered value.
    pub config: BTreeMap<String, String>,
}

pub fn to_csv(table: &Table) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| Error::Serialize(e.to_string());
    w.write_record(&table.columns).map_err(ser)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Value::render)).map_err(ser)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
}

pub fn to_json(table: &Table, meta: &Metadata) -> Result<String> {
    let rows: Vec<Json> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (c, v) in table.columns.iter().zip(row) {
                obj.insert(c.clone(), v.to_json());
            }
            Json::Object(obj)
        })
        .collect();
    let doc = json!({
        "metadata": {
            "tool": meta.tool,
            "version": meta.version,
            "command": meta.command,
            "seed": meta.seed,
            "config": meta.config,
            "notes": table.notes,
        },
        "columns": table.columns,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn render(table: &Table, meta: &Metadata, format: Format) -> Result<String> {
    if table.is_empty() {
        return Err(Error::Config("refusing to emit an empty table".into()));
    }
    match format {
        Format::Csv => to_csv(table),
        Format::Json => to_json(table, meta),
    }
}

/// Parses a document produced by [`to_json`] back into a table.
pub fn from_json(text: &str) -> Result<Table> {
    let doc: Json = serde_json::from_str(text).map_err(|e| Error::Serialize(e.to_string()))?;
    let bad = || Error::Serialize("malformed report".into());
    let columns: Vec<String> = doc["columns"]
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|c| c.as_str().map(str::to_string).ok_or_else(bad))
        .collect::<Result<_>>()?;
    let mut table = Table {
        columns: columns.clone(),
        rows: Vec::new(),
        notes: doc["metadata"]["notes"]
            .as_array()
            .map(|n| n.iter().filter_map(|x| x.as_str().map(str::to_string)).collect())
            .unwrap_or_default(),
    };
    for row in doc["rows"].as_array().ok_or_else(bad)? {
        let values = columns
            .iter()
            .map(|c| match &row[c] {
                Json::Null => Value::Missing,
                Json::Number(n) if n.is_i64() => Value::Integer(n.as_i64().unwrap_or_default()),
                Json::Number(n) => Value::Number(n.as_f64().unwrap_or(f64::NAN)),
                Json::String(s) => Value::Text(s.clone()),
                other => Value::Text(other.to_string()),
            })
            .collect();
        table.rows.push(values);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(format_number(-1.1372838344885), "-1.13728383449");
        assert_eq!(format_number(0.2), "0.200000000000");
        assert_eq!(format_number(9.9999999999999), "10.0000000000");
        assert_eq!(format_number(1.5e-9), "1.50000000000e-9");
        assert_eq!(format_number(0.0), "0");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1.0.into(), Value::Missing]).unwrap();
        assert_eq!(to_csv(&t).unwrap(), "a,b\n1.00000000000,\n");
        assert!(t.push(vec![1.0.into()]).is_err());
    }

    #[test]
    fn empty_table_rejected() {
        let t = Table::new(&["a"]);
        assert!(render(&t, &Metadata::default(), Format::Csv).is_err());
    }
}
