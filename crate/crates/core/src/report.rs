//! Deterministic CSV and JSON report tables.
//!
//! Rows are sorted by the declared key columns before emission, so the output does not
//! depend on the order in which rows were produced. Floats use Rust's shortest round-trip
//! decimal form (`Debug`, which switches to exponent notation for
//! very small or large magnitudes). Metadata lines (`# key: value`) precede the CSV header.

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{QlabError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = QlabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(QlabError::Parse(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Empty,
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn rank(&self) -> u8 {
        match self {
            Cell::Empty => 0,
            Cell::Bool(_) => 1,
            Cell::Int(_) | Cell::Float(_) => 2,
            Cell::Text(_) => 3,
        }
    }

    fn compare(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cell::Int(a), Cell::Int(b)) => a.cmp(b),
            (Cell::Int(a), Cell::Float(b)) => (*a as f64).total_cmp(b),
            (Cell::Float(a), Cell::Int(b)) => a.total_cmp(&(*b as f64)),
            (Cell::Float(a), Cell::Float(b)) => a.total_cmp(b),
            (Cell::Bool(a), Cell::Bool(b)) => a.cmp(b),
            (Cell::Text(a), Cell::Text(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Int(x) => json!(x),
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(format!("{x:?}")),
            Cell::Bool(x) => json!(x),
            Cell::Text(x) => json!(x),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Empty => Ok(()),
            Cell::Int(x) => write!(f, "{x}"),
            Cell::Float(x) => write!(f, "{x:?}"),
            Cell::Bool(x) => write!(f, "{x}"),
            Cell::Text(x) => f.write_str(x),
        }
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<f64> for Cell {
    /// Empty sums come out as `-0.0`; reports carry a single zero.
    fn from(x: f64) -> Self {
        Cell::Float(if x == 0.0 { 0.0 } else { x })
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// A homogeneous table with declared key columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    keys: Vec<usize>,
    rows: Vec<Vec<Cell>>,
    metadata: Vec<(String, String)>,
}

impl Table {
    /// `keys` name the sort columns, most significant first.
    pub fn new(columns: &[&str], keys: &[&str]) -> Self {
        let keys = keys
            .iter()
            .map(|k| columns.iter().position(|c| c == k).unwrap_or_else(|| panic!("key `{k}` is not a column")))
            .collect();
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), keys, rows: Vec::new(), metadata: Vec::new() }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(QlabError::InvalidParameter(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn set_meta(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Column cells of `name`.
    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    /// Stable sort by key columns, then by the full row as a tie-break.
    pub fn sort(&mut self) {
        let keys = self.keys.clone();
        let full = |a: &[Cell], b: &[Cell]| a.iter().zip(b).map(|(x, y)| x.compare(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal);
        self.rows.sort_by(|a, b| {
            keys.iter().map(|&k| a[k].compare(&b[k])).find(|o| o.is_ne()).unwrap_or_else(|| full(a, b))
        });
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut sorted = self.clone();
        sorted.sort();
        let mut out = String::new();
        for (k, v) in &sorted.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&sorted.columns)?;
        for row in &sorted.rows {
            writer.write_record(row.iter().map(|c| c.to_string()))?;
        }
        let bytes = writer.into_inner().map_err(|e| QlabError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let mut sorted = self.clone();
        sorted.sort();
        let metadata: serde_json::Map<String, Value> =
            sorted.metadata.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let rows: Vec<Value> = sorted.rows.iter().map(|r| Value::Array(r.iter().map(Cell::to_json).collect())).collect();
        let doc = json!({ "metadata": metadata, "columns": sorted.columns, "rows": rows });
        serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        std::fs::write(path, self.render(format)?)?;
        Ok(())
    }
}

/// A parsed report with every cell in its textual form.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl RawTable {
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut body = String::new();
        for line in text.lines() {
            match line.strip_prefix("# ") {
                Some(m) => {
                    let (k, v) = m.split_once(": ").unwrap_or((m, ""));
                    metadata.push((k.to_string(), v.to_string()));
                }
                None => {
                    body.push_str(line);
                    body.push('\n');
                }
            }
        }
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let columns = reader.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            rows.push(record?.iter().map(str::to_string).collect());
        }
        Ok(Self { metadata, columns, rows })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)?;
        let bad = || QlabError::Parse("report JSON must have metadata, columns and rows".into());
        let metadata = doc["metadata"]
            .as_object()
            .ok_or_else(bad)?
            .iter()
            .map(|(k, v)| (k.clone(), v.as_str().unwrap_or_default().to_string()))
            .collect();
        let columns = doc["columns"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|c| c.as_str().map(str::to_string).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let text_of = |v: &Value| match v {
            Value::Null => String::new(),
            Value::String(s) => s.clone(),
            Value::Number(n) => match n.as_i64() {
                Some(i) => i.to_string(),
                None => n.as_f64().map(|x| format!("{x:?}")).unwrap_or_default(),
            },
            other => other.to_string(),
        };
        let rows = doc["rows"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|r| r.as_array().map(|cells| cells.iter().map(text_of).collect()).ok_or_else(bad))
            .collect::<Result<_>>()?;
        Ok(Self { metadata, columns, rows })
    }

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Csv => Self::from_csv(text),
            Format::Json => Self::from_json(text),
        }
    }

    /// Metadata sorted by key; JSON objects do not keep insertion order.
    pub fn sorted_metadata(&self) -> Vec<(String, String)> {
        let mut m = self.metadata.clone();
        m.sort();
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn sample() -> Table {
        let mut t = Table::new(&["trial", "R", "lhs", "pass", "note"], &["trial", "R"]);
        t.set_meta("rng", "ChaCha8");
        t.set_meta("seed", 42);
        t.push(vec![2.into(), 3.5.into(), 0.1.into(), true.into(), "x, y".into()]).unwrap();
        t.push(vec![1.into(), 2.0.into(), f64::INFINITY.into(), false.into(), Cell::Empty]).unwrap();
        t.push(vec![1.into(), 16.0.into(), 1e-300.into(), true.into(), "\"q\"".into()]).unwrap();
        t
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["r", "value"], &["r"]);
        assert_eq!(t.to_csv().unwrap(), "r,value\n");
        let raw = RawTable::from_csv(&t.to_csv().unwrap()).unwrap();
        assert!(raw.rows.is_empty());
        assert_eq!(raw.columns, vec!["r", "value"]);
    }

    #[test]
    fn formats_agree_after_parsing() {
        let t = sample();
        let csv = RawTable::from_csv(&t.to_csv().unwrap()).unwrap();
        let json = RawTable::from_json(&t.to_json()).unwrap();
        assert_eq!(csv.columns, json.columns);
        assert_eq!(csv.rows, json.rows);
        assert_eq!(csv.sorted_metadata(), json.sorted_metadata());
        assert_eq!(csv.rows[0][1], "2.0");
        assert_eq!(csv.rows[2][4], "x, y");
        assert!(matches!(t.clone().push(vec![1.into()]), Err(QlabError::InvalidParameter(_))));
    }

    #[test]
    fn ordering_is_independent_of_production_order() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut rows: Vec<Vec<Cell>> =
            (0..10_000i64).map(|i| vec![(i % 97).into(), ((i * 31) % 101).into(), (i as f64 / 7.0).into()]).collect();
        let mut a = Table::new(&["a", "b", "c"], &["a", "b"]);
        for r in &rows {
            a.push(r.clone()).unwrap();
        }
        rows.shuffle(&mut rng);
        let mut b = Table::new(&["a", "b", "c"], &["a", "b"]);
        for r in rows {
            b.push(r).unwrap();
        }
        assert_eq!(a.to_csv().unwrap(), b.to_csv().unwrap());
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn shortest_round_trip_floats() {
        let mut t = Table::new(&["x"], &["x"]);
        for x in [0.1, 1.0 / 3.0, 2.5e-17] {
            t.push(vec![x.into()]).unwrap();
        }
        let raw = RawTable::from_csv(&t.to_csv().unwrap()).unwrap();
        let back: Vec<f64> = raw.rows.iter().map(|r| r[0].parse().unwrap()).collect();
        assert_eq!(back, vec![2.5e-17, 0.1, 1.0 / 3.0]);
        assert_eq!(raw.rows[1][0], "0.1");
    }
}
