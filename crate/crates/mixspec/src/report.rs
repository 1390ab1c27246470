//! Run reports and their JSON and CSV forms.
//!
//! Floats are written with 17 significant digits so that parsing the output
//! gives back the exact `f64`. Non-finite values become `null` in JSON and
//! `NaN`/`inf` in CSV.

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub const SCHEMA_VERSION: u32 = 1;

/// `x` with 17 significant digits in exponent form.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
    Floats(Vec<f64>),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => s.clone(),
            Cell::Floats(xs) => xs.iter().map(|&x| format_float(x)).collect::<Vec<_>>().join(";"),
        }
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Null, Cell::Float)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<Vec<f64>> for Cell {
    fn from(xs: Vec<f64>) -> Self {
        Cell::Floats(xs)
    }
}

struct JsonFloat(f64);

impl Serialize for JsonFloat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(format_float(self.0)).expect("valid JSON number").serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Null => s.serialize_none(),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Int(i) => s.serialize_i64(*i),
            Cell::Float(x) => JsonFloat(*x).serialize(s),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Floats(xs) => {
                let mut seq = s.serialize_seq(Some(xs.len()))?;
                for &x in xs {
                    seq.serialize_element(&JsonFloat(x))?;
                }
                seq.end()
            }
        }
    }
}

/// Key-value pairs serialized as a JSON object in their given order.
struct Ordered<'a, K: AsRef<str>>(&'a [(K, Cell)]);

impl<K: AsRef<str>> Serialize for Ordered<'_, K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k.as_ref(), v)?;
        }
        map.end()
    }
}

struct Row<'a> {
    columns: &'a [&'static str],
    cells: &'a [Cell],
}

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.columns.len()))?;
        for (k, v) in self.columns.iter().zip(self.cells) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    /// `spectrum`, `verify ks`, ...
    pub command: String,
    /// Every input that influenced the result, defaults included.
    pub inputs: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Only set when timing was requested, so that output stays reproducible otherwise.
    pub wall_clock_seconds: Option<f64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, columns: Vec<&'static str>) -> Self {
        RunReport {
            command: command.into(),
            inputs: Vec::new(),
            columns,
            rows: Vec::new(),
            wall_clock_seconds: None,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.inputs.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the columns");
        self.rows.push(row);
    }

    pub fn cell(&self, row: usize, column: &str) -> Option<&Cell> {
        let i = self.columns.iter().position(|c| *c == column)?;
        self.rows.get(row).map(|r| &r[i])
    }

    /// Rows whose `holds` cell is `true`, and the number of rows with a `holds` cell.
    pub fn holding(&self) -> (usize, usize) {
        let Some(i) = self.columns.iter().position(|c| *c == "holds") else {
            return (0, 0);
        };
        let ok = self.rows.iter().filter(|r| r[i] == Cell::Bool(true)).count();
        (ok, self.rows.len())
    }

    pub fn passed(&self) -> bool {
        let (ok, total) = self.holding();
        ok == total
    }

    pub fn to_json(&self) -> String {
        let (holding, checked) = self.holding();
        let summary = [
            ("rows", Cell::from(self.rows.len())),
            ("checked", Cell::from(checked)),
            ("holding", Cell::from(holding)),
            ("passed", Cell::from(self.passed())),
        ];
        let rows: Vec<Row<'_>> = self
            .rows
            .iter()
            .map(|cells| Row {
                columns: &self.columns,
                cells,
            })
            .collect();
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::pretty(&mut out);
        let mut write = || -> serde_json::Result<()> {
            let mut map = (&mut ser).serialize_map(None)?;
            map.serialize_entry("schema_version", &SCHEMA_VERSION)?;
            map.serialize_entry("command", &self.command)?;
            map.serialize_entry("inputs", &Ordered(&self.inputs))?;
            map.serialize_entry("columns", &self.columns)?;
            map.serialize_entry("rows", &rows)?;
            map.serialize_entry("summary", &Ordered(&summary))?;
            if let Some(t) = self.wall_clock_seconds {
                map.serialize_entry("wall_clock_seconds", &JsonFloat(t))?;
            }
            SerializeMap::end(map)
        };
        write().expect("in-memory write");
        out.push(b'\n');
        String::from_utf8(out).expect("JSON is UTF-8")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("CSV is UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        let mut r = RunReport::new("verify test", vec!["k", "value", "holds", "faces"]);
        r.input("point", Cell::Floats(vec![0.5, 0.5])).input("note", "a,b");
        r.push(vec![1usize.into(), (0.1 + 0.2).into(), true.into(), vec![1.0 / 3.0, f64::NAN].into()]);
        r.push(vec![2usize.into(), f64::INFINITY.into(), false.into(), Cell::Null]);
        r
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1 + 0.2, ODD_DIGITS, 1e-300, -2.5e17, 5e-324] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert_eq!(s.split('e').next().unwrap().trim_start_matches('-').replace('.', "").len(), 17);
        }
    }

    const ODD_DIGITS: f64 = 1.234_567_890_123_456_7;

    #[test]
    fn json_layout() {
        let r = sample();
        let text = r.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["rows"][0]["value"].as_f64(), Some(0.1 + 0.2));
        assert!(text.contains("3.0000000000000004e-1"));
        assert!(v["rows"][1]["value"].is_null());
        assert!(v["rows"][0]["faces"][1].is_null());
        assert_eq!(v["summary"]["holding"], 1);
        assert_eq!(v["summary"]["passed"], false);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 6);
        // inputs keep insertion order
        assert!(text.find("\"point\"").unwrap() < text.find("\"note\"").unwrap());
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,value,holds,faces"));
        assert_eq!(lines.next(), Some("1,3.0000000000000004e-1,true,3.3333333333333331e-1;NaN"));
        assert_eq!(lines.next(), Some("2,inf,false,"));
    }

    #[test]
    fn pass_fail_follows_holds() {
        let mut r = RunReport::new("x", vec!["holds"]);
        assert!(r.passed());
        r.push(vec![true.into()]);
        assert!(r.passed());
        r.push(vec![false.into()]);
        assert!(!r.passed());
        assert_eq!(r.cell(1, "holds"), Some(&Cell::Bool(false)));
    }
}
