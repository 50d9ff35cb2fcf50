//! Rendering of results as JSON, CSV or aligned text.
//!
//! Machine formats carry 12 significant digits, human tables 6.

use serde_json::{Map, Value};

pub const MACHINE_DIGITS: usize = 12;
pub const TABLE_DIGITS: usize = 6;

/// `v` rounded to `digits` significant digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v).parse().unwrap_or(v)
}

/// Shortest decimal text for `v` rounded to `digits` significant digits.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    let r = round_sig(v, digits);
    if r == 0.0 {
        // no negative zero in output
        return "0".into();
    }
    if (1e-5..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// One value in a [`Record`].
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    List(Vec<f64>),
}

impl Field {
    fn text(&self, digits: usize) -> String {
        match self {
            Field::Num(v) => fmt_sig(*v, digits),
            Field::Int(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::List(v) => v.iter().map(|x| fmt_sig(*x, digits)).collect::<Vec<_>>().join(","),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Num(v) => {
                let r = round_sig(*v, MACHINE_DIGITS);
                serde_json::Number::from_f64(if r == 0.0 { 0.0 } else { r })
                    .map_or_else(|| Value::String(v.to_string()), Value::Number)
            }
            Field::Int(v) => Value::from(*v),
            Field::Bool(v) => Value::from(*v),
            Field::Text(s) => Value::from(s.as_str()),
            Field::List(v) => Value::Array(v.iter().map(|&x| Field::Num(x).json()).collect()),
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v as i64)
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

impl From<Vec<f64>> for Field {
    fn from(v: Vec<f64>) -> Self {
        Field::List(v)
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

/// An ordered list of named fields.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(String, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Field>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Field>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn to_json_value(&self) -> Value {
        let map: Map<String, Value> = self.fields.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        Value::Object(map)
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Header of keys and a single row of values.
    pub fn to_csv(&self) -> String {
        let keys: Vec<&str> = self.fields.iter().map(|(k, _)| k.as_str()).collect();
        let mut t = Table::new(&keys);
        t.push(self.fields.iter().map(|(_, v)| v.clone()).collect());
        t.to_csv()
    }

    /// `key  value` lines with the keys padded to a common width.
    pub fn to_table(&self) -> String {
        let width = self.fields.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.fields {
            out.push_str(&format!("{k:<width$}  {}\n", v.text(TABLE_DIGITS)));
        }
        out
    }
}

/// Rows sharing one header, rendered as CSV, JSON lines or a text table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|f| f.text(MACHINE_DIGITS))).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn to_json_lines(&self) -> String {
        self.rows
            .iter()
            .map(|row| {
                let map: Map<String, Value> = self.header.iter().cloned().zip(row.iter().map(Field::json)).collect();
                Value::Object(map).to_string() + "\n"
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(|f| f.text(TABLE_DIGITS)).collect()).collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| {
                cells
                    .iter()
                    .map(|r| r[c].chars().count())
                    .chain(std::iter::once(self.header[c].chars().count()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: Vec<&str>| -> String {
            let padded: Vec<String> = items.iter().zip(&widths).map(|(s, &w)| format!("{s:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(self.header.iter().map(String::as_str).collect());
        for r in &cells {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(-(2f64.ln()), 6), "-0.693147");
        assert_eq!(fmt_sig(0.7476138334463576, 12), "0.747613833446");
        assert_eq!(fmt_sig(1e6, 12), "1000000");
        assert_eq!(fmt_sig(0.5625, 6), "0.5625");
        assert_eq!(fmt_sig(-0.0, 6), "0");
        assert_eq!(fmt_sig(1.23456789e-20, 3), "1.23e-20");
    }

    #[test]
    fn record_rendering() {
        let r = Record::new().with("value", 0.5).with("verdict", "PPT").with("n", 3usize);
        assert_eq!(r.to_json(), r#"{"value":0.5,"verdict":"PPT","n":3}"#);
        assert_eq!(r.to_table(), "value    0.5\nverdict  PPT\nn        3\n");
        assert_eq!(r.to_csv(), "value,verdict,n\n0.5,PPT,3\n");
        let l = Record::new().with("q_grid", vec![0.5, 2.0]);
        assert_eq!(l.to_json(), r#"{"q_grid":[0.5,2.0]}"#);
    }

    #[test]
    fn table_rendering() {
        let mut t = Table::new(&["q", "x_star"]);
        t.push(vec![Field::Num(2.0), Field::Num(1.0 / 3f64.sqrt())]);
        assert_eq!(t.to_csv(), "q,x_star\n2,0.57735026919\n");
        assert_eq!(t.to_json_lines(), "{\"q\":2.0,\"x_star\":0.57735026919}\n");
        assert_eq!(t.to_text(), "q  x_star\n2  0.57735\n");
    }
}
