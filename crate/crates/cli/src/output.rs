//! Reports and their text, CSV and JSON renderings.
//!
//! Every number goes through [`fmt_num`] so output is locale-free and
//! diffable: 12 significant digits, plain decimal notation.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(i64::try_from(x).unwrap_or(i64::MAX))
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json_num(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::from(*b),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round12(x);
    if r == 0.0 {
        return "0".into();
    }
    let exp = r.abs().log10().floor() as i32;
    let decimals = (11 - exp).max(0) as usize;
    let mut s = format!("{r:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    s
}

fn json_num(x: f64) -> Value {
    Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

/// Replaces every float in a JSON tree by its 12-digit rounding.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => n.as_f64().map_or(Value::Number(n), json_num),
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Named columns over any number of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Self {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn json_rows(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self
                    .headers
                    .iter()
                    .map(|h| h.to_string())
                    .zip(r.iter().map(Cell::json))
                    .collect();
                Value::Object(obj)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    /// One result: text prints `name: value` lines, or the bare value when
    /// there is a single field. JSON is an object.
    Record(Table),
    /// Rows: text is a space-aligned table, JSON an array of objects.
    Rows(Table),
    /// A JSON document with a flattened table for text and CSV.
    Structured { json: Value, table: Table },
}

impl Report {
    pub fn record(fields: Vec<(&'static str, Cell)>) -> Self {
        let (headers, row): (Vec<_>, Vec<_>) = fields.into_iter().unzip();
        Report::Record(Table {
            headers,
            rows: vec![row],
        })
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let v = match self {
                    Report::Record(t) => t.json_rows().pop().unwrap_or(Value::Null),
                    Report::Rows(t) => Value::Array(t.json_rows()),
                    Report::Structured { json, .. } => round_json(json.clone()),
                };
                serde_json::to_writer_pretty(&mut *out, &v)?;
                writeln!(out)
            }
            Format::Csv => {
                let t = self.table();
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&t.headers)?;
                for r in &t.rows {
                    w.write_record(r.iter().map(Cell::text))?;
                }
                w.flush()
            }
            Format::Text => match self {
                Report::Record(t) | Report::Structured { table: t, .. } if t.rows.len() == 1 => {
                    let row = &t.rows[0];
                    if row.len() == 1 {
                        return writeln!(out, "{}", row[0].text());
                    }
                    let width = t.headers.iter().map(|h| h.len()).max().unwrap_or(0);
                    for (h, c) in t.headers.iter().zip(row) {
                        writeln!(out, "{h:<width$}  {}", c.text())?;
                    }
                    Ok(())
                }
                other => write_aligned(other.table(), out),
            },
        }
    }

    fn table(&self) -> &Table {
        match self {
            Report::Record(t) | Report::Rows(t) | Report::Structured { table: t, .. } => t,
        }
    }
}

fn write_aligned(t: &Table, out: &mut impl Write) -> std::io::Result<()> {
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
    let widths: Vec<usize> = t
        .headers
        .iter()
        .enumerate()
        .map(|(i, h)| cells.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
        .collect();
    let line = |fields: Vec<&str>| {
        let padded: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}")).collect();
        padded.join("  ").trim_end().to_owned()
    };
    writeln!(out, "{}", line(t.headers.clone()))?;
    for r in &cells {
        writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_num(2.868695141619822), "2.86869514162");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-12.5), "-12.5");
        assert_eq!(fmt_num(123456789012345.0), "123456789012000");
        assert_eq!(fmt_num(9.9999999999996), "10");
        assert_eq!(fmt_num(1.1751e-5), "0.000011751");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn json_rounding() {
        let v = round_json(serde_json::json!({"a": 0.1 + 0.2, "b": [1, 2.0000000000001]}));
        assert_eq!(v, serde_json::json!({"a": 0.3, "b": [1, 2.0]}));
    }

    #[test]
    fn text_record_with_one_field_is_bare() {
        let mut buf = Vec::new();
        Report::record(vec![("value", Cell::Num(0.5))])
            .write(Format::Text, &mut buf)
            .unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0.5\n");
    }

    #[test]
    fn csv_rows() {
        let mut t = Table::new(vec!["k", "x"]);
        t.push(vec![Cell::Int(1), Cell::Num(0.25)]);
        let mut buf = Vec::new();
        Report::Rows(t).write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k,x\n1,0.25\n");
    }
}
