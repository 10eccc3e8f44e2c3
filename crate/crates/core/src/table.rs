//! Flat tables with canonical CSV (6 significant digits) and JSON renderings,
//! plus the complex-vector and dense-matrix CSV formats.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(x) => Some(*x),
            Value::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }

    fn parse(cell: &str) -> Value {
        if let Ok(i) = cell.parse::<i64>() {
            return Value::Int(i);
        }
        if cell.parse::<u64>().is_ok() {
            return Value::Text(cell.to_string());
        }
        match cell.parse::<f64>() {
            Ok(x) if !cell.is_empty() => Value::Float(x),
            _ => Value::Text(cell.to_string()),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Int(i) => serde_json::Value::from(*i),
            Value::Float(x) => serde_json::Number::from_f64(*x)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Value::Text(s) => serde_json::Value::from(s.as_str()),
        }
    }
}

/// Numeric values compare by value regardless of integer/float tag.
impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Text(a), Value::Text(b)) => a == b,
            (Value::Float(a), Value::Float(b)) if a.is_nan() && b.is_nan() => true,
            (a, b) => match (a.as_f64(), b.as_f64()) {
                (Some(x), Some(y)) => x == y,
                _ => false,
            },
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => f.write_str(&fmt_sig6(*x)),
            Value::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        i64::try_from(v).map(Value::Int).unwrap_or_else(|_| Value::Text(v.to_string()))
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Text(if v { "true" } else { "false" }.to_string())
    }
}

/// `printf("%.6g")`: six significant digits, trailing zeros trimmed.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Dimension { expected: self.columns.len(), got: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn extend(&mut self, other: Table) -> Result<()> {
        if other.columns != self.columns {
            return Err(Error::InvalidParameter("tables have different columns".into()));
        }
        self.rows.extend(other.rows);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
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

    /// Column values as floats; `None` if the column is missing.
    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[j].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string())).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    pub fn from_csv(text: &str) -> Result<Table> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut table = Table { columns, rows: Vec::new() };
        for rec in r.records() {
            let rec = rec?;
            table.push(rec.iter().map(Value::parse).collect())?;
        }
        Ok(table)
    }

    /// Array of flat objects, floats at full precision.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Value::to_json))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("json rendering");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn render(self, table: &Table) -> String {
        match self {
            OutputFormat::Csv => table.to_csv(),
            OutputFormat::Json => table.to_json(),
        }
    }
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Usage(format!("unknown format '{other}'"))),
        }
    }
}

/// `index,re,im` rows for a complex vector.
pub fn complex_vector_table(v: &[Complex64]) -> Table {
    let mut t = Table::new(["index", "re", "im"]);
    for (i, z) in v.iter().enumerate() {
        t.rows.push(vec![Value::from(i), Value::Float(z.re), Value::Float(z.im)]);
    }
    t
}

/// Parses an `index,re,im` CSV into a vector of length `len`. Indices must be
/// strictly ascending; missing indices are zero.
pub fn parse_complex_vector(text: &str, len: usize) -> Result<Vec<Complex64>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if headers != ["index", "re", "im"] {
        return Err(Error::Parse(format!("expected header index,re,im, got {}", headers.join(","))));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    let mut last: Option<usize> = None;
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).ok_or_else(|| Error::Parse("short row".into()));
        let idx: usize = field(0)?.parse().map_err(|_| Error::Parse(format!("bad index '{}'", &rec[0])))?;
        let re: f64 = field(1)?.parse().map_err(|_| Error::Parse(format!("bad re '{}'", &rec[1])))?;
        let im: f64 = field(2)?.parse().map_err(|_| Error::Parse(format!("bad im '{}'", &rec[2])))?;
        if last.is_some_and(|l| idx <= l) {
            return Err(Error::Parse(format!("indices must ascend, saw {idx} after {}", last.unwrap())));
        }
        if idx >= len {
            return Err(Error::Dimension { expected: len, got: idx + 1 });
        }
        out[idx] = Complex64::new(re, im);
        last = Some(idx);
    }
    Ok(out)
}

/// `row,col,re,im` rows for a dense matrix.
pub fn dense_matrix_table(m: &DMatrix<Complex64>) -> Table {
    let mut t = Table::new(["row", "col", "re", "im"]);
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            t.rows.push(vec![Value::from(r), Value::from(c), Value::Float(z.re), Value::Float(z.im)]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sig6_formatting() {
        assert_eq!(fmt_sig6(1.0 / 5f64.sqrt()), "0.447214");
        assert_eq!(fmt_sig6(1.0), "1");
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(-2.5), "-2.5");
        assert_eq!(fmt_sig6(123456.7), "123457");
        assert_eq!(fmt_sig6(1234567.0), "1.23457e+06");
        assert_eq!(fmt_sig6(9.9999996), "10");
        assert_eq!(fmt_sig6(1e-5), "1e-05");
        assert_eq!(fmt_sig6(0.00012345678), "0.000123457");
        assert_eq!(fmt_sig6(3.0e-12), "3e-12");
    }

    #[test]
    fn complex_vector_roundtrip_and_errors() {
        let v = vec![Complex64::new(0.25, -0.5), Complex64::new(1.0, 0.0)];
        let text = complex_vector_table(&v).to_csv();
        assert!(text.starts_with("index,re,im\n0,0.25,-0.5\n"));
        assert_eq!(parse_complex_vector(&text, 2).unwrap(), v);
        assert!(parse_complex_vector(&text, 1).is_err());
        assert!(parse_complex_vector("index,re,im\n1,0,0\n0,1,1\n", 3).is_err());
        assert!(parse_complex_vector("i,re,im\n", 3).is_err());
        let sparse = parse_complex_vector("index,re,im\n2,1,0\n", 4).unwrap();
        assert_eq!(sparse[2], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn dense_matrix_layout() {
        let m = DMatrix::from_row_slice(1, 2, &[Complex64::new(1.0, 2.0), Complex64::new(3.0, 0.0)]);
        assert_eq!(dense_matrix_table(&m).to_csv(), "row,col,re,im\n0,0,1,2\n0,1,3,0\n");
    }

    #[test]
    fn json_keeps_column_order_and_precision() {
        let mut t = Table::new(["n", "mu", "window"]);
        t.push(vec![5usize.into(), (1.0 / 5f64.sqrt()).into(), "alltop".into()]).unwrap();
        let json = t.to_json();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed[0]["mu"].as_f64().unwrap(), 1.0 / 5f64.sqrt());
        assert!(json.find("\"n\"").unwrap() < json.find("\"window\"").unwrap());
    }

    #[test]
    fn row_width_checked() {
        let mut t = Table::new(["a", "b"]);
        assert!(t.push(vec![1usize.into()]).is_err());
    }

    fn cell() -> impl Strategy<Value = Value> {
        prop_oneof![
            any::<i32>().prop_map(|i| Value::Int(i as i64)),
            (-1e6f64..1e6).prop_map(|x| Value::Float(x)),
            "[a-z][a-z_]{0,8}".prop_map(Value::Text),
        ]
    }

    proptest! {
        #[test]
        fn csv_parse_back_is_identical(rows in prop::collection::vec(prop::collection::vec(cell(), 3), 0..12)) {
            let mut t = Table::new(["a", "b", "c"]);
            for r in rows {
                t.push(r).unwrap();
            }
            let text = t.to_csv();
            let back = Table::from_csv(&text).unwrap();
            prop_assert_eq!(back.to_csv(), text.clone());
            let again = Table::from_csv(&back.to_csv()).unwrap();
            prop_assert_eq!(again, back);
        }
    }
}
