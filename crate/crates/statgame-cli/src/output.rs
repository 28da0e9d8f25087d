//! Number formatting and file output shared by the subcommands.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Number, Value};
use statgame::dist::{rational_to_f64, Rational};

/// Rounds to 12 significant digits (ties to even on the exact binary value).
pub fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// A JSON number at 12 significant digits, or `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn rat(x: &Rational) -> Value {
    num(rational_to_f64(x))
}

pub fn opt_rat(x: Option<&Rational>) -> Value {
    x.map_or(Value::Null, rat)
}

pub fn exact(x: Option<&Rational>) -> Value {
    x.map_or(Value::Null, |r| Value::String(r.to_string()))
}

pub fn splits(s: &[(u64, f64)]) -> Value {
    Value::Array(
        s.iter()
            .map(|&(k, v)| Value::Array(vec![k.into(), num(v)]))
            .collect(),
    )
}

/// An ordered record; keys keep insertion order.
pub type Record = Map<String, Value>;

/// CSV cell text: empty for `null`, `k:v;k:v` for split lists.
fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items
            .iter()
            .map(|it| match it {
                Value::Array(pair) => pair.iter().map(cell).collect::<Vec<_>>().join(":"),
                other => cell(other),
            })
            .collect::<Vec<_>>()
            .join(";"),
        other => other.to_string(),
    }
}

pub fn to_csv(header: &[String], records: &[Record]) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in records {
        w.write_record(
            header
                .iter()
                .map(|h| r.get(h).map_or_else(String::new, cell)),
        )?;
    }
    w.into_inner().map_err(|e| io::Error::other(e.to_string()))
}

pub fn to_json(doc: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("values serialize");
    out.push(b'\n');
    out
}

/// Writes through a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !dir.is_dir() {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
