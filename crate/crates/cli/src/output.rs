//! Output envelope and its JSON / CSV renderings.
//!
//! CSV is the envelope flattened to `path,value` rows: object keys and array
//! indices joined with `.`, in document order. Empty containers are kept as
//! `[]` / `{}` and null as an empty field, so both formats carry the same
//! information.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct Envelope {
    pub command: &'static str,
    pub inputs: Value,
    pub result: Value,
    pub exact: bool,
}

impl Envelope {
    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "exact": self.exact,
        })
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<()> {
        let value = self.to_value();
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &value)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["path", "value"])?;
                for (path, cell) in flatten(&value) {
                    w.write_record([path, cell])?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// Integers that fit in `i64` become JSON numbers, larger ones strings.
pub fn big(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(x) => Value::from(x),
        Err(_) => Value::String(n.to_string()),
    }
}

pub fn flatten(value: &Value) -> Vec<(String, String)> {
    let mut rows = Vec::new();
    walk(value, String::new(), &mut rows);
    rows
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn walk(value: &Value, path: String, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            for (k, v) in map {
                walk(v, join(&path, k), rows);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, v) in items.iter().enumerate() {
                walk(v, join(&path, &i.to_string()), rows);
            }
        }
        Value::Object(_) => rows.push((path, "{}".into())),
        Value::Array(_) => rows.push((path, "[]".into())),
        Value::Null => rows.push((path, String::new())),
        Value::String(s) => rows.push((path, s.clone())),
        Value::Bool(b) => rows.push((path, b.to_string())),
        Value::Number(n) => rows.push((path, n.to_string())),
    }
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(
        pairs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}
