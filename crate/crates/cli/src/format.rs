//! Rendering of key/value reports as aligned text, CSV or flat JSON.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Structured,
}

/// Formats `v` with 12 significant digits, `%.12g` style.
pub fn sig12(v: f64) -> String {
    const DIGITS: i32 = 12;
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Num(f64),
    Int(usize),
    Bool(bool),
    Text(String),
    Missing,
}

impl Field {
    fn display(&self) -> String {
        match self {
            Field::Num(v) => sig12(*v),
            Field::Int(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Missing => "-".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Num(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Field::Int(v) => Value::from(*v),
            Field::Bool(v) => Value::Bool(*v),
            Field::Text(s) => Value::String(s.clone()),
            Field::Missing => Value::Null,
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
        Field::Int(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.into())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Missing, Into::into)
    }
}

/// Ordered list of named fields.
#[derive(Clone, Debug, Default)]
pub struct Record {
    fields: Vec<(String, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Field>) -> &mut Self {
        self.fields.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Text: aligned `key value` lines. CSV: a header row and one value row.
    /// Structured: one flat JSON object with full-precision numbers.
    pub fn write(&self, out: &mut dyn Write, format: Format) -> io::Result<()> {
        match format {
            Format::Text => {
                let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0) + 2;
                for (k, v) in &self.fields {
                    writeln!(out, "{k:<width$}{}", v.display())?;
                }
            }
            Format::Csv => {
                let keys: Vec<&str> = self.fields.iter().map(|(k, _)| k.as_str()).collect();
                let values: Vec<String> = self
                    .fields
                    .iter()
                    .map(|(_, v)| csv_cell(&v.display()))
                    .collect();
                writeln!(out, "{}", keys.join(","))?;
                writeln!(out, "{}", values.join(","))?;
            }
            Format::Structured => {
                let map: Map<String, Value> = self
                    .fields
                    .iter()
                    .map(|(k, v)| (k.clone(), v.json()))
                    .collect();
                let text =
                    serde_json::to_string_pretty(&Value::Object(map)).map_err(io::Error::other)?;
                writeln!(out, "{text}")?;
            }
        }
        Ok(())
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
