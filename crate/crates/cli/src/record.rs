//! Output records and their text, JSON and CSV renderings.

use std::fmt::Write as _;

use indexmap::IndexMap;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// A rendered scalar. Exact integers, rationals and floats are all carried as
/// decimal strings, so nothing passes through a 53-bit float on the way out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Bool(bool),
    Str(String),
}

impl Scalar {
    pub fn render(&self) -> String {
        match self {
            Scalar::Bool(b) => b.to_string(),
            Scalar::Str(s) => s.clone(),
        }
    }
}

impl From<bool> for Scalar {
    fn from(b: bool) -> Self {
        Scalar::Bool(b)
    }
}

impl From<&str> for Scalar {
    fn from(s: &str) -> Self {
        Scalar::Str(s.to_owned())
    }
}

impl From<String> for Scalar {
    fn from(s: String) -> Self {
        Scalar::Str(s)
    }
}

macro_rules! integer_scalar {
    ($($t:ty),*) => {$(
        impl From<$t> for Scalar {
            fn from(v: $t) -> Self {
                Scalar::Str(v.to_string())
            }
        }
    )*};
}
integer_scalar!(usize, u64, u32, i64, BigUint, BigInt, &BigUint, &BigInt);

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Str(format_float(v))
    }
}

impl From<&BigRational> for Scalar {
    fn from(v: &BigRational) -> Self {
        Scalar::Str(format_rational(v))
    }
}

/// `a/b` in lowest terms, or just `a` for integers.
pub fn format_rational(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Twelve significant digits, positional notation for moderate exponents,
/// trailing zeros trimmed. Independent of locale.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-6..11).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else if (11..16).contains(&exp) {
        let sign = if v < 0.0 { "-" } else { "" };
        let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
        format!("{sign}{digits}{}", "0".repeat(exp as usize - 11))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s.to_owned()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: IndexMap<String, Scalar>,
    pub results: IndexMap<String, Scalar>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_owned(), parameters: IndexMap::new(), results: IndexMap::new() }
    }

    pub fn param(mut self, key: &str, value: impl Into<Scalar>) -> Self {
        self.parameters.insert(key.to_owned(), value.into());
        self
    }

    pub fn result(mut self, key: &str, value: impl Into<Scalar>) -> Self {
        self.results.insert(key.to_owned(), value.into());
        self
    }

    fn columns(&self) -> Vec<&str> {
        self.parameters.keys().chain(self.results.keys()).map(String::as_str).collect()
    }

    fn values(&self) -> impl Iterator<Item = &Scalar> {
        self.parameters.values().chain(self.results.values())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn render(records: &[OutputRecord], format: Format) -> String {
    match format {
        Format::Text => render_text(records),
        Format::Json => {
            let mut out = serde_json::to_string_pretty(records).expect("records serialize");
            out.push('\n');
            out
        }
        Format::Csv => render_csv(records),
    }
}

fn render_text(records: &[OutputRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.command);
        for (k, v) in r.parameters.iter().chain(&r.results) {
            let _ = write!(out, " {k}={}", v.render());
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Consecutive records sharing a column list share one header; a change of
/// columns starts a new block after a blank line.
fn render_csv(records: &[OutputRecord]) -> String {
    let mut out = String::new();
    let mut current: Option<Vec<&str>> = None;
    for r in records {
        let cols = r.columns();
        if current.as_ref() != Some(&cols) {
            if current.is_some() {
                out.push('\n');
            }
            out.push_str(&cols.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
            current = Some(cols);
        }
        out.push_str(&r.values().map(|v| csv_field(&v.render())).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

/// Parses CSV produced by [`render`] back into `(columns, rows)` blocks.
pub fn parse_csv(text: &str) -> Vec<(Vec<String>, Vec<Vec<String>>)> {
    fn split(line: &str) -> Vec<String> {
        let mut fields = Vec::new();
        let mut field = String::new();
        let mut quoted = false;
        let mut chars = line.chars().peekable();
        while let Some(c) = chars.next() {
            match (c, quoted) {
                ('"', true) if chars.peek() == Some(&'"') => {
                    field.push('"');
                    chars.next();
                }
                ('"', _) => quoted = !quoted,
                (',', false) => fields.push(std::mem::take(&mut field)),
                _ => field.push(c),
            }
        }
        fields.push(field);
        fields
    }
    text.split("\n\n")
        .filter(|block| !block.trim().is_empty())
        .map(|block| {
            let mut lines = block.lines().filter(|l| !l.is_empty());
            let header = split(lines.next().unwrap_or_default());
            (header, lines.map(split).collect())
        })
        .collect()
}
