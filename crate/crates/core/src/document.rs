//! Text interchange formats: the frame document and flat report records.
//!
//! Real numbers are always printed with 17 significant digits
//! (`{:.16e}`), which round-trips every `f64` bit-for-bit.
//!
//! A frame document is JSON with a fixed layout:
//!
//! ```text
//! {
//!   "version": 1,
//!   "label": "fourier-d2",
//!   "p": 2.0000000000000000e0,
//!   "dim": 2,
//!   "n": 2,
//!   "F": [
//!     [[7.0710678118654746e-1, 0.0000000000000000e0], [7.0710678118654746e-1, 0.0000000000000000e0]],
//!     ...
//!   ],
//!   "T": [ ... ]
//! }
//! ```
//!
//! `F` holds `n` rows of `dim` complex pairs `[re, im]`, `T` holds `dim`
//! rows of `n` pairs. `label` is optional.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::Value;

use crate::frames::{frame_from_operators, FrameError, ProbeSet, PSchauderFrame};
use crate::numerics::{Mat, Scalar};

pub const FRAME_DOCUMENT_VERSION: u64 = 1;

/// 17 significant digits in scientific notation.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_pair(z: &Scalar) -> String {
    format!("[{}, {}]", fmt_real(z.re), fmt_real(z.im))
}

fn write_matrix(out: &mut String, key: &str, m: &Mat, last: bool) {
    let _ = writeln!(out, "  \"{key}\": [");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(fmt_pair).collect();
        let sep = if i + 1 == m.rows() { "" } else { "," };
        let _ = writeln!(out, "    [{}]{sep}", row.join(", "));
    }
    let _ = writeln!(out, "  ]{}", if last { "" } else { "," });
}

pub fn serialize_frame(frame: &PSchauderFrame) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"version\": {FRAME_DOCUMENT_VERSION},");
    let _ = writeln!(out, "  \"label\": {},", serde_json::to_string(frame.label()).expect("string"));
    let _ = writeln!(out, "  \"p\": {},", fmt_real(frame.p().p()));
    let _ = writeln!(out, "  \"dim\": {},", frame.dim());
    let _ = writeln!(out, "  \"n\": {},", frame.size());
    write_matrix(&mut out, "F", frame.analysis(), false);
    write_matrix(&mut out, "T", frame.synthesis(), true);
    out.push_str("}\n");
    out
}

/// Line on which `"key"` first appears, or 1.
fn line_of(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map_or(1, |i| i + 1)
}

fn parse_error(text: &str, field: &str, message: impl Into<String>) -> FrameError {
    FrameError::Parse { line: line_of(text, field), field: field.to_string(), message: message.into() }
}

fn read_count(text: &str, doc: &Value, field: &str) -> Result<usize, FrameError> {
    let v = doc.get(field).ok_or_else(|| parse_error(text, field, "missing"))?;
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| parse_error(text, field, format!("expected a non-negative integer, got {v}")))
}

fn read_matrix(text: &str, doc: &Value, field: &str, rows: usize, cols: usize) -> Result<Mat, FrameError> {
    let v = doc.get(field).ok_or_else(|| parse_error(text, field, "missing"))?;
    let outer = v.as_array().ok_or_else(|| parse_error(text, field, "expected an array of rows"))?;
    if outer.len() != rows {
        return Err(parse_error(text, field, format!("expected {rows} rows, got {}", outer.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in outer.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| parse_error(text, field, format!("row {i} is not an array")))?;
        if row.len() != cols {
            return Err(parse_error(text, field, format!("row {i} has {} entries, expected {cols}", row.len())));
        }
        for (j, entry) in row.iter().enumerate() {
            let pair = entry.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
                parse_error(text, field, format!("entry [{i}][{j}] must be a pair [re, im]"))
            })?;
            let re = pair[0].as_f64();
            let im = pair[1].as_f64();
            match (re, im) {
                (Some(re), Some(im)) => data.push(Scalar::new(re, im)),
                _ => return Err(parse_error(text, field, format!("entry [{i}][{j}] is not numeric"))),
            }
        }
    }
    Mat::new(rows, cols, data).map_err(|e| parse_error(text, field, e.to_string()))
}

/// Parses a frame document and re-validates it against the standard probes.
pub fn deserialize_frame(text: &str) -> Result<PSchauderFrame, FrameError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| FrameError::Parse {
        line: e.line(),
        field: "<document>".into(),
        message: e.to_string(),
    })?;
    if !doc.is_object() {
        return Err(parse_error(text, "<document>", "expected an object"));
    }
    let version = read_count(text, &doc, "version")?;
    if version as u64 != FRAME_DOCUMENT_VERSION {
        return Err(parse_error(text, "version", format!("unsupported version {version}")));
    }
    let p = doc
        .get("p")
        .ok_or_else(|| parse_error(text, "p", "missing"))?
        .as_f64()
        .ok_or_else(|| parse_error(text, "p", "expected a number"))?;
    let dim = read_count(text, &doc, "dim")?;
    let n = read_count(text, &doc, "n")?;
    if dim == 0 || n == 0 {
        return Err(parse_error(text, if dim == 0 { "dim" } else { "n" }, "must be positive"));
    }
    let label = match doc.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(other) => return Err(parse_error(text, "label", format!("expected a string, got {other}"))),
    };
    let f = read_matrix(text, &doc, "F", n, dim)?;
    let t = read_matrix(text, &doc, "T", dim, n)?;
    let frame = frame_from_operators(f, t, p, &ProbeSet::standard(dim)?)?;
    Ok(match label {
        Some(l) => frame.with_label(l),
        None => frame,
    })
}

/// A value in a flat report record.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Field {
    fn plain(&self) -> String {
        match self {
            Field::Real(x) => fmt_real(*x),
            Field::Int(i) => i.to_string(),
            Field::Bool(b) => b.to_string(),
            Field::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Field::Text(s) => serde_json::to_string(s).expect("string"),
            Field::Real(x) => fmt_real(*x),
            other => other.plain(),
        }
    }
}

/// Ordered key-value record; renders as text, JSON lines or CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    fields: Vec<(String, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn real(mut self, key: &str, x: f64) -> Self {
        self.fields.push((key.into(), Field::Real(x)));
        self
    }

    pub fn int(mut self, key: &str, i: i64) -> Self {
        self.fields.push((key.into(), Field::Int(i)));
        self
    }

    pub fn flag(mut self, key: &str, b: bool) -> Self {
        self.fields.push((key.into(), Field::Bool(b)));
        self
    }

    pub fn text(mut self, key: &str, s: impl Into<String>) -> Self {
        self.fields.push((key.into(), Field::Text(s.into())));
        self
    }

    pub fn extend(mut self, other: Record) -> Self {
        self.fields.extend(other.fields);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(k, _)| k.as_str())
    }

    /// `key = value` lines followed by a blank line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            let _ = writeln!(out, "{k} = {}", v.plain());
        }
        out.push('\n');
        out
    }

    pub fn to_json_line(&self) -> String {
        let body: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| format!("{}: {}", serde_json::to_string(k).expect("string"), v.json()))
            .collect();
        format!("{{{}}}\n", body.join(", "))
    }

    pub fn csv_header(&self) -> String {
        let keys: Vec<String> = self.fields.iter().map(|(k, _)| csv_escape(k)).collect();
        format!("{}\n", keys.join(","))
    }

    pub fn to_csv_row(&self) -> String {
        let vals: Vec<String> = self.fields.iter().map(|(_, v)| csv_escape(&v.plain())).collect();
        format!("{}\n", vals.join(","))
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Output flavour for record streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    JsonLines,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json-lines" => Ok(Format::JsonLines),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected text, json-lines or csv)")),
        }
    }
}

/// Renders a record stream. The CSV header is the union of all keys.
pub fn render_records(records: &[Record], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Text => records.iter().for_each(|r| out.push_str(&r.to_text())),
        Format::JsonLines => records.iter().for_each(|r| out.push_str(&r.to_json_line())),
        Format::Csv if records.is_empty() => {}
        Format::Csv => {
            // union of keys in order of first appearance; missing cells stay empty
            let mut keys: Vec<&str> = Vec::new();
            for k in records.iter().flat_map(Record::keys) {
                if !keys.contains(&k) {
                    keys.push(k);
                }
            }
            let header: Vec<String> = keys.iter().map(|k| csv_escape(k)).collect();
            out.push_str(&format!("{}\n", header.join(",")));
            for r in records {
                let row: Vec<String> =
                    keys.iter().map(|k| r.get(k).map(|v| csv_escape(&v.plain())).unwrap_or_default()).collect();
                out.push_str(&format!("{}\n", row.join(",")));
            }
        }
    }
    out
}
