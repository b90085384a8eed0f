//! Detection records and scan reports in the RIdiom JSON layout.
//!
//! A record looks like
//!
//! ```json
//! {"file_path": "train.py", "cl": "", "me": "train", "idiom": "Truth Value Test",
//!  "compli_code": ["iter_num % save_freq == 0"], "simple_code": ["not iter_num % save_freq"],
//!  "lineno": [[[161, 11], [161, 36]]], "keyno": null}
//! ```
//!
//! Lines in `lineno` are 1-based and columns are 0-based byte offsets, end
//! exclusive.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::smells::{Detection, SmellKind};
use crate::syntax::{ParseError, ScopeInfo, SourceRange};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("record {index}: missing key {key:?}")]
    MissingKey { key: String, index: usize },
    #[error("record {index}: key {key:?} {problem}")]
    BadValue { key: String, index: usize, problem: String },
    #[error("record {index}: unknown idiom {found:?}; valid kinds are {valid}")]
    UnknownIdiom { index: usize, found: String, valid: String },
    #[error("report: missing key {0:?}")]
    MissingHeader(String),
    #[error("report: {0}")]
    BadHeader(String),
}

impl SchemaError {
    /// The offending key, when the error concerns one record field.
    pub fn key(&self) -> Option<&str> {
        match self {
            SchemaError::MissingKey { key, .. } | SchemaError::BadValue { key, .. } => Some(key),
            SchemaError::UnknownIdiom { .. } => Some("idiom"),
            SchemaError::MissingHeader(key) => Some(key),
            SchemaError::BadHeader(_) => None,
        }
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            SchemaError::MissingKey { index, .. }
            | SchemaError::BadValue { index, .. }
            | SchemaError::UnknownIdiom { index, .. } => Some(*index),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

/// A file that could not be parsed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseFailure {
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl From<&ParseError> for ParseFailure {
    fn from(e: &ParseError) -> Self {
        Self { path: e.path.clone(), line: e.line, col: e.col, message: e.message.clone() }
    }
}

/// Outcome of scanning a set of files.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub tool_version: String,
    /// Resolved configuration the scan ran with.
    pub config: Value,
    pub scanned_files: usize,
    pub parse_errors: Vec<ParseFailure>,
    pub detections: Vec<Detection>,
}

impl ScanReport {
    pub fn new(config: Value) -> Self {
        Self {
            tool_version: crate::TOOL_VERSION.to_string(),
            config,
            scanned_files: 0,
            parse_errors: Vec::new(),
            detections: Vec::new(),
        }
    }

    /// Sorts detections by file, position and kind, and errors by path.
    pub fn normalize(&mut self) {
        self.detections.sort_by(|a, b| {
            (a.file_path.as_str(), a.start(), a.kind.name()).cmp(&(b.file_path.as_str(), b.start(), b.kind.name()))
        });
        self.parse_errors.sort_by(|a, b| a.path.cmp(&b.path));
    }

    pub fn to_value(&self) -> Value {
        json!({
            "tool_version": self.tool_version,
            "config": self.config,
            "scanned_files": self.scanned_files,
            "parse_errors": self.parse_errors,
            "detections": self.detections.iter().map(write_detection).collect::<Vec<_>>(),
        })
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report values serialize");
        s.push('\n');
        s
    }

    pub fn from_value(value: &Value) -> Result<Self, ReportError> {
        // a bare array is a list of records without a header
        if let Value::Array(records) = value {
            let detections = read_detections(records)?;
            let mut files: Vec<&str> = detections.iter().map(|d| d.file_path.as_str()).collect();
            files.sort_unstable();
            files.dedup();
            return Ok(Self {
                tool_version: String::new(),
                config: Value::Null,
                scanned_files: files.len(),
                parse_errors: Vec::new(),
                detections,
            });
        }
        let obj = value.as_object().ok_or_else(|| SchemaError::BadHeader("expected an object or array".into()))?;
        let header = |key: &str| obj.get(key).ok_or_else(|| SchemaError::MissingHeader(key.to_string()));
        let tool_version = header("tool_version")?
            .as_str()
            .ok_or_else(|| SchemaError::BadHeader("tool_version must be a string".into()))?
            .to_string();
        let scanned_files = header("scanned_files")?
            .as_u64()
            .ok_or_else(|| SchemaError::BadHeader("scanned_files must be a count".into()))? as usize;
        let records = header("detections")?
            .as_array()
            .ok_or_else(|| SchemaError::BadHeader("detections must be an array".into()))?;
        let parse_errors = match obj.get("parse_errors") {
            None | Some(Value::Null) => Vec::new(),
            Some(v) => serde_json::from_value(v.clone())
                .map_err(|e| SchemaError::BadHeader(format!("parse_errors: {e}")))?,
        };
        Ok(Self {
            tool_version,
            config: obj.get("config").cloned().unwrap_or(Value::Null),
            scanned_files,
            parse_errors,
            detections: read_detections(records)?,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        Self::from_value(&serde_json::from_str(text)?)
    }
}

fn read_detections(records: &[Value]) -> Result<Vec<Detection>, SchemaError> {
    records.iter().enumerate().map(|(i, r)| read_detection(r, i)).collect()
}

/// One detection as a record with exactly the eight RIdiom keys.
pub fn write_detection(d: &Detection) -> Value {
    let lineno: Vec<Value> = d
        .ranges
        .iter()
        .map(|r| json!([[r.start_line, r.start_col], [r.end_line, r.end_col]]))
        .collect();
    let mut m = Map::new();
    m.insert("file_path".into(), json!(d.file_path));
    m.insert("cl".into(), json!(d.scope.class_name));
    m.insert("me".into(), json!(d.scope.function_name));
    m.insert("idiom".into(), json!(d.kind.name()));
    m.insert("compli_code".into(), json!(d.compli_code));
    m.insert("simple_code".into(), json!(d.simple_code));
    m.insert("lineno".into(), Value::Array(lineno));
    m.insert("keyno".into(), Value::Null);
    Value::Object(m)
}

/// Parses one record; `index` is its position, used in error messages.
pub fn read_detection(record: &Value, index: usize) -> Result<Detection, SchemaError> {
    let obj = record.as_object().ok_or_else(|| SchemaError::BadValue {
        key: String::new(),
        index,
        problem: "record is not an object".into(),
    })?;
    let field = |key: &str| obj.get(key).ok_or_else(|| SchemaError::MissingKey { key: key.into(), index });
    let bad = |key: &str, problem: &str| SchemaError::BadValue { key: key.into(), index, problem: problem.into() };
    let string = |key: &str| -> Result<String, SchemaError> {
        field(key)?.as_str().map(str::to_string).ok_or_else(|| bad(key, "must be a string"))
    };
    let lines = |key: &str| -> Result<Vec<String>, SchemaError> {
        let arr = field(key)?.as_array().ok_or_else(|| bad(key, "must be an array of strings"))?;
        arr.iter()
            .map(|v| v.as_str().map(str::to_string).ok_or_else(|| bad(key, "must be an array of strings")))
            .collect()
    };

    let idiom = string("idiom")?;
    let kind: SmellKind = idiom.parse().map_err(|_| SchemaError::UnknownIdiom {
        index,
        found: idiom.clone(),
        valid: SmellKind::ALL.map(|k| k.name()).join(", "),
    })?;
    let ranges = field("lineno")?
        .as_array()
        .ok_or_else(|| bad("lineno", "must be a list of [[line, col], [line, col]] pairs"))?
        .iter()
        .map(|r| parse_range(r).ok_or_else(|| bad("lineno", "must be a list of [[line, col], [line, col]] pairs")))
        .collect::<Result<Vec<_>, _>>()?;
    if ranges.is_empty() {
        return Err(bad("lineno", "must not be empty"));
    }
    field("keyno")?;
    Ok(Detection {
        file_path: string("file_path")?,
        scope: ScopeInfo::new(string("cl")?, string("me")?),
        kind,
        compli_code: lines("compli_code")?,
        simple_code: lines("simple_code")?,
        ranges,
    })
}

fn parse_range(v: &Value) -> Option<SourceRange> {
    let pair = |p: &Value| -> Option<(u32, u32)> {
        let [a, b] = p.as_array()?.as_slice() else { return None };
        Some((u32::try_from(a.as_u64()?).ok()?, u32::try_from(b.as_u64()?).ok()?))
    };
    let [start, end] = v.as_array()?.as_slice() else { return None };
    let ((sl, sc), (el, ec)) = (pair(start)?, pair(end)?);
    ((sl, sc) <= (el, ec)).then(|| SourceRange::new(sl, sc, el, ec))
}

pub fn read_report(path: impl AsRef<Path>) -> Result<ScanReport, ReportError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| ReportError::Io { path: path.display().to_string(), source })?;
    ScanReport::from_json(&text)
}

pub fn write_report(path: impl AsRef<Path>, report: &ScanReport) -> Result<(), ReportError> {
    let path = path.as_ref();
    std::fs::write(path, report.to_json()).map_err(|source| ReportError::Io { path: path.display().to_string(), source })
}
