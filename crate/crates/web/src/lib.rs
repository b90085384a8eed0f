//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export takes plain strings and returns a JSON string, so the page
//! needs no generated TypeScript types. The `*_json` functions hold the
//! logic and are what the native tests call.

use std::collections::BTreeMap;

use pysmell::report::write_detection;
use pysmell::smells::{all_kinds, apply};
use pysmell::stages::{classify_file_with, StageConfig, StageLabel, DEFAULT_THRESHOLD};
use pysmell::stats::{mann_whitney_u, plot_data};
use pysmell::{parse_unit, scan_unit, Detection, SmellConfig};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Detections in `source` and the text with every non-overlapping rewrite applied.
pub fn scan_json(source: &str) -> Result<Value, String> {
    let unit = parse_unit("snippet.py", source).map_err(|e| e.to_string())?;
    let detections = scan_unit(&unit, &all_kinds(), &SmellConfig::default());
    Ok(json!({
        "detections": detections.iter().map(write_detection).collect::<Vec<_>>(),
        "rewritten": rewrite_all(source, &detections),
    }))
}

fn rewrite_all(source: &str, detections: &[Detection]) -> String {
    let mut chosen: Vec<&Detection> = Vec::new();
    for d in detections {
        let Some(span) = d.span() else { continue };
        if chosen.last().and_then(|c| c.span()).is_some_and(|prev| span.start() < prev.end()) {
            continue;
        }
        chosen.push(d);
    }
    // back to front so earlier positions stay valid
    chosen.iter().rev().fold(source.to_string(), |text, d| apply(&text, d).unwrap_or(text))
}

fn parse_sample(text: &str) -> Result<Vec<f64>, String> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect()
}

/// Mann-Whitney test of two whitespace- or comma-separated samples, with
/// boxplot summaries and histogram counts.
pub fn compare_json(sample_a: &str, sample_b: &str, bins: usize) -> Result<Value, String> {
    let a = parse_sample(sample_a)?;
    let b = parse_sample(sample_b)?;
    let test = mann_whitney_u(&a, &b).map_err(|e| e.to_string())?;
    let plot = plot_data(&a, &b, bins).map_err(|e| e.to_string())?;
    Ok(json!({ "test": test, "plot": plot }))
}

/// Stage assignment of `text`. `scores` is an optional JSON object of
/// stage name to score standing in for a semantic scorer.
pub fn classify_json(text: &str, scores: &str, threshold: f64) -> Result<Value, String> {
    let config = StageConfig::default();
    let keywords = config.keyword_map().map_err(|e| e.to_string())?;
    let scores: Option<BTreeMap<StageLabel, f64>> = if scores.trim().is_empty() {
        None
    } else {
        Some(serde_json::from_str(scores).map_err(|e| format!("scores: {e}"))?)
    };
    let threshold = if threshold.is_finite() && threshold > 0.0 { threshold } else { DEFAULT_THRESHOLD };
    let a = classify_file_with("snippet.py", text, &keywords, scores.as_ref(), threshold, config.strict)
        .map_err(|e| e.to_string())?;
    serde_json::to_value(a).map_err(|e| e.to_string())
}

fn to_js(result: Result<Value, String>) -> Result<String, JsValue> {
    result.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn scan(source: &str) -> Result<String, JsValue> {
    to_js(scan_json(source))
}

#[wasm_bindgen]
pub fn compare(sample_a: &str, sample_b: &str, bins: usize) -> Result<String, JsValue> {
    to_js(compare_json(sample_a, sample_b, bins))
}

#[wasm_bindgen]
pub fn classify(text: &str, scores: &str, threshold: f64) -> Result<String, JsValue> {
    to_js(classify_json(text, scores, threshold))
}
