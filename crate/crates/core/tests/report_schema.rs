use std::path::PathBuf;

use pysmell::report::{read_detection, write_detection};
use pysmell::{parse_unit, scan_unit, ScanReport, SmellConfig, SmellKind};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/record").join(name)
}

fn record() -> Value {
    serde_json::from_str(&std::fs::read_to_string(fixture("record.json")).unwrap()).unwrap()
}

#[test]
fn record_round_trip_is_identity() {
    let rec = record();
    let d = read_detection(&rec, 0).unwrap();
    assert_eq!(write_detection(&d), rec);
    let keys: Vec<&str> = rec.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 8);
    let lineno = &rec["lineno"][0];
    assert_eq!(lineno[0][0], 161);
    assert_eq!(lineno[1][1], 36);
}

#[test]
fn scanning_the_source_reproduces_the_record() {
    let text = std::fs::read_to_string(fixture("train.py")).unwrap();
    let unit = parse_unit("../ai_projects/CircuitNet/routability_ir_drop_prediction/train.py", &text).unwrap();
    let found = scan_unit(&unit, &[SmellKind::TruthValueTest].into(), &SmellConfig::default());
    assert_eq!(found.len(), 1);
    assert_eq!(write_detection(&found[0]), record());
}

#[test]
fn report_round_trip() {
    let mut report = ScanReport::new(serde_json::json!({"k": 1}));
    report.scanned_files = 3;
    report.detections.push(read_detection(&record(), 0).unwrap());
    let text = report.to_json();
    let back = ScanReport::from_json(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.to_json(), text);
}

#[test]
fn schema_errors_name_the_key() {
    let mut rec = record();
    rec.as_object_mut().unwrap().remove("lineno");
    let err = read_detection(&rec, 4).unwrap_err();
    assert_eq!(err.key(), Some("lineno"));
    assert_eq!(err.index(), Some(4));
    let mut rec = record();
    rec["idiom"] = "Unnecessary Iteration".into();
    assert!(read_detection(&rec, 0).is_err());
}
