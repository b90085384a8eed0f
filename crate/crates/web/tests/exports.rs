use pysmell_web::{classify_json, compare_json, scan_json};
use serde_json::json;

#[test]
fn scan_reports_and_rewrites() {
    let src = "a = []\nfor e in range(4):\n    a.append(e)\nif n % 2 == 1:\n    x = 1\n";
    let v = scan_json(src).unwrap();
    let kinds: Vec<&str> = v["detections"].as_array().unwrap().iter().map(|d| d["idiom"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["List Comprehension", "Truth Value Test"]);
    assert_eq!(v["rewritten"], "a = [e for e in range(4)]\nif n % 2:\n    x = 1\n");
    assert!(scan_json("def f(:\n").is_err());
}

#[test]
fn overlapping_detections_rewrite_once() {
    // the for-else and the truth value test overlap; only the outer one is applied
    let src = "flag = True\nfor x in range(2, n):\n    if n % x == 0:\n        flag = False\n        break\nif flag:\n    print(n)\n";
    let v = scan_json(src).unwrap();
    assert_eq!(v["detections"].as_array().unwrap().len(), 2);
    let out = v["rewritten"].as_str().unwrap();
    assert!(out.contains("else:"));
    assert!(pysmell::parse_unit("o.py", out).is_ok());
}

#[test]
fn compare_separated_samples() {
    let v = compare_json("1 2 3", "10, 11, 12", 3).unwrap();
    assert_eq!(v["test"]["u"], 0.0);
    assert_eq!(v["test"]["rank_biserial"], -1.0);
    // exact two-sided p for complete separation of 3 and 3
    assert!((v["test"]["p_value"].as_f64().unwrap() - 0.1).abs() < 1e-12);
    assert_eq!(v["plot"]["histogram"]["counts_a"], json!([3, 0, 0]));
    assert_eq!(v["plot"]["histogram"]["counts_b"], json!([0, 0, 3]));
    assert!(compare_json("1 x", "2", 3).is_err());
    assert!(compare_json("", "2", 3).is_err());
}

#[test]
fn classify_keywords_and_scores() {
    let v = classify_json("from sklearn.datasets import load_iris\n", "", 0.9).unwrap();
    assert_eq!(v["stages"], json!(["Data Collection"]));
    let v = classify_json("pass\n", r#"{"Model Training": 0.9}"#, 0.9).unwrap();
    assert_eq!(v["stages"], json!(["Model Training"]));
    let v = classify_json("pass\n", r#"{"Model Training": 0.8999}"#, 0.9).unwrap();
    assert_eq!(v["stages"], json!(["Unknown"]));
    assert!(classify_json("pass\n", r#"{"Nope": 1}"#, 0.9).is_err());
}
