mod common;

use std::collections::BTreeMap;

use common::{fixtures, json_file, run};

#[test]
fn golden_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let golden = fixtures().join("golden");
    let o = run(&["scan", golden.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = json_file(&out);
    let mut per_file: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for d in report["detections"].as_array().unwrap() {
        let name = d["file_path"].as_str().unwrap().rsplit('/').next().unwrap().to_string();
        per_file.entry(name).or_default().push(d["idiom"].as_str().unwrap().to_string());
    }
    let targeted = [
        ("list_comprehension_before.py", "List Comprehension"),
        ("set_comprehension_before.py", "Set Comprehension"),
        ("dict_comprehension_before.py", "Dict Comprehension"),
        ("chain_compare_before.py", "Chain Compare"),
        ("truth_value_test_before.py", "Truth Value Test"),
        ("for_else_before.py", "For Else"),
        ("assign_multi_targets_before.py", "Assign Multi Targets"),
        ("call_star_before.py", "Call Star"),
        ("for_multi_targets_before.py", "For Multi Targets"),
    ];
    for (file, kind) in targeted {
        assert_eq!(per_file[file].iter().filter(|k| *k == kind).count(), 1, "{file}");
    }
    // the prime check `n % x == 0` in the for-else fixtures is itself a truth value smell
    assert_eq!(per_file["for_else_before.py"], ["For Else", "Truth Value Test"]);
    assert_eq!(per_file["for_else_after.py"], ["Truth Value Test"]);
    assert_eq!(per_file.values().map(Vec::len).sum::<usize>(), 11);
    assert_eq!(report["scanned_files"], 18);
}

#[test]
fn empty_and_malformed_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["scan", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["scanned_files"], 0);
    assert_eq!(report["detections"].as_array().unwrap().len(), 0);

    std::fs::write(dir.path().join("bad.py"), "def f(:\n").unwrap();
    std::fs::write(dir.path().join("good.py"), "a = []\nfor e in xs:\n    a.append(e)\n").unwrap();
    let o = run(&["scan", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["scanned_files"], 2);
    assert_eq!(report["parse_errors"].as_array().unwrap().len(), 1);
    assert_eq!(report["detections"].as_array().unwrap().len(), 1);
    assert!(report["config"]["enabled"].is_array());

    let o = run(&["scan", "--fail-on-smell", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["scan", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("does not exist"));
    let o = run(&["scan", "--kinds", "Nope", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn loc_manifest_groups_by_first_component() {
    let dir = tempfile::tempdir().unwrap();
    for (p, text) in [("alpha/a.py", "x = 1\n\ny = 2\n"), ("alpha/sub/b.py", "z = 3\n"), ("beta/c.py", "# only\n")] {
        let path = dir.path().join(p);
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(path, text).unwrap();
    }
    let loc = dir.path().join("loc.json");
    let o = run(&["scan", dir.path().to_str().unwrap(), "--loc-output", loc.to_str().unwrap(), "-o", dir.path().join("r.json").to_str().unwrap()]);
    assert!(o.status.success());
    let m = json_file(&loc);
    let rows: Vec<(String, u64)> = m["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["project"].as_str().unwrap().to_string(), f["loc"].as_u64().unwrap()))
        .collect();
    assert_eq!(rows, [("alpha".to_string(), 2), ("alpha".to_string(), 1), ("beta".to_string(), 1)]);
}

#[test]
fn parallelism_does_not_change_output() {
    let corpus = fixtures().join("differential");
    let a = run(&["scan", "-j", "1", corpus.to_str().unwrap()]);
    let b = run(&["scan", "-j", "6", corpus.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}
