use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use pysmell::stages::{
    classify_file, evaluate_classifier, mono_label_subset, smell_stage_distribution, KeywordMap, LabelMode,
    Provenance, StageAssignment, StageConfig, StageLabel, DEFAULT_THRESHOLD,
};
use pysmell::{Detection, ScopeInfo, SmellKind, SourceRange};
use serde_json::Value;

use StageLabel::*;

struct Case {
    file: String,
    text: String,
    scores: Option<BTreeMap<StageLabel, f64>>,
    expected: BTreeSet<StageLabel>,
}

fn cases() -> Vec<Case> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/stages/classifier_cases.json");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| Case {
            file: c["file"].as_str().unwrap().into(),
            text: c["text"].as_str().unwrap().into(),
            scores: serde_json::from_value(c["scores"].clone()).unwrap(),
            expected: serde_json::from_value(c["expected"].clone()).unwrap(),
        })
        .collect()
}

fn keywords() -> KeywordMap {
    StageConfig::default().keyword_map().unwrap()
}

fn classify_all(threshold: f64, keywords: &KeywordMap) -> Vec<StageAssignment> {
    cases()
        .iter()
        .map(|c| classify_file(&c.file, &c.text, keywords, c.scores.as_ref(), threshold).unwrap())
        .collect()
}

#[test]
fn fixture_labels() {
    let cases = cases();
    assert_eq!(cases.len(), 25);
    let kw = keywords();
    for c in &cases {
        let a = classify_file(&c.file, &c.text, &kw, c.scores.as_ref(), DEFAULT_THRESHOLD).unwrap();
        assert_eq!(a.stages, c.expected, "{}", c.file);
        if a.stages.contains(&Unknown) {
            assert_eq!(a.stages.len(), 1);
        }
    }
}

#[test]
fn provenance_tags() {
    let kw = keywords();
    let by_file: BTreeMap<String, StageAssignment> =
        classify_all(DEFAULT_THRESHOLD, &kw).into_iter().map(|a| (a.file.clone(), a)).collect();
    assert_eq!(by_file["boundary_at.py"].provenance[&ModelTraining], Provenance::Semantic { score: 0.9 });
    assert!(matches!(by_file["low_score_keyword.py"].provenance[&DataCollection], Provenance::Keyword { .. }));
    assert!(matches!(by_file["high_score_keyword.py"].provenance[&DataCollection], Provenance::Semantic { .. }));
    assert_eq!(by_file["empty.py"].provenance[&Unknown], Provenance::Unknown);
}

#[test]
fn threshold_monotonicity() {
    let kw = keywords();
    let thresholds = [0.5, 0.8999, 0.9, 0.91, 0.95, 1.0];
    let semantic = |a: &StageAssignment| -> BTreeSet<StageLabel> {
        a.provenance.iter().filter(|(_, p)| matches!(p, Provenance::Semantic { .. })).map(|(s, _)| *s).collect()
    };
    for w in thresholds.windows(2) {
        let lo = classify_all(w[0], &kw);
        let hi = classify_all(w[1], &kw);
        for (a, b) in lo.iter().zip(&hi) {
            assert!(semantic(b).is_subset(&semantic(a)), "{}", a.file);
        }
    }
}

#[test]
fn adding_keywords_never_removes_stages() {
    let base = keywords();
    let mut raw = base.raw();
    raw.entry(ModelTraining).or_default().push("print".into());
    raw.entry(ModelDeployment).or_default().push("os\\.".into());
    let extended = KeywordMap::new(&raw).unwrap();
    for (a, b) in classify_all(0.9, &base).iter().zip(classify_all(0.9, &extended).iter()) {
        let real = |x: &StageAssignment| x.stages.iter().filter(|s| **s != Unknown).copied().collect::<BTreeSet<_>>();
        assert!(real(a).is_subset(&real(b)), "{}", a.file);
    }
}

#[test]
fn mono_subset_of_fixture() {
    let all = classify_all(DEFAULT_THRESHOLD, &keywords());
    let mono = mono_label_subset(&all);
    let cases = cases();
    let expected: BTreeSet<&str> = cases
        .iter()
        .filter(|c| c.expected.len() == 1 && !c.expected.contains(&Unknown))
        .map(|c| c.file.as_str())
        .collect();
    assert_eq!(mono.iter().map(|a| a.file.as_str()).collect::<BTreeSet<_>>(), expected);
    assert_eq!(mono_label_subset(&mono), mono);
}

fn assign(file: &str, stages: &[StageLabel]) -> StageAssignment {
    StageAssignment { file: file.into(), stages: stages.iter().copied().collect(), provenance: BTreeMap::new() }
}

fn det(file: &str, kind: SmellKind) -> Detection {
    Detection {
        file_path: file.into(),
        scope: ScopeInfo::default(),
        kind,
        compli_code: vec![],
        simple_code: vec![],
        ranges: vec![SourceRange::new(1, 0, 1, 1)],
    }
}

#[test]
fn mono_subset_hand_selected() {
    let files = vec![
        assign("a", &[DataCollection]),
        assign("b", &[DataCollection, ModelTraining]),
        assign("c", &[Unknown]),
        assign("d", &[ModelEvaluation]),
        assign("e", &[ModelTraining, ModelEvaluation, ModelDeployment]),
        assign("f", &[ModelDeployment]),
        assign("g", &[Unknown]),
        assign("h", &[DataProcessing, DataCollection]),
        assign("i", &[DataProcessing]),
        assign("j", &[ModelTraining]),
    ];
    let mono: Vec<String> = mono_label_subset(&files).into_iter().map(|a| a.file).collect();
    assert_eq!(mono, ["a", "d", "f", "i", "j"]);
}

#[test]
fn distribution_hand_tally() {
    let files = vec![
        assign("f1", &[DataCollection]),
        assign("f2", &[DataCollection, DataProcessing]),
        assign("f3", &[DataProcessing]),
        assign("f4", &[Unknown]),
    ];
    let dets = vec![
        det("f1", SmellKind::ListComprehension),
        det("f1", SmellKind::ChainCompare),
        det("f1", SmellKind::ChainCompare),
        det("f2", SmellKind::ListComprehension),
        det("f4", SmellKind::CallStar),
    ];
    let cell = |d: &pysmell::stages::Distribution, s: StageLabel, k: SmellKind| {
        d.rows.iter().find(|r| r.stage == s).unwrap().percent[&k]
    };
    let multi = smell_stage_distribution(&files, &dets, LabelMode::Multi).unwrap();
    assert_eq!(cell(&multi, DataCollection, SmellKind::ListComprehension), 100.0);
    assert_eq!(cell(&multi, DataCollection, SmellKind::ChainCompare), 50.0);
    assert_eq!(cell(&multi, DataProcessing, SmellKind::ListComprehension), 50.0);
    assert_eq!(cell(&multi, DataProcessing, SmellKind::ChainCompare), 0.0);
    assert_eq!(cell(&multi, Unknown, SmellKind::CallStar), 100.0);
    assert_eq!(cell(&multi, ModelTraining, SmellKind::CallStar), 0.0);

    let mono = smell_stage_distribution(&files, &dets, LabelMode::Mono).unwrap();
    assert_eq!(cell(&mono, DataCollection, SmellKind::ChainCompare), 100.0);
    assert_eq!(cell(&mono, DataProcessing, SmellKind::ListComprehension), 0.0);
    assert_eq!(cell(&mono, Unknown, SmellKind::CallStar), 0.0);
    // the mono matrix is the multi matrix of the mono files
    let mono_files = mono_label_subset(&files);
    let mono_dets: Vec<Detection> =
        dets.iter().filter(|d| mono_files.iter().any(|a| a.file == d.file_path)).cloned().collect();
    let rebuilt = smell_stage_distribution(&mono_files, &mono_dets, LabelMode::Multi).unwrap();
    assert_eq!(rebuilt.rows, mono.rows);
    for row in multi.rows.iter().chain(&mono.rows) {
        assert!(row.percent.values().all(|p| (0.0..=100.0).contains(p)));
    }

    let single = smell_stage_distribution(&[assign("x", &[DataCollection])], &[det("x", SmellKind::ListComprehension)], LabelMode::Multi).unwrap();
    assert_eq!(cell(&single, DataCollection, SmellKind::ListComprehension), 100.0);
    let empty = smell_stage_distribution(&files, &[], LabelMode::Multi).unwrap();
    assert!(empty.rows.iter().all(|r| r.percent.values().all(|p| *p == 0.0)));
    assert!(smell_stage_distribution(&files, &[det("zz", SmellKind::CallStar)], LabelMode::Multi).is_err());
}

#[test]
fn confusion_fixture() {
    let mut truth = Vec::new();
    let mut pred = Vec::new();
    for i in 0..20 {
        let f = format!("f{i}");
        let mut t = Vec::new();
        let mut p = Vec::new();
        if i <= 8 {
            t.push(ModelTraining);
        }
        if i <= 5 || i == 9 || i == 10 {
            p.push(ModelTraining);
        }
        if (10..=13).contains(&i) {
            t.push(DataCollection);
        }
        if (10..=14).contains(&i) {
            p.push(DataCollection);
        }
        let fill = |v: &mut Vec<StageLabel>| if v.is_empty() { v.push(Unknown) };
        fill(&mut t);
        fill(&mut p);
        truth.push(assign(&f, &t));
        pred.push(assign(&f, &p));
    }
    let e = evaluate_classifier(&pred, &truth).unwrap();
    // tp 6, fp 2, fn 3, tn 9
    let mt = e.per_stage[&ModelTraining];
    assert_eq!(mt.precision, 0.75);
    assert_eq!(mt.recall, 6.0 / 9.0);
    assert!((mt.f1 - 12.0 / 17.0).abs() < 1e-12);
    assert_eq!(mt.accuracy, 0.75);
    // tp 4, fp 1, fn 0, tn 15
    let dc = e.per_stage[&DataCollection];
    assert_eq!(dc.precision, 0.8);
    assert_eq!(dc.recall, 1.0);
    assert!((dc.f1 - 8.0 / 9.0).abs() < 1e-12);
    assert_eq!(dc.accuracy, 0.95);
    let mean_p = (0.75 + 0.8 + 3.0) / 5.0;
    assert!((e.macro_average.precision - mean_p).abs() < 1e-12);
}
