//! ML pipeline stage labels for source files: semantic scores at or above a
//! threshold win, keyword patterns fill in the rest, and files with neither
//! are unknown.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use regex::Regex;
use rustpython_ast::{self as ast, Ranged};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::smells::{Detection, SmellKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageLabel {
    DataCollection,
    DataProcessing,
    ModelTraining,
    ModelEvaluation,
    ModelDeployment,
    Unknown,
}

impl StageLabel {
    /// The five real stages in pipeline order.
    pub const STAGES: [StageLabel; 5] = [
        StageLabel::DataCollection,
        StageLabel::DataProcessing,
        StageLabel::ModelTraining,
        StageLabel::ModelEvaluation,
        StageLabel::ModelDeployment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StageLabel::DataCollection => "Data Collection",
            StageLabel::DataProcessing => "Data Processing",
            StageLabel::ModelTraining => "Model Training",
            StageLabel::ModelEvaluation => "Model Evaluation",
            StageLabel::ModelDeployment => "Model Deployment",
            StageLabel::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for StageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StageLabel {
    type Err = StageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StageLabel::STAGES
            .into_iter()
            .chain([StageLabel::Unknown])
            .find(|l| l.name() == s)
            .ok_or_else(|| StageError::UnknownStage(s.to_string()))
    }
}

impl Serialize for StageLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for StageLabel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StageError {
    #[error("unknown stage {0:?}")]
    UnknownStage(String),
    #[error("score for {stage} is {value}, outside [0, 1]")]
    InvalidScore { stage: StageLabel, value: f64 },
    #[error("threshold {0} is outside (0, 1]")]
    InvalidThreshold(f64),
    #[error("keyword pattern {pattern:?} for {stage} does not compile: {message}")]
    BadPattern { stage: StageLabel, pattern: String, message: String },
    #[error("the Unknown stage cannot have keywords")]
    UnknownHasKeywords,
    #[error("no stage assignment for {0}")]
    UnassignedFile(String),
    #[error("predicted and reference files differ: {0}")]
    FileSetMismatch(String),
    #[error("invalid stage config: {0}")]
    Config(String),
}

/// Patterns per stage, matched as regular expressions.
#[derive(Debug, Clone)]
pub struct KeywordMap {
    patterns: BTreeMap<StageLabel, Vec<(String, Regex)>>,
}

impl KeywordMap {
    pub fn new(raw: &BTreeMap<StageLabel, Vec<String>>) -> Result<Self, StageError> {
        let mut patterns = BTreeMap::new();
        for (&stage, list) in raw {
            if stage == StageLabel::Unknown {
                if list.is_empty() {
                    continue;
                }
                return Err(StageError::UnknownHasKeywords);
            }
            let compiled = list
                .iter()
                .map(|p| {
                    Regex::new(p).map(|r| (p.clone(), r)).map_err(|e| StageError::BadPattern {
                        stage,
                        pattern: p.clone(),
                        message: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            patterns.insert(stage, compiled);
        }
        Ok(Self { patterns })
    }

    pub fn raw(&self) -> BTreeMap<StageLabel, Vec<String>> {
        self.patterns
            .iter()
            .map(|(&s, list)| (s, list.iter().map(|(p, _)| p.clone()).collect()))
            .collect()
    }

    /// The first pattern of `stage` found in `text`.
    pub fn first_match(&self, stage: StageLabel, text: &str) -> Option<&str> {
        self.patterns.get(&stage)?.iter().find(|(_, r)| r.is_match(text)).map(|(p, _)| p.as_str())
    }
}

/// Natural-language description of each real stage, in pipeline order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageDescriptions {
    pub entries: Vec<(StageLabel, String)>,
}

impl StageDescriptions {
    /// The zero-shot prompt: the prefix, a comma, then every
    /// `Stage: description` pair concatenated.
    pub fn prompt(&self) -> String {
        let body: String = self.entries.iter().map(|(s, d)| format!("{}: {}", s.name(), d)).collect();
        format!("This code is about:, {body}")
    }

    pub fn request(&self, file_text: &str) -> ScoreRequest {
        ScoreRequest {
            file_text: file_text.to_string(),
            stages: self
                .entries
                .iter()
                .map(|(s, d)| StageSpec { name: s.name().to_string(), description: d.clone() })
                .collect(),
        }
    }
}

/// On-disk keyword and description configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageConfig {
    pub keywords: BTreeMap<StageLabel, Vec<String>>,
    pub descriptions: BTreeMap<StageLabel, String>,
    /// Match keywords only in import statements and called names.
    #[serde(default)]
    pub strict: bool,
}

const DEFAULT_CONFIG: &str = include_str!("stage_keywords.json");

impl Default for StageConfig {
    fn default() -> Self {
        serde_json::from_str(DEFAULT_CONFIG).expect("bundled stage config is valid")
    }
}

impl StageConfig {
    pub fn from_json(text: &str) -> Result<Self, StageError> {
        serde_json::from_str(text).map_err(|e| StageError::Config(e.to_string()))
    }

    pub fn keyword_map(&self) -> Result<KeywordMap, StageError> {
        KeywordMap::new(&self.keywords)
    }

    pub fn stage_descriptions(&self) -> StageDescriptions {
        StageDescriptions {
            entries: StageLabel::STAGES
                .iter()
                .filter_map(|s| self.descriptions.get(s).map(|d| (*s, d.clone())))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum Provenance {
    Semantic { score: f64 },
    Keyword { pattern: String },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageAssignment {
    pub file: String,
    pub stages: BTreeSet<StageLabel>,
    pub provenance: BTreeMap<StageLabel, Provenance>,
}

impl StageAssignment {
    pub fn is_mono(&self) -> bool {
        self.stages.len() == 1 && !self.stages.contains(&StageLabel::Unknown)
    }
}

pub const DEFAULT_THRESHOLD: f64 = 0.9;

/// Text the keywords are matched against: the whole file, or in strict
/// mode only imported module names and the callee of every call.
pub fn keyword_haystack(text: &str, strict: bool) -> String {
    if !strict {
        return text.to_string();
    }
    let Ok(unit) = crate::syntax::parse_unit("<stage>", text) else { return String::new() };
    let mut parts: Vec<String> = Vec::new();
    for stmt in unit.suite().iter() {
        collect_imports(stmt, &mut parts);
    }
    crate::syntax::walk::visit_stmts_exprs(unit.suite(), &mut |e| {
        if let ast::Expr::Call(c) = e {
            parts.push(unit.slice(c.func.range()).to_string());
        }
        true
    });
    parts.join("\n")
}

fn collect_imports(stmt: &ast::Stmt, out: &mut Vec<String>) {
    match stmt {
        ast::Stmt::Import(s) => out.extend(s.names.iter().map(|a| a.name.to_string())),
        ast::Stmt::ImportFrom(s) => {
            let module = s.module.as_ref().map(|m| m.to_string()).unwrap_or_default();
            out.push(module.clone());
            out.extend(s.names.iter().map(|a| format!("{module}.{}", a.name)));
            out.extend(s.names.iter().map(|a| a.name.to_string()));
        }
        _ => {}
    }
    for block in crate::syntax::walk::stmt_blocks(stmt) {
        for s in block {
            collect_imports(s, out);
        }
    }
}

/// Stage labels for one file.
pub fn classify_file(
    file: &str,
    text: &str,
    keywords: &KeywordMap,
    scores: Option<&BTreeMap<StageLabel, f64>>,
    threshold: f64,
) -> Result<StageAssignment, StageError> {
    classify_file_with(file, text, keywords, scores, threshold, false)
}

pub fn classify_file_with(
    file: &str,
    text: &str,
    keywords: &KeywordMap,
    scores: Option<&BTreeMap<StageLabel, f64>>,
    threshold: f64,
    strict: bool,
) -> Result<StageAssignment, StageError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(StageError::InvalidThreshold(threshold));
    }
    if let Some(scores) = scores {
        for (&stage, &value) in scores {
            if !(0.0..=1.0).contains(&value) {
                return Err(StageError::InvalidScore { stage, value });
            }
        }
    }
    let haystack = keyword_haystack(text, strict);
    let mut provenance = BTreeMap::new();
    for stage in StageLabel::STAGES {
        let score = scores.and_then(|s| s.get(&stage)).copied();
        match score {
            Some(score) if score >= threshold => {
                provenance.insert(stage, Provenance::Semantic { score });
            }
            // a low score falls back to keywords for that stage alone
            _ => {
                if let Some(pattern) = keywords.first_match(stage, &haystack) {
                    provenance.insert(stage, Provenance::Keyword { pattern: pattern.to_string() });
                }
            }
        }
    }
    if provenance.is_empty() {
        provenance.insert(StageLabel::Unknown, Provenance::Unknown);
    }
    Ok(StageAssignment { file: file.to_string(), stages: provenance.keys().copied().collect(), provenance })
}

/// Files with exactly one real stage.
pub fn mono_label_subset(assignments: &[StageAssignment]) -> Vec<StageAssignment> {
    assignments.iter().filter(|a| a.is_mono()).cloned().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    Multi,
    Mono,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub stage: StageLabel,
    pub files: usize,
    /// Percentage of the stage's files with at least one detection of each kind.
    pub percent: BTreeMap<SmellKind, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub mode: LabelMode,
    pub rows: Vec<DistributionRow>,
}

pub fn smell_stage_distribution(
    assignments: &[StageAssignment],
    detections: &[Detection],
    mode: LabelMode,
) -> Result<Distribution, StageError> {
    let by_file: BTreeMap<&str, &StageAssignment> = assignments.iter().map(|a| (a.file.as_str(), a)).collect();
    let mut kinds_by_file: BTreeMap<&str, BTreeSet<SmellKind>> = BTreeMap::new();
    for d in detections {
        if !by_file.contains_key(d.file_path.as_str()) {
            return Err(StageError::UnassignedFile(d.file_path.clone()));
        }
        kinds_by_file.entry(&d.file_path).or_default().insert(d.kind);
    }
    let included: Vec<&StageAssignment> = match mode {
        LabelMode::Multi => assignments.iter().collect(),
        LabelMode::Mono => assignments.iter().filter(|a| a.is_mono()).collect(),
    };
    let rows = StageLabel::STAGES
        .into_iter()
        .chain([StageLabel::Unknown])
        .map(|stage| {
            let files: Vec<&str> = included.iter().filter(|a| a.stages.contains(&stage)).map(|a| a.file.as_str()).collect();
            let percent = SmellKind::ALL
                .iter()
                .map(|&k| {
                    let hits = files
                        .iter()
                        .filter(|f| kinds_by_file.get(*f).is_some_and(|ks| ks.contains(&k)))
                        .count();
                    let pct = if files.is_empty() { 0.0 } else { 100.0 * hits as f64 / files.len() as f64 };
                    (k, pct)
                })
                .collect();
            DistributionRow { stage, files: files.len(), percent }
        })
        .collect();
    Ok(Distribution { mode, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub per_stage: BTreeMap<StageLabel, BinaryMetrics>,
    /// Unweighted mean over the five stages.
    pub macro_average: BinaryMetrics,
}

/// One-vs-rest metrics per real stage against reference labels.
pub fn evaluate_classifier(predicted: &[StageAssignment], truth: &[StageAssignment]) -> Result<Evaluation, StageError> {
    let pred: BTreeMap<&str, &StageAssignment> = predicted.iter().map(|a| (a.file.as_str(), a)).collect();
    let gold: BTreeMap<&str, &StageAssignment> = truth.iter().map(|a| (a.file.as_str(), a)).collect();
    if pred.len() != predicted.len() || gold.len() != truth.len() {
        return Err(StageError::FileSetMismatch("duplicate file".into()));
    }
    if let Some(f) = pred.keys().find(|f| !gold.contains_key(*f)).or_else(|| gold.keys().find(|f| !pred.contains_key(*f))) {
        return Err(StageError::FileSetMismatch(f.to_string()));
    }
    let n = gold.len().max(1) as f64;
    let mut per_stage = BTreeMap::new();
    for stage in StageLabel::STAGES {
        let (mut tp, mut fp, mut fne, mut tn) = (0usize, 0usize, 0usize, 0usize);
        for (file, g) in &gold {
            match (pred[file].stages.contains(&stage), g.stages.contains(&stage)) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fne += 1,
                (false, false) => tn += 1,
            }
        }
        let ratio = |num: usize, den: usize, other_errors: usize| {
            if den == 0 {
                if other_errors == 0 { 1.0 } else { 0.0 }
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(tp, tp + fp, fne);
        let recall = ratio(tp, tp + fne, fp);
        let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
        let accuracy = (tp + tn) as f64 / n;
        per_stage.insert(stage, BinaryMetrics { precision, recall, f1, accuracy });
    }
    let avg = |f: fn(&BinaryMetrics) -> f64| per_stage.values().map(f).sum::<f64>() / per_stage.len() as f64;
    let macro_average = BinaryMetrics {
        precision: avg(|m| m.precision),
        recall: avg(|m| m.recall),
        f1: avg(|m| m.f1),
        accuracy: avg(|m| m.accuracy),
    };
    Ok(Evaluation { per_stage, macro_average })
}

/// One stage offered to the scoring service.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSpec {
    pub name: String,
    pub description: String,
}

/// Body of a scoring request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub file_text: String,
    pub stages: Vec<StageSpec>,
}

/// Body of a scoring response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub scores: BTreeMap<String, f64>,
    pub model_id: String,
    /// Set when the service cut the file to fit its model window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncated: Option<bool>,
}

impl ScoreResponse {
    /// Checks the response covers every requested stage with a score in
    /// [0, 1] and converts it to labels.
    pub fn validate(&self, request: &ScoreRequest) -> Result<BTreeMap<StageLabel, f64>, StageError> {
        let mut out = BTreeMap::new();
        for spec in &request.stages {
            let stage: StageLabel = spec.name.parse()?;
            let value = *self
                .scores
                .get(&spec.name)
                .ok_or_else(|| StageError::Config(format!("response lacks a score for {}", spec.name)))?;
            if !(0.0..=1.0).contains(&value) {
                return Err(StageError::InvalidScore { stage, value });
            }
            out.insert(stage, value);
        }
        Ok(out)
    }
}

/// Something that can produce semantic stage scores for a file.
pub trait ScoreSource {
    /// `Ok(None)` means no scores are available and keywords alone decide.
    fn scores(&mut self, text: &str) -> Result<Option<BTreeMap<StageLabel, f64>>, String>;
}

/// Keyword-only mode.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullScorer;

impl ScoreSource for NullScorer {
    fn scores(&mut self, _text: &str) -> Result<Option<BTreeMap<StageLabel, f64>>, String> {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keywords() -> KeywordMap {
        StageConfig::default().keyword_map().unwrap()
    }

    #[test]
    fn keyword_fallback() {
        let a = classify_file("a.py", "x = StandardScaler()", &keywords(), None, DEFAULT_THRESHOLD).unwrap();
        assert_eq!(a.stages, BTreeSet::from([StageLabel::DataProcessing]));
        assert_eq!(a.provenance[&StageLabel::DataProcessing], Provenance::Keyword { pattern: "StandardScaler".into() });
    }

    #[test]
    fn semantic_threshold() {
        let scores = BTreeMap::from([(StageLabel::ModelTraining, 0.95)]);
        let a = classify_file("a.py", "pass", &keywords(), Some(&scores), DEFAULT_THRESHOLD).unwrap();
        assert_eq!(a.stages, BTreeSet::from([StageLabel::ModelTraining]));
        let at = BTreeMap::from([(StageLabel::ModelTraining, 0.9)]);
        assert!(classify_file("a.py", "", &keywords(), Some(&at), 0.9).unwrap().stages.contains(&StageLabel::ModelTraining));
        let below = BTreeMap::from([(StageLabel::ModelTraining, 0.8999)]);
        let a = classify_file("a.py", "", &keywords(), Some(&below), 0.9).unwrap();
        assert_eq!(a.stages, BTreeSet::from([StageLabel::Unknown]));
    }

    #[test]
    fn unknown_when_nothing_matches() {
        let a = classify_file("a.py", "", &keywords(), None, DEFAULT_THRESHOLD).unwrap();
        assert_eq!(a.stages, BTreeSet::from([StageLabel::Unknown]));
    }

    #[test]
    fn invalid_inputs() {
        let bad = BTreeMap::from([(StageLabel::ModelTraining, 1.5)]);
        assert!(matches!(
            classify_file("a.py", "", &keywords(), Some(&bad), 0.9),
            Err(StageError::InvalidScore { .. })
        ));
        assert!(classify_file("a.py", "", &keywords(), None, 0.0).is_err());
        let raw = BTreeMap::from([(StageLabel::Unknown, vec!["x".to_string()])]);
        assert!(matches!(KeywordMap::new(&raw), Err(StageError::UnknownHasKeywords)));
        let raw = BTreeMap::from([(StageLabel::ModelTraining, vec!["(".to_string()])]);
        assert!(matches!(KeywordMap::new(&raw), Err(StageError::BadPattern { .. })));
    }

    #[test]
    fn prompt_layout() {
        let d = StageDescriptions {
            entries: vec![
                (StageLabel::DataCollection, "gathering.".into()),
                (StageLabel::DataProcessing, "cleaning.".into()),
            ],
        };
        assert_eq!(d.prompt(), "This code is about:, Data Collection: gathering.Data Processing: cleaning.");
        assert_eq!(StageConfig::default().stage_descriptions().entries.len(), 5);
    }

    #[test]
    fn strict_mode_ignores_comments() {
        let text = "# load_iris is great\nimport numpy\n";
        let k = keywords();
        assert!(classify_file_with("a", text, &k, None, 0.9, false).unwrap().stages.contains(&StageLabel::DataCollection));
        assert_eq!(
            classify_file_with("a", text, &k, None, 0.9, true).unwrap().stages,
            BTreeSet::from([StageLabel::Unknown])
        );
        let text = "from sklearn.datasets import load_iris\nX = load_iris()\n";
        assert!(classify_file_with("a", text, &k, None, 0.9, true).unwrap().stages.contains(&StageLabel::DataCollection));
    }

    #[test]
    fn mono_subset() {
        let mk = |f: &str, s: &[StageLabel]| StageAssignment {
            file: f.into(),
            stages: s.iter().copied().collect(),
            provenance: BTreeMap::new(),
        };
        let all = vec![
            mk("a", &[StageLabel::ModelTraining]),
            mk("b", &[StageLabel::ModelTraining, StageLabel::DataProcessing]),
            mk("c", &[StageLabel::Unknown]),
        ];
        let mono = mono_label_subset(&all);
        assert_eq!(mono, vec![all[0].clone()]);
        assert_eq!(mono_label_subset(&mono), mono);
    }

    #[test]
    fn evaluation_identity() {
        let mk = |f: &str, s: &[StageLabel]| StageAssignment {
            file: f.into(),
            stages: s.iter().copied().collect(),
            provenance: BTreeMap::new(),
        };
        let t = vec![mk("a", &[StageLabel::ModelTraining]), mk("b", &[StageLabel::DataCollection])];
        let e = evaluate_classifier(&t, &t).unwrap();
        assert!(e.per_stage.values().all(|m| m.precision == 1.0 && m.recall == 1.0 && m.f1 == 1.0 && m.accuracy == 1.0));
        let p = vec![mk("a", &[StageLabel::DataCollection]), mk("b", &[StageLabel::ModelTraining])];
        let e = evaluate_classifier(&p, &t).unwrap();
        assert_eq!(e.per_stage[&StageLabel::ModelTraining].precision, 0.0);
        assert_eq!(e.per_stage[&StageLabel::ModelTraining].recall, 0.0);
        assert!(evaluate_classifier(&p[..1], &t).is_err());
    }
}
