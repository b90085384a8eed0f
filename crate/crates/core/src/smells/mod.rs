//! The nine performance smells and their idiomatic rewrites.
//!
//! Every detector is a pure function of a [`SourceUnit`]. A detection
//! covers one contiguous source range; `simple_code` is the replacement
//! text for exactly that range, so applying a suggestion is a splice (see
//! [`apply`]).

mod assign_multi;
mod call_star;
mod chain_compare;
mod comprehension;
mod for_else;
mod for_multi;
mod truth_value;
mod util;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{scope_at, split_lines, ScopeInfo, SourceRange, SourceUnit, TextRange};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SmellKind {
    ListComprehension,
    SetComprehension,
    DictComprehension,
    ChainCompare,
    TruthValueTest,
    ForElse,
    AssignMultiTargets,
    CallStar,
    ForMultiTargets,
}

impl SmellKind {
    pub const ALL: [SmellKind; 9] = [
        SmellKind::ListComprehension,
        SmellKind::SetComprehension,
        SmellKind::DictComprehension,
        SmellKind::ChainCompare,
        SmellKind::TruthValueTest,
        SmellKind::ForElse,
        SmellKind::AssignMultiTargets,
        SmellKind::CallStar,
        SmellKind::ForMultiTargets,
    ];

    /// Name used in detection records.
    pub fn name(self) -> &'static str {
        match self {
            SmellKind::ListComprehension => "List Comprehension",
            SmellKind::SetComprehension => "Set Comprehension",
            SmellKind::DictComprehension => "Dict Comprehension",
            SmellKind::ChainCompare => "Chain Compare",
            SmellKind::TruthValueTest => "Truth Value Test",
            SmellKind::ForElse => "For Else",
            SmellKind::AssignMultiTargets => "Assign Multi Targets",
            SmellKind::CallStar => "Call Star",
            SmellKind::ForMultiTargets => "For Multi Targets",
        }
    }
}

impl fmt::Display for SmellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown smell kind {0:?}")]
pub struct UnknownKind(pub String);

impl FromStr for SmellKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SmellKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownKind(s.to_string()))
    }
}

impl Serialize for SmellKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for SmellKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One smell occurrence with its suggested rewrite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detection {
    pub file_path: String,
    pub scope: ScopeInfo,
    pub kind: SmellKind,
    /// Verbatim source text at `ranges`, one entry per line.
    pub compli_code: Vec<String>,
    /// Replacement text, one entry per line.
    pub simple_code: Vec<String>,
    pub ranges: Vec<SourceRange>,
}

impl Detection {
    pub fn start(&self) -> (u32, u32) {
        self.ranges.first().map(SourceRange::start).unwrap_or_default()
    }

    /// The single range spanned by this detection.
    pub fn span(&self) -> Option<SourceRange> {
        let first = self.ranges.first()?;
        let last = self.ranges.last()?;
        Some(SourceRange::new(first.start_line, first.start_col, last.end_line, last.end_col))
    }
}

/// Tunable detector rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmellConfig {
    /// Builtins whose result is a bool, allowing `f(x) is True` to become `f(x)`.
    pub truth_value_allowlist: Vec<String>,
    /// Shortest run of consecutive subscripted arguments reported as Call Star.
    pub call_star_min_run: usize,
}

impl Default for SmellConfig {
    fn default() -> Self {
        Self {
            truth_value_allowlist: ["isinstance", "callable", "hasattr", "issubclass"]
                .into_iter()
                .map(String::from)
                .collect(),
            call_star_min_run: 2,
        }
    }
}

/// A raw match before scope resolution.
#[derive(Debug, Clone)]
pub(crate) struct Finding {
    pub range: TextRange,
    pub simple: String,
}

impl Finding {
    pub fn new(range: TextRange, simple: impl Into<String>) -> Self {
        Self { range, simple: simple.into() }
    }
}

fn to_detections(unit: &SourceUnit, kind: SmellKind, mut findings: Vec<Finding>) -> Vec<Detection> {
    findings.sort_by_key(|f| (f.range.start(), std::cmp::Reverse(f.range.end())));
    let mut kept: Vec<Finding> = Vec::with_capacity(findings.len());
    for f in findings {
        // an outer match already covers this region
        if kept.last().is_some_and(|k| f.range.start() < k.range.end()) {
            continue;
        }
        kept.push(f);
    }
    kept.into_iter()
        .map(|f| Detection {
            file_path: unit.path().to_string(),
            scope: scope_at(unit.suite(), f.range),
            kind,
            compli_code: unit.lines_of(f.range),
            simple_code: split_lines(&f.simple),
            ranges: vec![unit.source_range(f.range)],
        })
        .collect()
}

pub fn detect_list_comprehension(unit: &SourceUnit) -> Vec<Detection> {
    to_detections(unit, SmellKind::ListComprehension, comprehension::find(unit, comprehension::Flavor::List))
}

pub fn detect_set_comprehension(unit: &SourceUnit) -> Vec<Detection> {
    to_detections(unit, SmellKind::SetComprehension, comprehension::find(unit, comprehension::Flavor::Set))
}

pub fn detect_dict_comprehension(unit: &SourceUnit) -> Vec<Detection> {
    to_detections(unit, SmellKind::DictComprehension, comprehension::find(unit, comprehension::Flavor::Dict))
}

pub fn detect_chain_compare(unit: &SourceUnit) -> Vec<Detection> {
    to_detections(unit, SmellKind::ChainCompare, chain_compare::find(unit))
}

pub fn detect_truth_value_test(unit: &SourceUnit, config: &SmellConfig) -> Vec<Detection> {
    to_detections(unit, SmellKind::TruthValueTest, truth_value::find(unit, &config.truth_value_allowlist))
}

pub fn detect_for_else(unit: &SourceUnit) -> Vec<Detection> {
    to_detections(unit, SmellKind::ForElse, for_else::find(unit))
}

pub fn detect_assign_multi_targets(unit: &SourceUnit) -> Vec<Detection> {
    to_detections(unit, SmellKind::AssignMultiTargets, assign_multi::find(unit))
}

pub fn detect_call_star(unit: &SourceUnit, config: &SmellConfig) -> Vec<Detection> {
    to_detections(unit, SmellKind::CallStar, call_star::find(unit, config.call_star_min_run.max(2)))
}

pub fn detect_for_multi_targets(unit: &SourceUnit) -> Vec<Detection> {
    to_detections(unit, SmellKind::ForMultiTargets, for_multi::find(unit))
}

pub fn detect(unit: &SourceUnit, kind: SmellKind, config: &SmellConfig) -> Vec<Detection> {
    match kind {
        SmellKind::ListComprehension => detect_list_comprehension(unit),
        SmellKind::SetComprehension => detect_set_comprehension(unit),
        SmellKind::DictComprehension => detect_dict_comprehension(unit),
        SmellKind::ChainCompare => detect_chain_compare(unit),
        SmellKind::TruthValueTest => detect_truth_value_test(unit, config),
        SmellKind::ForElse => detect_for_else(unit),
        SmellKind::AssignMultiTargets => detect_assign_multi_targets(unit),
        SmellKind::CallStar => detect_call_star(unit, config),
        SmellKind::ForMultiTargets => detect_for_multi_targets(unit),
    }
}

/// Runs the enabled detectors and merges their output, ordered by
/// position and then by kind name.
pub fn scan_unit(unit: &SourceUnit, enabled: &BTreeSet<SmellKind>, config: &SmellConfig) -> Vec<Detection> {
    let mut all: Vec<Detection> = enabled.iter().flat_map(|&kind| detect(unit, kind, config)).collect();
    all.sort_by(|a, b| (a.start(), a.kind.name()).cmp(&(b.start(), b.kind.name())));
    all
}

/// All nine kinds.
pub fn all_kinds() -> BTreeSet<SmellKind> {
    SmellKind::ALL.into_iter().collect()
}

/// Replaces the detection's span in `text` with its suggested code.
pub fn apply(text: &str, detection: &Detection) -> Option<String> {
    let span = detection.span()?;
    let offsets: Vec<usize> = std::iter::once(0)
        .chain(text.match_indices('\n').map(|(i, _)| i + 1))
        .collect();
    let at = |line: u32, col: u32| -> Option<usize> {
        let start = *offsets.get((line as usize).checked_sub(1)?)?;
        Some(start + col as usize).filter(|&o| o <= text.len())
    };
    let start = at(span.start_line, span.start_col)?;
    let end = at(span.end_line, span.end_col)?;
    let mut out = String::with_capacity(text.len());
    out.push_str(&text[..start]);
    out.push_str(&detection.simple_code.join("\n"));
    out.push_str(&text[end..]);
    Some(out)
}
