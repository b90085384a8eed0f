//! Lines of code and smell densities per project.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::smells::{Detection, SmellKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocMode {
    /// Lines with any non-whitespace character.
    #[default]
    PhysicalNonblank,
    /// Non-blank lines that do not start with a comment.
    ExcludeComments,
}

impl std::str::FromStr for LocMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "physical-nonblank" => Ok(LocMode::PhysicalNonblank),
            "exclude-comments" => Ok(LocMode::ExcludeComments),
            other => Err(format!("unknown LOC mode {other:?} (expected physical-nonblank or exclude-comments)")),
        }
    }
}

pub fn count_loc(text: &str, mode: LocMode) -> usize {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .filter(|l| mode == LocMode::PhysicalNonblank || !l.starts_with('#'))
        .count()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("no line count for {0}")]
    MissingLoc(String),
}

/// How smell counts are normalized when comparing projects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    Kloc,
    SmellyFile,
}

impl std::str::FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kloc" => Ok(Normalization::Kloc),
            "smelly-file" => Ok(Normalization::SmellyFile),
            other => Err(format!("unknown normalization {other:?} (expected kloc or smelly-file)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectMetrics {
    pub project_id: String,
    pub loc: usize,
    pub smelly_files: usize,
    pub counts_by_kind: BTreeMap<SmellKind, usize>,
    pub density_per_kloc_by_kind: BTreeMap<SmellKind, f64>,
    /// Absent when the project has no smelly file.
    pub per_smelly_file_by_kind: Option<BTreeMap<SmellKind, f64>>,
}

impl ProjectMetrics {
    pub fn total_count(&self) -> usize {
        self.counts_by_kind.values().sum()
    }

    /// All detections per thousand lines.
    pub fn total_density(&self) -> f64 {
        per_kloc(self.total_count(), self.loc)
    }

    /// The normalized value for one kind; zero where undefined.
    pub fn value(&self, kind: SmellKind, normalization: Normalization) -> f64 {
        match normalization {
            Normalization::Kloc => self.density_per_kloc_by_kind.get(&kind).copied().unwrap_or(0.0),
            Normalization::SmellyFile => self
                .per_smelly_file_by_kind
                .as_ref()
                .and_then(|m| m.get(&kind).copied())
                .unwrap_or(0.0),
        }
    }
}

fn per_kloc(count: usize, loc: usize) -> f64 {
    if loc == 0 {
        0.0
    } else {
        count as f64 * 1000.0 / loc as f64
    }
}

/// Aggregates the detections of one project. `loc_by_file` lists every
/// file of the project, smelly or not.
pub fn project_metrics<'a>(
    project_id: &str,
    detections: impl IntoIterator<Item = &'a Detection>,
    loc_by_file: &BTreeMap<String, usize>,
) -> Result<ProjectMetrics, MetricsError> {
    let mut counts: BTreeMap<SmellKind, usize> = SmellKind::ALL.iter().map(|&k| (k, 0)).collect();
    let mut smelly = BTreeSet::new();
    for d in detections {
        if !loc_by_file.contains_key(&d.file_path) {
            return Err(MetricsError::MissingLoc(d.file_path.clone()));
        }
        *counts.entry(d.kind).or_default() += 1;
        smelly.insert(d.file_path.as_str());
    }
    let loc: usize = loc_by_file.values().sum();
    let smelly_files = smelly.len();
    let density = counts.iter().map(|(&k, &c)| (k, per_kloc(c, loc))).collect();
    let per_file = (smelly_files > 0)
        .then(|| counts.iter().map(|(&k, &c)| (k, c as f64 / smelly_files as f64)).collect());
    Ok(ProjectMetrics {
        project_id: project_id.to_string(),
        loc,
        smelly_files,
        counts_by_kind: counts,
        density_per_kloc_by_kind: density,
        per_smelly_file_by_kind: per_file,
    })
}

/// One scanned file's line count and owning project.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocEntry {
    pub path: String,
    pub project: String,
    pub loc: usize,
}

/// Per-file line counts of a scan, used to normalize its detections.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocManifest {
    pub mode: LocMode,
    pub files: Vec<LocEntry>,
}

impl LocManifest {
    /// Metrics for every project in the manifest, ordered by project id.
    pub fn project_metrics(&self, detections: &[Detection]) -> Result<Vec<ProjectMetrics>, MetricsError> {
        let mut projects: BTreeMap<&str, BTreeMap<String, usize>> = BTreeMap::new();
        let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
        for f in &self.files {
            projects.entry(&f.project).or_default().insert(f.path.clone(), f.loc);
            owner.insert(&f.path, &f.project);
        }
        let mut by_project: BTreeMap<&str, Vec<&Detection>> = BTreeMap::new();
        for d in detections {
            let project = owner.get(d.file_path.as_str()).ok_or_else(|| MetricsError::MissingLoc(d.file_path.clone()))?;
            by_project.entry(project).or_default().push(d);
        }
        projects
            .iter()
            .map(|(id, files)| project_metrics(id, by_project.get(id).into_iter().flatten().copied(), files))
            .collect()
    }
}
