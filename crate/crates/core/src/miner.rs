//! Repository screening: search results are hydrated into metadata, run
//! through the sampling criteria and stored as timestamped snapshots.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use chrono::{DateTime, NaiveDate, Utc};
use rustpython_ast as ast;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepoMetadata {
    pub full_name: String,
    pub is_fork: bool,
    pub stars: u64,
    pub forks: u64,
    pub source_file_count: u64,
    pub first_commit: NaiveDate,
    pub last_commit: NaiveDate,
    pub imports_ml_libs: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    /// The repository imports an ML library while the corpus must not.
    C6Inverted,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::C1 => "C1",
            Criterion::C2 => "C2",
            Criterion::C3 => "C3",
            Criterion::C4 => "C4",
            Criterion::C5 => "C5",
            Criterion::C6 => "C6",
            Criterion::C6Inverted => "C6-inverted",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Criterion {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Criterion {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        [
            Criterion::C1,
            Criterion::C2,
            Criterion::C3,
            Criterion::C4,
            Criterion::C5,
            Criterion::C6,
            Criterion::C6Inverted,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| serde::de::Error::custom(format!("unknown criterion {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MlImports {
    #[default]
    Require,
    Forbid,
    Ignore,
}

impl std::str::FromStr for MlImports {
    type Err = MinerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "require" => Ok(MlImports::Require),
            "forbid" => Ok(MlImports::Forbid),
            "ignore" => Ok(MlImports::Ignore),
            _ => Err(MinerError::InvalidCriteria(format!("ml-imports must be require, forbid or ignore, not {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterCriteria {
    pub require_not_fork: bool,
    pub min_stars: u64,
    pub min_forks: u64,
    pub min_source_files: u64,
    pub min_history_days: i64,
    pub activity_cutoff: NaiveDate,
    pub ml_imports: MlImports,
    pub ml_libraries: Vec<String>,
}

impl Default for FilterCriteria {
    fn default() -> Self {
        Self {
            require_not_fork: true,
            min_stars: 1,
            min_forks: 1,
            min_source_files: 5,
            min_history_days: 30,
            activity_cutoff: NaiveDate::from_ymd_opt(2023, 1, 1).expect("valid date"),
            ml_imports: MlImports::Require,
            ml_libraries: ["tensorflow", "keras", "torch", "sklearn"].into_iter().map(String::from).collect(),
        }
    }
}

impl FilterCriteria {
    pub fn validate(&self) -> Result<(), MinerError> {
        if self.min_history_days < 0 {
            return Err(MinerError::InvalidCriteria("min_history_days must be non-negative".into()));
        }
        Ok(())
    }

    /// Pass/fail per criterion, C1 through C6.
    pub fn outcomes(&self, repo: &RepoMetadata) -> BTreeMap<Criterion, bool> {
        let history = (repo.last_commit - repo.first_commit).num_days();
        let c6 = match self.ml_imports {
            MlImports::Require => repo.imports_ml_libs,
            MlImports::Forbid => !repo.imports_ml_libs,
            MlImports::Ignore => true,
        };
        BTreeMap::from([
            (Criterion::C1, !self.require_not_fork || !repo.is_fork),
            (Criterion::C2, repo.stars >= self.min_stars && repo.forks >= self.min_forks),
            (Criterion::C3, repo.source_file_count >= self.min_source_files),
            (Criterion::C4, history >= self.min_history_days),
            (Criterion::C5, repo.last_commit >= self.activity_cutoff),
            (Criterion::C6, c6),
        ])
    }

    /// Every failed criterion, in order.
    pub fn rejection_reasons(&self, repo: &RepoMetadata) -> Vec<Criterion> {
        self.outcomes(repo)
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(c, _)| match (c, self.ml_imports) {
                (Criterion::C6, MlImports::Forbid) => Criterion::C6Inverted,
                _ => c,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub repo: RepoMetadata,
    pub accepted: bool,
    pub rejection_reasons: Vec<Criterion>,
    pub outcomes: BTreeMap<Criterion, bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub queries: Vec<String>,
    pub retrieved_at: DateTime<Utc>,
    pub criteria: FilterCriteria,
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn accepted(&self) -> impl Iterator<Item = &RepoMetadata> {
        self.entries.iter().filter(|e| e.accepted).map(|e| &e.repo)
    }

    /// Re-applies the criteria to the stored metadata.
    pub fn replay(&self, criteria: &FilterCriteria) -> CorpusManifest {
        let repos: Vec<RepoMetadata> = self.entries.iter().map(|e| e.repo.clone()).collect();
        let mut out = apply_filters(&repos, criteria);
        out.queries = self.queries.clone();
        out.retrieved_at = self.retrieved_at;
        out
    }
}

/// Every snapshot ever written to one manifest file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestHistory {
    pub snapshots: Vec<CorpusManifest>,
}

impl ManifestHistory {
    pub fn latest(&self) -> Option<&CorpusManifest> {
        self.snapshots.last()
    }
}

/// Screens the repositories, keeping the first occurrence of each name.
pub fn apply_filters(repos: &[RepoMetadata], criteria: &FilterCriteria) -> CorpusManifest {
    let mut seen = BTreeSet::new();
    let entries = repos
        .iter()
        .filter(|r| seen.insert(r.full_name.clone()))
        .map(|repo| {
            let rejection_reasons = criteria.rejection_reasons(repo);
            ManifestEntry {
                repo: repo.clone(),
                accepted: rejection_reasons.is_empty(),
                rejection_reasons,
                outcomes: criteria.outcomes(repo),
            }
        })
        .collect();
    CorpusManifest { queries: Vec::new(), retrieved_at: Utc::now(), criteria: criteria.clone(), entries }
}

/// True when some file imports one of `libs` at top level name, e.g.
/// `import tensorflow as tf` or `from sklearn.datasets import load_iris`.
pub fn detect_ml_imports<'a>(files: impl IntoIterator<Item = &'a str>, libs: &[String]) -> bool {
    files.into_iter().any(|text| {
        let Ok(unit) = crate::syntax::parse_unit("<repo>", text) else { return false };
        let mut modules = Vec::new();
        for stmt in unit.suite() {
            imported_modules(stmt, &mut modules);
        }
        modules
            .iter()
            .any(|m| libs.iter().any(|lib| m.split('.').next() == Some(lib.as_str())))
    })
}

fn imported_modules(stmt: &ast::Stmt, out: &mut Vec<String>) {
    match stmt {
        ast::Stmt::Import(s) => out.extend(s.names.iter().map(|a| a.name.to_string())),
        ast::Stmt::ImportFrom(s) => {
            // relative imports name the repository's own packages
            let relative = s.level.map(|l| l.to_u32() > 0).unwrap_or(false);
            if let (false, Some(m)) = (relative, &s.module) {
                out.push(m.to_string());
            }
        }
        _ => {}
    }
    for block in crate::syntax::walk::stmt_blocks(stmt) {
        for s in block {
            imported_modules(s, out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinerError {
    #[error("API rate limit reached; retry after {retry_after_secs:?} seconds")]
    ApiRateLimited { retry_after_secs: Option<u64> },
    #[error("API authentication failed: {0}")]
    ApiAuthError(String),
    #[error("API request failed: {0}")]
    Api(String),
    #[error("top_n must be at least 1")]
    InvalidTopN,
    #[error("invalid filter criteria: {0}")]
    InvalidCriteria(String),
}

/// A code-hosting search backend.
pub trait RepoSource {
    /// Repository names for `query` in the backend's best-match order.
    fn search(&mut self, query: &str, limit: usize) -> Result<Vec<String>, MinerError>;
    fn metadata(&mut self, full_name: &str) -> Result<RepoMetadata, MinerError>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub queries: Vec<String>,
    /// Hits summed over queries before deduplication.
    pub raw_hits: usize,
    pub repos: Vec<RepoMetadata>,
}

/// Runs one query per keyword and hydrates the deduplicated hits.
pub fn search_repos(
    source: &mut dyn RepoSource,
    keywords: &[String],
    top_n: usize,
    suffix: Option<&str>,
) -> Result<SearchResult, MinerError> {
    if top_n == 0 {
        return Err(MinerError::InvalidTopN);
    }
    let mut queries = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut raw_hits = 0;
    for kw in keywords {
        let query = match suffix {
            Some(s) if !s.is_empty() => format!("{kw} {s}"),
            _ => kw.clone(),
        };
        let mut hits = source.search(&query, top_n)?;
        hits.truncate(top_n);
        raw_hits += hits.len();
        for h in hits {
            if !names.contains(&h) {
                names.push(h);
            }
        }
        queries.push(query);
    }
    let repos = names.iter().map(|n| source.metadata(n)).collect::<Result<Vec<_>, _>>()?;
    Ok(SearchResult { queries, raw_hits, repos })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn good() -> RepoMetadata {
        RepoMetadata {
            full_name: "o/r".into(),
            is_fork: false,
            stars: 1,
            forks: 1,
            source_file_count: 6,
            first_commit: date("2024-01-01"),
            last_commit: date("2024-03-01"),
            imports_ml_libs: true,
        }
    }

    #[test]
    fn table_thresholds() {
        let c = FilterCriteria::default();
        assert!(apply_filters(&[good()], &c).entries[0].accepted);
        let fork = RepoMetadata { is_fork: true, stars: 100, ..good() };
        assert_eq!(c.rejection_reasons(&fork), vec![Criterion::C1]);
        let forbid = FilterCriteria { ml_imports: MlImports::Forbid, ..c };
        assert_eq!(forbid.rejection_reasons(&good()), vec![Criterion::C6Inverted]);
    }

    #[test]
    fn all_reasons_recorded() {
        let bad = RepoMetadata {
            is_fork: true,
            stars: 0,
            forks: 0,
            source_file_count: 1,
            first_commit: date("2022-01-01"),
            last_commit: date("2022-01-05"),
            imports_ml_libs: false,
            ..good()
        };
        let reasons = FilterCriteria::default().rejection_reasons(&bad);
        assert_eq!(reasons, vec![Criterion::C1, Criterion::C2, Criterion::C3, Criterion::C4, Criterion::C5, Criterion::C6]);
    }

    #[test]
    fn import_detection() {
        let libs = FilterCriteria::default().ml_libraries;
        assert!(detect_ml_imports(["import tensorflow as tf"], &libs));
        assert!(!detect_ml_imports(["# tensorflow rocks\n"], &libs));
        assert!(detect_ml_imports(["from sklearn.datasets import load_iris"], &libs));
        assert!(detect_ml_imports(["def f():\n    import torch.nn as nn\n"], &libs));
        assert!(!detect_ml_imports(["from .torch import x\nimport torchvision\n"], &libs));
        assert!(!detect_ml_imports(["import (\n"], &libs));
    }

    struct Fake;

    impl RepoSource for Fake {
        fn search(&mut self, query: &str, limit: usize) -> Result<Vec<String>, MinerError> {
            let base = query.split(' ').next().unwrap();
            Ok((0..limit + 5).map(|i| if i == 0 { "shared/repo".into() } else { format!("{base}/{i}") }).collect())
        }

        fn metadata(&mut self, full_name: &str) -> Result<RepoMetadata, MinerError> {
            Ok(RepoMetadata { full_name: full_name.into(), ..good() })
        }
    }

    #[test]
    fn search_dedup_and_limits() {
        let kws: Vec<String> = ["server", "database", "networking"].map(String::from).to_vec();
        let r = search_repos(&mut Fake, &kws, 100, None).unwrap();
        assert_eq!(r.raw_hits, 300);
        assert_eq!(r.repos.len(), 298);
        let r = search_repos(&mut Fake, &kws[..1], 50, Some("machine learning")).unwrap();
        assert_eq!(r.queries, vec!["server machine learning"]);
        assert_eq!(r.repos.len(), 50);
        assert!(search_repos(&mut Fake, &kws, 0, None).is_err());
    }
}
