use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use pysmell::config::AdapterConfig;
use pysmell::metrics::{LocManifest, Normalization, ProjectMetrics};
use pysmell::miner::{apply_filters, search_repos, CorpusManifest, FilterCriteria, ManifestHistory, RepoSource};
use pysmell::report::read_report;
use pysmell::stages::{
    classify_file_with, smell_stage_distribution, Distribution, KeywordMap, LabelMode, ScoreSource, StageAssignment,
    StageConfig,
};
use pysmell::stats::{cohens_kappa, compare_corpora, plot_data, Comparison, KappaResult, PlotData};
use pysmell::{ScanReport, SmellKind, ToolConfig};
use serde::Serialize;
use serde_json::json;

use crate::adapter::{Degrading, HttpScorer, StdioScorer};
use crate::scan::{collect_files, scan_files};

pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn load_config(path: Option<&Path>) -> Result<ToolConfig> {
    match path {
        Some(p) => Ok(ToolConfig::load(p)?),
        None => Ok(ToolConfig::default()),
    }
}

pub fn scan(paths: &[PathBuf], config: &ToolConfig, jobs: usize) -> Result<(ScanReport, LocManifest)> {
    let files = collect_files(paths, &config.extensions)?;
    scan_files(&files, config, jobs)
}

fn read_loc(path: &Path) -> Result<LocManifest> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not a LOC manifest", path.display()))
}

/// Project metrics for one corpus given its report and LOC manifest.
pub fn corpus_metrics(report: &Path, loc: &Path) -> Result<Vec<ProjectMetrics>> {
    let report = read_report(report).with_context(|| format!("loading report {}", report.display()))?;
    let loc = read_loc(loc)?;
    Ok(loc.project_metrics(&report.detections)?)
}

pub fn compare(a: (&Path, &Path), b: (&Path, &Path), normalization: Normalization) -> Result<Comparison> {
    let ma = corpus_metrics(a.0, a.1)?;
    let mb = corpus_metrics(b.0, b.1)?;
    Ok(compare_corpora(&ma, &mb, normalization)?)
}

/// Per-project values of one kind, or of all kinds summed when `kind` is None.
fn sample(metrics: &[ProjectMetrics], kind: Option<SmellKind>, normalization: Normalization) -> Vec<f64> {
    metrics
        .iter()
        .map(|m| match kind {
            Some(k) => m.value(k, normalization),
            None => SmellKind::ALL.iter().map(|&k| m.value(k, normalization)).sum(),
        })
        .collect()
}

pub fn plot(
    a: (&Path, &Path),
    b: (&Path, &Path),
    normalization: Normalization,
    kind: Option<SmellKind>,
    bins: usize,
) -> Result<PlotData> {
    let ma = corpus_metrics(a.0, a.1)?;
    let mb = corpus_metrics(b.0, b.1)?;
    Ok(plot_data(&sample(&ma, kind, normalization), &sample(&mb, kind, normalization), bins)?)
}

#[derive(Debug, Serialize)]
pub struct ClassifyOutput {
    pub config: serde_json::Value,
    pub adapter: serde_json::Value,
    pub assignments: Vec<StageAssignment>,
    pub multi_label: Distribution,
    pub mono_label: Distribution,
}

pub fn open_adapter(config: Option<&AdapterConfig>, stages: &StageConfig) -> Result<Option<Box<dyn ScoreSource>>> {
    let descriptions = stages.stage_descriptions();
    Ok(match config {
        None => None,
        Some(AdapterConfig::Http { endpoint, timeout_ms }) => {
            Some(Box::new(HttpScorer::new(endpoint, Duration::from_millis(*timeout_ms), descriptions)))
        }
        Some(AdapterConfig::Stdio { command, timeout_ms }) => {
            match StdioScorer::spawn(command, Duration::from_millis(*timeout_ms), descriptions) {
                Ok(s) => Some(Box::new(s)),
                Err(e) => {
                    eprintln!("warning: {e:#}; continuing with keyword matching only");
                    None
                }
            }
        }
    })
}

pub fn classify(
    paths: &[PathBuf],
    config: &ToolConfig,
    stages: &StageConfig,
    adapter: Option<Box<dyn ScoreSource>>,
    report: Option<&ScanReport>,
    jobs: usize,
) -> Result<ClassifyOutput> {
    let keywords: KeywordMap = stages.keyword_map()?;
    let files = collect_files(paths, &config.extensions)?;
    let attached = adapter.is_some();
    let mut scorer = Degrading::new(adapter);
    let mut assignments = Vec::with_capacity(files.len());
    for f in &files {
        let text = String::from_utf8_lossy(&std::fs::read(&f.path).with_context(|| format!("reading {}", f.path.display()))?)
            .into_owned();
        let scores = scorer.scores(&text).map_err(|e| anyhow!(e))?;
        assignments.push(classify_file_with(
            &f.display,
            &text,
            &keywords,
            scores.as_ref(),
            config.classifier_threshold,
            stages.strict,
        )?);
    }
    let scanned;
    let report = match report {
        Some(r) => r,
        None => {
            scanned = scan_files(&files, config, jobs)?.0;
            &scanned
        }
    };
    let multi_label = smell_stage_distribution(&assignments, &report.detections, LabelMode::Multi)?;
    let mono_label = smell_stage_distribution(&assignments, &report.detections, LabelMode::Mono)?;
    Ok(ClassifyOutput {
        config: json!({ "tool": config.to_value(), "stages": stages }),
        adapter: json!({ "attached": attached, "degraded": scorer.degraded(), "warnings": scorer.warnings }),
        assignments,
        multi_label,
        mono_label,
    })
}

/// Appends a snapshot to the manifest file at `path`, creating it if needed.
pub fn append_snapshot(path: &Path, snapshot: CorpusManifest) -> Result<ManifestHistory> {
    let mut history = if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("{} is not a corpus manifest", path.display()))?
    } else {
        ManifestHistory::default()
    };
    history.snapshots.push(snapshot);
    std::fs::write(path, to_pretty(&history)?).with_context(|| format!("writing {}", path.display()))?;
    Ok(history)
}

pub fn mine(
    source: &mut dyn RepoSource,
    keywords: &[String],
    suffix: Option<&str>,
    top_n: usize,
    criteria: &FilterCriteria,
) -> Result<CorpusManifest> {
    criteria.validate()?;
    let found = search_repos(source, keywords, top_n, suffix).map_err(|e| match e {
        pysmell::miner::MinerError::ApiRateLimited { .. } => {
            anyhow!(e).context("search stopped by the rate limit; wait for the reset and run the command again")
        }
        other => anyhow!(other),
    })?;
    let mut manifest = apply_filters(&found.repos, criteria);
    manifest.queries = found.queries;
    Ok(manifest)
}

/// Reads an `id,label` CSV with a header row.
pub fn read_labels(path: &Path) -> Result<BTreeMap<String, String>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let col = |name: &str, fallback: usize| headers.iter().position(|h| h.trim() == name).unwrap_or(fallback);
    let (id_col, label_col) = (col("id", 0), col("label", 1));
    let mut out = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let (Some(id), Some(label)) = (record.get(id_col), record.get(label_col)) else {
            bail!("{} row {} has fewer than two columns", path.display(), i + 2);
        };
        if out.insert(id.trim().to_string(), label.trim().to_string()).is_some() {
            bail!("{} lists id {:?} twice", path.display(), id.trim());
        }
    }
    Ok(out)
}

pub fn kappa(a: &Path, b: &Path) -> Result<KappaResult> {
    let la = read_labels(a)?;
    let lb = read_labels(b)?;
    let ids_a: BTreeSet<&String> = la.keys().collect();
    let ids_b: BTreeSet<&String> = lb.keys().collect();
    if let Some(id) = ids_a.difference(&ids_b).next() {
        bail!("id {id:?} is in {} but not in {}", a.display(), b.display());
    }
    if let Some(id) = ids_b.difference(&ids_a).next() {
        bail!("id {id:?} is in {} but not in {}", b.display(), a.display());
    }
    let xs: Vec<&String> = la.values().collect();
    let ys: Vec<&String> = la.keys().map(|k| &lb[k]).collect();
    Ok(cohens_kappa(&xs, &ys)?)
}
