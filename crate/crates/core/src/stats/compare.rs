use serde::{Deserialize, Serialize};

use super::{check_finite, descriptive, mann_whitney_u, DescriptiveStats, MwuResult, StatsError};
use crate::metrics::{Normalization, ProjectMetrics};
use crate::smells::SmellKind;

/// Significance level used to flag rows.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub kind: SmellKind,
    pub mean_a: f64,
    pub mean_b: f64,
    pub test: MwuResult,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub normalization: Normalization,
    pub projects_a: usize,
    pub projects_b: usize,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:<22} {:>10} {:>10} {:>8} {:>10} {:>8}\n",
            "smell", "mean_a", "mean_b", "U", "p", "r"
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{:<22} {:>10.4} {:>10.4} {:>8.1} {:>10.4} {:>8.3}{}\n",
                row.kind.name(),
                row.mean_a,
                row.mean_b,
                row.test.u,
                row.test.p_value,
                row.test.rank_biserial,
                if row.significant { " *" } else { "" }
            ));
        }
        out
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Per-kind means and two-sided Mann-Whitney tests between two corpora.
pub fn compare_corpora(
    metrics_a: &[ProjectMetrics],
    metrics_b: &[ProjectMetrics],
    normalization: Normalization,
) -> Result<Comparison, StatsError> {
    if metrics_a.is_empty() || metrics_b.is_empty() {
        return Err(StatsError::EmptyCorpus);
    }
    let rows = SmellKind::ALL
        .iter()
        .map(|&kind| {
            let a: Vec<f64> = metrics_a.iter().map(|m| m.value(kind, normalization)).collect();
            let b: Vec<f64> = metrics_b.iter().map(|m| m.value(kind, normalization)).collect();
            let test = mann_whitney_u(&a, &b)?;
            Ok(ComparisonRow { kind, mean_a: mean(&a), mean_b: mean(&b), significant: test.p_value < ALPHA, test })
        })
        .collect::<Result<Vec<_>, StatsError>>()?;
    Ok(Comparison { normalization, projects_a: metrics_a.len(), projects_b: metrics_b.len(), rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` edges; the last bin includes its right edge.
    pub edges: Vec<f64>,
    pub counts_a: Vec<usize>,
    pub counts_b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotData {
    pub summary_a: DescriptiveStats,
    pub summary_b: DescriptiveStats,
    pub histogram: Histogram,
}

/// Boxplot summaries and equal-width histogram counts over the pooled range.
pub fn plot_data(sample_a: &[f64], sample_b: &[f64], bins: usize) -> Result<PlotData, StatsError> {
    if bins == 0 {
        return Err(StatsError::NoBins);
    }
    check_finite(sample_a)?;
    check_finite(sample_b)?;
    let summary_a = descriptive(sample_a)?;
    let summary_b = descriptive(sample_b)?;
    let mut lo = summary_a.min.min(summary_b.min);
    let mut hi = summary_a.max.max(summary_b.max);
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| if i == bins { hi } else { lo + width * i as f64 }).collect();
    let count = |xs: &[f64]| {
        let mut c = vec![0usize; bins];
        for &x in xs {
            let mut i = (((x - lo) / width).floor() as usize).min(bins - 1);
            // floating error can put a value on the wrong side of an edge
            while i > 0 && x < edges[i] {
                i -= 1;
            }
            while i + 1 < bins && x >= edges[i + 1] {
                i += 1;
            }
            c[i] += 1;
        }
        c
    };
    let histogram = Histogram { counts_a: count(sample_a), counts_b: count(sample_b), edges };
    Ok(PlotData { summary_a, summary_b, histogram })
}
