use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaResult {
    pub kappa: f64,
    pub observed_agreement: f64,
    pub expected_agreement: f64,
}

/// Chance-corrected agreement between two raters' labels for the same items.
pub fn cohens_kappa<L: Ord>(labels_a: &[L], labels_b: &[L]) -> Result<KappaResult, StatsError> {
    if labels_a.len() != labels_b.len() {
        return Err(StatsError::LengthMismatch(labels_a.len(), labels_b.len()));
    }
    if labels_a.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let n = labels_a.len() as f64;
    let agree = labels_a.iter().zip(labels_b).filter(|(a, b)| a == b).count() as f64;
    let mut margins: BTreeMap<&L, (usize, usize)> = BTreeMap::new();
    for l in labels_a {
        margins.entry(l).or_default().0 += 1;
    }
    for l in labels_b {
        margins.entry(l).or_default().1 += 1;
    }
    let po = agree / n;
    let pe: f64 = margins.values().map(|&(x, y)| (x as f64 / n) * (y as f64 / n)).sum();
    // both raters used one and the same category throughout
    let kappa = if pe >= 1.0 { 1.0 } else { (po - pe) / (1.0 - pe) };
    Ok(KappaResult { kappa, observed_agreement: po, expected_agreement: pe })
}
