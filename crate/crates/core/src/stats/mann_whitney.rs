use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{check_finite, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MwuMethod {
    /// Exact null distribution when both samples have at most eight
    /// observations and there are no ties, normal approximation otherwise.
    Auto,
    Exact,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MwuResult {
    /// U statistic of the first sample.
    pub u: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    /// Negative when the first sample tends to be smaller.
    pub rank_biserial: f64,
    pub method: MwuMethod,
}

/// Ranks starting at 1, averaging over ties, plus the tie-group sizes.
pub fn rank(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = avg;
        }
        if j - i > 1 {
            ties.push(j - i);
        }
        i = j;
    }
    (ranks, ties)
}

/// Number of arrangements giving each value of U, for samples of sizes
/// `n1` and `n2` without ties. Index `u` holds the count for U = u.
pub fn exact_u_distribution(n1: usize, n2: usize) -> Vec<f64> {
    // f[i][j][u]: ways for sizes i and j; built with the recurrence
    // f(i, j, u) = f(i - 1, j, u - j) + f(i, j - 1, u)
    let max = n1 * n2;
    let mut prev: Vec<Vec<f64>> = (0..=n2).map(|_| {
        let mut v = vec![0.0; max + 1];
        v[0] = 1.0;
        v
    }).collect();
    for i in 1..=n1 {
        let mut cur: Vec<Vec<f64>> = vec![vec![0.0; max + 1]; n2 + 1];
        cur[0][0] = 1.0;
        for j in 1..=n2 {
            for u in 0..=i * j {
                let take = if u >= j { prev[j][u - j] } else { 0.0 };
                cur[j][u] = take + cur[j - 1][u];
            }
        }
        prev = cur;
    }
    prev.swap_remove(n2)
}

pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MwuResult, StatsError> {
    mann_whitney_u_with(a, b, MwuMethod::Auto)
}

pub fn mann_whitney_u_with(a: &[f64], b: &[f64], method: MwuMethod) -> Result<MwuResult, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    check_finite(a)?;
    check_finite(b)?;
    let (n1, n2) = (a.len(), b.len());
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = rank(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let u1 = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let nn = (n1 * n2) as f64;
    let rank_biserial = 2.0 * u1 / nn - 1.0;

    let method = match method {
        MwuMethod::Auto if n1 <= 8 && n2 <= 8 && ties.is_empty() => MwuMethod::Exact,
        MwuMethod::Auto => MwuMethod::Asymptotic,
        m => m,
    };
    let p_value = match method {
        MwuMethod::Exact => exact_p(u1, n1, n2),
        _ => asymptotic_p(u1, n1, n2, &ties),
    };
    Ok(MwuResult { u: u1, p_value, rank_biserial, method })
}

fn exact_p(u1: f64, n1: usize, n2: usize) -> f64 {
    let counts = exact_u_distribution(n1, n2);
    let total: f64 = counts.iter().sum();
    // with ties U can be fractional; the exact routine is only exact without them
    let lo = u1.floor() as usize;
    let hi = u1.ceil() as usize;
    let below: f64 = counts[..=lo].iter().sum::<f64>() / total;
    let above: f64 = counts[hi..].iter().sum::<f64>() / total;
    (2.0 * below.min(above)).min(1.0)
}

fn asymptotic_p(u1: f64, n1: usize, n2: usize, ties: &[usize]) -> f64 {
    let n = (n1 + n2) as f64;
    let mu = (n1 * n2) as f64 / 2.0;
    let tie_term: f64 = ties.iter().map(|&t| (t as f64).powi(3) - t as f64).sum::<f64>() / (n * (n - 1.0));
    let var = (n1 * n2) as f64 / 12.0 * ((n + 1.0) - tie_term);
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((u1 - mu).abs() - 0.5) / var.sqrt();
    let sf = Normal::new(0.0, 1.0).expect("standard normal").sf(z);
    (2.0 * sf).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_with_ties() {
        let (r, t) = rank(&[3.0, 1.0, 3.0, 2.0]);
        assert_eq!(r, [3.5, 1.0, 3.5, 2.0]);
        assert_eq!(t, [2]);
    }

    #[test]
    fn exact_distribution_sums_to_binomial() {
        let d = exact_u_distribution(3, 3);
        assert_eq!(d.iter().sum::<f64>(), 20.0);
        assert_eq!(d, [1.0, 1.0, 2.0, 3.0, 3.0, 3.0, 3.0, 2.0, 1.0, 1.0]);
    }

    #[test]
    fn separation_endpoints() {
        let r = mann_whitney_u(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!((r.u, r.rank_biserial), (0.0, -1.0));
        let r = mann_whitney_u(&[3.0, 4.0], &[1.0, 2.0]).unwrap();
        assert_eq!(r.rank_biserial, 1.0);
        let r = mann_whitney_u(&[1.0, 2.0, 2.0, 5.0], &[2.0, 5.0, 1.0, 2.0]).unwrap();
        assert_eq!(r.rank_biserial, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn interleaved_small_samples() {
        // U = 3 of the 20 equally likely arrangements: P(U <= 3) = 7/20
        let r = mann_whitney_u(&[1.0, 3.0, 5.0], &[2.0, 4.0, 6.0]).unwrap();
        assert_eq!(r.u, 3.0);
        assert_eq!(r.method, MwuMethod::Exact);
        assert!((r.p_value - 0.7).abs() < 1e-15);
    }

    #[test]
    fn all_tied_gives_p_one() {
        let r = mann_whitney_u(&[0.0; 5], &[0.0; 9]).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.rank_biserial, 0.0);
    }
}
