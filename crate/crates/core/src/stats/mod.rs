//! Descriptive statistics and the nonparametric tests used to compare
//! smell densities.

mod compare;
mod descriptive;
mod kappa;
mod mann_whitney;
mod shapiro;

use thiserror::Error;

pub use compare::{compare_corpora, plot_data, Comparison, ComparisonRow, Histogram, PlotData};
pub use descriptive::{descriptive, quantile, DescriptiveStats};
pub use kappa::{cohens_kappa, KappaResult};
pub use mann_whitney::{exact_u_distribution, mann_whitney_u, mann_whitney_u_with, rank, MwuMethod, MwuResult};
pub use shapiro::{shapiro_wilk, SwResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample size {0} is outside 3..=5000")]
    SampleSizeOutOfRange(usize),
    #[error("all observations are identical")]
    DegenerateSample,
    #[error("label vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("corpus has no projects")]
    EmptyCorpus,
    #[error("histogram needs at least one bin")]
    NoBins,
    #[error("sample contains a non-finite value")]
    NonFinite,
}

fn check_finite(xs: &[f64]) -> Result<(), StatsError> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}
