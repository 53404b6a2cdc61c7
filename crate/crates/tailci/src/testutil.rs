//! Shared fixtures for unit tests.

use crate::sample::Sample;

/// Exact Pareto quantile grid with unit tail index: y_i = (i/(n+1))^-1.
pub(crate) fn pareto_grid(n: usize) -> Sample {
    let values: Vec<f64> = (1..=n)
        .map(|i| (i as f64 / (n + 1) as f64).powi(-1))
        .collect();
    Sample::new(values).unwrap()
}
