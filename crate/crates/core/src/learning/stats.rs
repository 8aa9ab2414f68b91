//! Summary statistics over repeated learning runs.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermStats {
    /// Final value of each learning run.
    pub values: Vec<f64>,
    /// Run-to-run deviation of each run's final term.
    pub sigmas: Vec<f64>,
    /// E(v)
    pub mean: f64,
    /// σ(v)
    pub std_dev: f64,
    /// E(σ)
    pub mean_sigma: f64,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population deviation `sqrt(mean of squares - mean^2)`, clamped at zero
/// against rounding.
pub fn std_dev(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let sq = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
    (sq - m * m).max(0.0).sqrt()
}

/// # Panics
/// If `values` is empty or the two slices differ in length.
pub fn aggregate_stats(values: &[f64], sigmas: &[f64]) -> TermStats {
    assert!(!values.is_empty(), "at least one learning run");
    assert_eq!(values.len(), sigmas.len());
    TermStats {
        values: values.to_vec(),
        sigmas: sigmas.to_vec(),
        mean: mean(values),
        std_dev: std_dev(values),
        mean_sigma: mean(sigmas),
    }
}
