//! Small summary statistics and the log-log regret fit.

use crate::error::HarnessError;

/// Sample mean and standard error of the mean. A single value has zero
/// standard error; an empty slice gives `(0, 0)`.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Least-squares slope of `ln R` against `ln T`.
///
/// Points with `R <= 0` are dropped. At least four points must survive and
/// their `T` values must be strictly increasing.
pub fn fit_regret_exponent(points: &[(f64, f64)]) -> Result<f64, HarnessError> {
    let kept: Vec<(f64, f64)> = points.iter().copied().filter(|&(_, r)| r > 0.0).collect();
    if kept.len() < 4 {
        return Err(HarnessError::Fit(format!(
            "need at least 4 checkpoints with positive regret, got {}",
            kept.len()
        )));
    }
    if kept.windows(2).any(|w| w[1].0 <= w[0].0) || kept[0].0 <= 0.0 {
        return Err(HarnessError::Fit(
            "checkpoint horizons must be positive and strictly increasing".into(),
        ));
    }
    let xs: Vec<f64> = kept.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// `100 (a - b) / |b|`.
pub fn percent_diff(a: f64, b: f64) -> f64 {
    100.0 * (a - b) / b.abs()
}
