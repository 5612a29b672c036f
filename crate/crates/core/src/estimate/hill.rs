use crate::empirical::TailEstimate;
use crate::error::{ensure, Error, Result};

/// Fewest upper order statistics the estimator accepts.
pub const MIN_TAIL_POINTS: usize = 20;

/// Default fraction of the sample treated as tail.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.05;

/// Hill estimator of the survival-function exponent from the
/// `k = floor(tail_fraction n)` largest samples:
/// `xi = k / sum_{i<=k} ln(x_(i) / x_(k+1))`, with standard error `xi / sqrt(k)`.
pub fn hill_tail_exponent(samples: &[f64], tail_fraction: f64) -> Result<TailEstimate> {
    ensure(tail_fraction > 0.0 && tail_fraction <= 0.5, || {
        Error::Config(format!("tail fraction {tail_fraction} must lie in (0, 0.5]"))
    })?;
    if let Some(bad) = samples.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::Domain(format!("sample {bad} is not strictly positive")));
    }
    let k = (tail_fraction * samples.len() as f64).floor() as usize;
    ensure(k >= MIN_TAIL_POINTS && k < samples.len(), || {
        Error::SampleSize(format!(
            "{k} tail points from {} samples; at least {MIN_TAIL_POINTS} required",
            samples.len()
        ))
    })?;

    let mut sorted = samples.to_vec();
    // descending; only the top k+1 need to be ordered
    sorted.select_nth_unstable_by(k, |a, b| b.total_cmp(a));
    let threshold = sorted[k];
    let log_threshold = threshold.ln();
    let sum: f64 = sorted[..k].iter().map(|x| x.ln() - log_threshold).sum();
    ensure(sum > 0.0, || {
        Error::Degenerate(format!("all {k} tail points equal the threshold {threshold}"))
    })?;
    let exponent = k as f64 / sum;
    Ok(TailEstimate {
        exponent,
        std_error: exponent / (k as f64).sqrt(),
        k,
        threshold,
    })
}
