//! Empirical distribution utilities and the reference stylized-fact exponents.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Reference power-law exponents of the survival functions of absolute
/// returns, traded volume, number of trades and managed assets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StylizedTargets {
    pub xi_r: f64,
    pub xi_v: f64,
    pub xi_n: f64,
    pub xi_s: f64,
}

pub const STYLIZED_TARGETS: StylizedTargets = StylizedTargets {
    xi_r: 3.0,
    xi_v: 1.5,
    xi_n: 3.4,
    xi_s: 1.05,
};

/// A fitted survival-function exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub exponent: f64,
    pub std_error: f64,
    /// Number of upper order statistics used.
    pub k: usize,
    /// The (k+1)-th largest sample.
    pub threshold: f64,
}

/// `(value, P(X > value))` pairs in ascending value order. The i-th sorted
/// value (0-based) gets tail probability `(n - 1 - i) / n`; ties keep their
/// sorted rank.
pub fn empirical_ccdf(samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    ensure(samples.len() >= 2, || {
        Error::Size(format!("{} samples; at least 2 required", samples.len()))
    })?;
    if let Some(bad) = samples.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::Domain(format!("sample {bad} is not strictly positive")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(i, x)| (x, (n - 1.0 - i as f64) / n))
        .collect())
}

/// Ordinary least-squares line `y = intercept + slope x` with the slope's
/// standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub slope_std_error: f64,
}

/// Weighted least squares; unit weights give OLS. The slope standard error
/// treats the weights as inverse variances when `inverse_variance` is set,
/// and otherwise uses the residual variance.
pub(crate) fn weighted_line_fit(
    xs: &[f64],
    ys: &[f64],
    ws: &[f64],
    inverse_variance: bool,
) -> Option<LineFit> {
    let sw: f64 = ws.iter().sum();
    if xs.len() < 3 || sw <= 0.0 {
        return None;
    }
    let mx = xs.iter().zip(ws).map(|(x, w)| w * x).sum::<f64>() / sw;
    let my = ys.iter().zip(ws).map(|(y, w)| w * y).sum::<f64>() / sw;
    let sxx: f64 = xs.iter().zip(ws).map(|(x, w)| w * (x - mx).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .zip(ws)
        .map(|((x, y), w)| w * (x - mx) * (y - my))
        .sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_std_error = if inverse_variance {
        (1.0 / sxx).sqrt()
    } else {
        let rss: f64 = xs
            .iter()
            .zip(ys)
            .zip(ws)
            .map(|((x, y), w)| w * (y - intercept - slope * x).powi(2))
            .sum();
        (rss / (xs.len() as f64 - 2.0) / sxx).sqrt()
    };
    Some(LineFit {
        intercept,
        slope,
        slope_std_error,
    })
}

/// OLS slope of `ln P(X > x)` on `ln x` over the pairs whose value lies in
/// `[lo, hi]` and whose tail probability is positive.
pub fn ccdf_loglog_slope(pairs: &[(f64, f64)], lo: f64, hi: f64) -> Option<LineFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs
        .iter()
        .filter(|(x, p)| *x >= lo && *x <= hi && *p > 0.0)
        .map(|(x, p)| (x.ln(), p.ln()))
        .unzip();
    let ws = vec![1.0; xs.len()];
    weighted_line_fit(&xs, &ys, &ws, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;
    use proptest::prelude::*;

    #[test]
    fn rank_arithmetic() {
        let c = empirical_ccdf(&[3.0, 1.0, 4.0, 2.0]).unwrap();
        assert_eq!(c, vec![(1.0, 0.75), (2.0, 0.5), (3.0, 0.25), (4.0, 0.0)]);
    }

    #[test]
    fn ties_share_sorted_order() {
        let c = empirical_ccdf(&[7.0, 7.0, 7.0]).unwrap();
        let probs: Vec<f64> = c.iter().map(|p| p.1).collect();
        assert_eq!(probs, vec![2.0 / 3.0, 1.0 / 3.0, 0.0]);
    }

    #[test]
    fn rejects_small_or_nonpositive_input() {
        assert!(matches!(empirical_ccdf(&[]), Err(Error::Size(_))));
        assert!(matches!(empirical_ccdf(&[1.0]), Err(Error::Size(_))));
        assert!(matches!(empirical_ccdf(&[1.0, -1.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn pareto_top_decade_slope() {
        let mut rng = RandomSource::new(42, 0);
        let xs: Vec<f64> = (0..100_000)
            .map(|_| rng.uniform_open0().powf(-1.0 / 1.5))
            .collect();
        let pairs = empirical_ccdf(&xs).unwrap();
        // top decade of tail probability: P in [1e-3, 1e-2]
        let lo = pairs.iter().find(|(_, p)| *p <= 1e-2).unwrap().0;
        let hi = pairs.iter().find(|(_, p)| *p <= 1e-3).unwrap().0;
        let fit = ccdf_loglog_slope(&pairs, lo, hi).unwrap();
        assert!((fit.slope + 1.5).abs() < 0.1, "slope {}", fit.slope);
    }

    #[test]
    fn targets_are_pinned() {
        assert_eq!(STYLIZED_TARGETS.xi_r, 3.0);
        assert_eq!(STYLIZED_TARGETS.xi_v, 1.5);
        assert_eq!(STYLIZED_TARGETS.xi_n, 3.4);
        assert_eq!(STYLIZED_TARGETS.xi_s, 1.05);
    }

    proptest! {
        #[test]
        fn ccdf_is_a_survival_function(xs in proptest::collection::vec(1e-6f64..1e6, 2..300)) {
            let c = empirical_ccdf(&xs).unwrap();
            prop_assert_eq!(c.last().unwrap().1, 0.0);
            for w in c.windows(2) {
                prop_assert!(w[0].0 <= w[1].0);
                prop_assert!(w[0].1 >= w[1].1);
            }
            for (_, p) in &c {
                prop_assert!((0.0..=1.0).contains(p));
            }
        }
    }
}
