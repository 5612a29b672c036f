//! Continuous, discrete and quasicontinuous variances.
//!
//! `h1` are per-interval variances observed at knot times; `h2` is a smooth
//! interpolant that coincides with `h1` at every knot and stands in for the
//! continuous variance `h0` between them.

use serde::Serialize;

use crate::error::{ensure, Error, Result};

/// Natural cubic spline (zero second derivative at both ends).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaturalCubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl NaturalCubicSpline {
    pub fn new(xs: &[f64], ys: &[f64]) -> Result<Self> {
        ensure(xs.len() == ys.len(), || {
            Error::Size(format!("{} knots but {} values", xs.len(), ys.len()))
        })?;
        ensure(xs.len() >= 3, || {
            Error::Size(format!("{} knots; at least 3 required", xs.len()))
        })?;
        ensure(xs.iter().chain(ys).all(|v| v.is_finite()), || {
            Error::Domain("non-finite knot".into())
        })?;
        ensure(xs.windows(2).all(|w| w[1] > w[0]), || {
            Error::Ordering("knot times must be strictly increasing".into())
        })?;

        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        // Thomas algorithm for the interior second derivatives
        let interior = n - 2;
        let mut diag = vec![0.0; interior];
        let mut rhs = vec![0.0; interior];
        let mut upper = vec![0.0; interior];
        for i in 0..interior {
            let (h0, h1) = (h[i], h[i + 1]);
            diag[i] = 2.0 * (h0 + h1);
            upper[i] = h1;
            rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / h1 - (ys[i + 1] - ys[i]) / h0);
        }
        for i in 1..interior {
            let w = h[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        for i in (0..interior).rev() {
            let next = if i + 1 < interior { m[i + 2] } else { 0.0 };
            m[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
        }
        Ok(Self {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            m,
        })
    }

    pub fn span(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    fn segment(&self, x: f64) -> Result<usize> {
        let (lo, hi) = self.span();
        ensure(x >= lo && x <= hi, || {
            Error::Domain(format!("t = {x} is outside the knot span [{lo}, {hi}]"))
        })?;
        let idx = self.xs.partition_point(|&k| k <= x);
        Ok(idx.saturating_sub(1).min(self.xs.len() - 2))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let i = self.segment(x)?;
        if x == self.xs[i] {
            return Ok(self.ys[i]);
        }
        if x == self.xs[i + 1] {
            return Ok(self.ys[i + 1]);
        }
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        Ok(a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let i = self.segment(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        Ok((self.ys[i + 1] - self.ys[i]) / h
            - (3.0 * a * a - 1.0) / 6.0 * h * self.m[i]
            + (3.0 * b * b - 1.0) / 6.0 * h * self.m[i + 1])
    }
}

/// A quasicontinuous variance value; `clamped` is set when the spline dipped
/// below zero between nonnegative knots and was clamped to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VarianceSample {
    pub value: f64,
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceTriple {
    knot_times: Vec<f64>,
    h1: Vec<f64>,
    h2: NaturalCubicSpline,
}

impl VarianceTriple {
    pub fn knot_times(&self) -> &[f64] {
        &self.knot_times
    }

    /// Discrete per-interval variances.
    pub fn h1(&self) -> &[f64] {
        &self.h1
    }

    /// Quasicontinuous variance; exactly `h1` at the knots.
    pub fn h2(&self, t: f64) -> Result<VarianceSample> {
        let v = self.h2.value(t)?;
        Ok(VarianceSample {
            value: v.max(0.0),
            clamped: v < 0.0,
        })
    }

    /// Time derivative of `h2` (unclamped).
    pub fn h2_rate(&self, t: f64) -> Result<f64> {
        self.h2.derivative(t)
    }

    /// Continuous variance, approximated by `h2` on the knot span.
    pub fn h0(&self, t: f64) -> Result<f64> {
        self.h2(t).map(|s| s.value)
    }
}

pub fn interpolate_variance(knot_times: &[f64], h1_values: &[f64]) -> Result<VarianceTriple> {
    if let Some(bad) = h1_values.iter().find(|v| v.is_nan() || **v < 0.0) {
        return Err(Error::Domain(format!("variance {bad} is negative")));
    }
    let h2 = NaturalCubicSpline::new(knot_times, h1_values)?;
    Ok(VarianceTriple {
        knot_times: knot_times.to_vec(),
        h1: h1_values.to_vec(),
        h2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reproduces_linear_data() {
        let ts: Vec<f64> = (0..8).map(|i| i as f64 * 0.7).collect();
        let hs: Vec<f64> = ts.iter().map(|t| 2.0 + 3.0 * t).collect();
        let tri = interpolate_variance(&ts, &hs).unwrap();
        let span = ts[7];
        for j in 0..=100 {
            let t = span * j as f64 / 100.0;
            let v = tri.h2(t).unwrap();
            assert!((v.value - (2.0 + 3.0 * t)).abs() < 1e-12, "t = {t}");
            assert!(!v.clamped);
            assert!((tri.h2_rate(t).unwrap() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cosh_midpoint_error() {
        let ts: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let hs: Vec<f64> = ts.iter().map(|t| (2.0 * t).cosh()).collect();
        let tri = interpolate_variance(&ts, &hs).unwrap();
        let errs: Vec<f64> = ts
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                (tri.h2(mid).unwrap().value - (2.0 * mid).cosh()).abs()
            })
            .collect();
        // The natural end condition h2'' = 0 misses cosh'' = 4 cosh(2t); the
        // error decays away from the ends but is O(dt^2 |h''| / 8) in the
        // last two intervals on each side.
        let interior = errs[2..errs.len() - 2].iter().fold(0.0f64, |m, e| m.max(*e));
        assert!(interior < 1e-3, "interior midpoint error {interior}");
        let ends = errs.iter().fold(0.0f64, |m, e| m.max(*e));
        assert!(ends < 0.1 * 0.1 * 4.0 * 2f64.cosh() / 8.0, "end-interval error {ends}");
    }

    #[test]
    fn negative_excursions_are_clamped() {
        let ts = [0.0, 1.0, 2.0, 3.0, 4.0];
        let hs = [0.0, 0.0, 5.0, 0.0, 0.0];
        let tri = interpolate_variance(&ts, &hs).unwrap();
        let dip = (0..=40)
            .map(|j| tri.h2(j as f64 * 0.1).unwrap())
            .find(|s| s.clamped)
            .expect("the spline undershoots next to the spike");
        assert_eq!(dip.value, 0.0);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            interpolate_variance(&[0.0, 2.0, 1.0], &[1.0, 1.0, 1.0]),
            Err(Error::Ordering(_))
        ));
        assert!(matches!(interpolate_variance(&[0.0, 1.0], &[1.0, 1.0]), Err(Error::Size(_))));
        assert!(matches!(
            interpolate_variance(&[0.0, 1.0, 2.0], &[1.0, -1.0, 1.0]),
            Err(Error::Domain(_))
        ));
        let tri = interpolate_variance(&[0.0, 1.0, 2.0], &[1.0, 2.0, 1.0]).unwrap();
        assert!(matches!(tri.h2(2.5), Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn interpolation_condition_is_exact(
            gaps in proptest::collection::vec(0.01f64..5.0, 2..40),
            seed_values in proptest::collection::vec(0.0f64..10.0, 41),
        ) {
            let mut ts = vec![0.0];
            for g in &gaps {
                ts.push(ts.last().unwrap() + g);
            }
            let hs = &seed_values[..ts.len()];
            let tri = interpolate_variance(&ts, hs).unwrap();
            for (t, h) in ts.iter().zip(hs) {
                prop_assert_eq!(tri.h2(*t).unwrap().value, *h);
            }
        }
    }
}
