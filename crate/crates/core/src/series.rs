//! Price and log-return series.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Relative tolerance used when checking that a grid is uniform or that a
/// requested interval is an integer multiple of the native spacing.
pub const SPACING_RTOL: f64 = 1e-9;

/// Timestamped strictly positive prices on strictly increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    times: Vec<f64>,
    prices: Vec<f64>,
}

impl PriceSeries {
    pub fn new(times: Vec<f64>, prices: Vec<f64>) -> Result<Self> {
        ensure(times.len() == prices.len(), || {
            Error::Size(format!(
                "{} times but {} prices",
                times.len(),
                prices.len()
            ))
        })?;
        ensure(times.iter().all(|t| t.is_finite()), || {
            Error::Domain("non-finite timestamp".into())
        })?;
        ensure(times.windows(2).all(|w| w[1] > w[0]), || {
            Error::Ordering("timestamps must be strictly increasing".into())
        })?;
        if let Some(bad) = prices.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::Domain(format!("price {bad} is not strictly positive")));
        }
        Ok(Self { times, prices })
    }

    /// Uniform grid `t0, t0 + dt, ...` with one timestamp per price.
    pub fn on_grid(t0: f64, dt: f64, prices: Vec<f64>) -> Result<Self> {
        ensure(dt > 0.0, || Error::Spacing(format!("dt = {dt} must be positive")))?;
        let times = (0..prices.len()).map(|i| t0 + dt * i as f64).collect();
        Self::new(times, prices)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// Spacing of a uniform grid, or a spacing error if the grid is not
    /// uniform to [`SPACING_RTOL`].
    pub fn uniform_spacing(&self) -> Result<f64> {
        ensure(self.len() >= 2, || {
            Error::Size("at least two observations are needed".into())
        })?;
        let span = self.times[self.len() - 1] - self.times[0];
        let dt = span / (self.len() - 1) as f64;
        for w in self.times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > SPACING_RTOL * dt.max(span * f64::EPSILON) {
                return Err(Error::Spacing(format!(
                    "non-uniform spacing: step {} vs mean {dt}",
                    w[1] - w[0]
                )));
            }
        }
        Ok(dt)
    }

    /// Log-returns over an interval `dt` that must be a positive integer
    /// multiple of the native spacing.
    pub fn log_returns(&self, dt: f64) -> Result<ReturnSeries> {
        let native = self.uniform_spacing()?;
        ensure(dt > 0.0 && dt.is_finite(), || {
            Error::Spacing(format!("dt = {dt} must be positive"))
        })?;
        let ratio = dt / native;
        let lag = ratio.round();
        ensure(lag >= 1.0 && (ratio - lag).abs() <= SPACING_RTOL * ratio, || {
            Error::Spacing(format!(
                "dt = {dt} is not an integer multiple of the native spacing {native}"
            ))
        })?;
        let lag = lag as usize;
        ensure(lag < self.len(), || {
            Error::Size(format!("lag {lag} leaves no returns in a series of {}", self.len()))
        })?;
        let logs: Vec<f64> = self.prices.iter().map(|p| p.ln()).collect();
        let returns = logs[lag..]
            .iter()
            .zip(&logs)
            .map(|(later, earlier)| later - earlier)
            .collect();
        ReturnSeries::new(self.times[lag..].to_vec(), returns, dt)
    }
}

/// Log-returns `ln p(t) - ln p(t - dt)`, stamped at the end of each interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    times: Vec<f64>,
    returns: Vec<f64>,
    dt: f64,
}

impl ReturnSeries {
    pub fn new(times: Vec<f64>, returns: Vec<f64>, dt: f64) -> Result<Self> {
        ensure(dt > 0.0 && dt.is_finite(), || {
            Error::Spacing(format!("dt = {dt} must be positive"))
        })?;
        ensure(times.len() == returns.len(), || {
            Error::Size(format!(
                "{} times but {} returns",
                times.len(),
                returns.len()
            ))
        })?;
        ensure(times.windows(2).all(|w| w[1] > w[0]), || {
            Error::Ordering("timestamps must be strictly increasing".into())
        })?;
        ensure(returns.iter().all(|r| r.is_finite()), || {
            Error::Domain("non-finite return".into())
        })?;
        Ok(Self { times, returns, dt })
    }

    /// Returns stamped `dt, 2 dt, ...`.
    pub fn from_values(returns: Vec<f64>, dt: f64) -> Result<Self> {
        let times = (1..=returns.len()).map(|i| dt * i as f64).collect();
        Self::new(times, returns, dt)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn returns(&self) -> &[f64] {
        &self.returns
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.returns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.returns.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.returns)
    }

    /// Cumulative exponentiation back to prices, starting from `p0` one
    /// interval before the first return.
    pub fn to_prices(&self, p0: f64) -> Result<PriceSeries> {
        let mut prices = Vec::with_capacity(self.len() + 1);
        let mut log_p = p0.ln();
        prices.push(p0);
        for r in &self.returns {
            log_p += r;
            prices.push(log_p.exp());
        }
        let t0 = self.times.first().map_or(0.0, |t| t - self.dt);
        let mut times = Vec::with_capacity(prices.len());
        times.push(t0);
        times.extend_from_slice(&self.times);
        PriceSeries::new(times, prices)
    }
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance; zero for fewer than two values.
pub(crate) fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    #[test]
    fn unit_log_returns_of_exponential_prices() {
        let s = PriceSeries::on_grid(0.0, 1.0, vec![1.0, E, E * E]).unwrap();
        let r = s.log_returns(1.0).unwrap();
        assert_eq!(r.len(), 2);
        for x in r.returns() {
            assert!((x - 1.0).abs() < 1e-15);
        }
        assert_eq!(r.times(), &[1.0, 2.0]);
    }

    #[test]
    fn constant_prices_give_zero_returns() {
        let s = PriceSeries::on_grid(0.0, 1.0, vec![5.0; 4]).unwrap();
        assert_eq!(s.log_returns(1.0).unwrap().returns(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn multiple_of_native_spacing() {
        let s = PriceSeries::on_grid(0.0, 0.5, vec![1.0, 2.0, 4.0, 8.0, 16.0]).unwrap();
        let r = s.log_returns(1.0).unwrap();
        assert_eq!(r.len(), 3);
        for x in r.returns() {
            assert!((x - 4f64.ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_spacing_and_prices() {
        let s = PriceSeries::on_grid(0.0, 1.0, vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(s.log_returns(1.5), Err(Error::Spacing(_))));
        assert!(matches!(s.log_returns(-1.0), Err(Error::Spacing(_))));
        assert!(matches!(
            PriceSeries::on_grid(0.0, 1.0, vec![1.0, 0.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            PriceSeries::on_grid(0.0, 1.0, vec![1.0, -2.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            PriceSeries::new(vec![0.0, 0.0], vec![1.0, 1.0]),
            Err(Error::Ordering(_))
        ));
        let nonuniform = PriceSeries::new(vec![0.0, 1.0, 3.0], vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(nonuniform.log_returns(1.0), Err(Error::Spacing(_))));
    }

    proptest! {
        #[test]
        fn cumulative_exponentiation_roundtrip(
            rets in proptest::collection::vec(-0.5f64..0.5, 1..200),
            p0 in 0.01f64..1000.0,
        ) {
            let r = ReturnSeries::from_values(rets.clone(), 1.0).unwrap();
            let back = r.to_prices(p0).unwrap().log_returns(1.0).unwrap();
            for (a, b) in rets.iter().zip(back.returns()) {
                let scale = a.abs().max(1e-300);
                // absolute error is bounded by the log of the price level
                prop_assert!((a - b).abs() <= 1e-12 * scale.max(p0.ln().abs() + 1.0));
            }
        }
    }
}
