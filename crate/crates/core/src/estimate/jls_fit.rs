//! Log-periodic power-law fitting,
//! `ln p(t) = A + B (t_c - t)^m + C (t_c - t)^m cos(omega ln(t_c - t) - phi)`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, SMatrix, SVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::series::PriceSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JlsParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub t_c: f64,
    pub m: f64,
    pub omega: f64,
    pub phi: f64,
}

impl JlsParams {
    /// `|C| <= |B|` keeps the hazard nonnegative; recommended, not enforced.
    pub fn oscillation_bounded(&self) -> bool {
        self.c.abs() <= self.b.abs()
    }
}

pub fn jls_evaluate(params: &JlsParams, t: f64) -> Result<f64> {
    ensure(t < params.t_c, || {
        Error::Domain(format!("t = {t} is not before t_c = {}", params.t_c))
    })?;
    let tau = params.t_c - t;
    let f = tau.powf(params.m);
    Ok(params.a + params.b * f + params.c * f * (params.omega * tau.ln() - params.phi).cos())
}

/// Grid of the nonlinear parameters. Each range is sampled with inclusive
/// endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JlsSearch {
    pub t_c: (f64, f64),
    pub t_c_points: usize,
    pub m: (f64, f64),
    pub m_points: usize,
    pub omega: (f64, f64),
    pub omega_points: usize,
}

impl JlsSearch {
    /// `t_c` over `(last + span/100, last + span/2)`, `m` over
    /// `[0.05, 0.95]` and `omega` over `[2, 20]` with 50, 15 and 30 points.
    pub fn default_for(series: &PriceSeries) -> Self {
        let times = series.times();
        let first = times.first().copied().unwrap_or(0.0);
        let last = times.last().copied().unwrap_or(0.0);
        let span = (last - first).max(f64::MIN_POSITIVE);
        Self {
            t_c: (last + 0.01 * span, last + 0.5 * span),
            t_c_points: 50,
            m: (0.05, 0.95),
            m_points: 15,
            omega: (2.0, 20.0),
            omega_points: 30,
        }
    }

    pub fn size(&self) -> (usize, usize, usize) {
        (self.t_c_points, self.m_points, self.omega_points)
    }

    fn validate(&self, last: f64) -> Result<()> {
        ensure(self.t_c.0 > last && self.t_c.1 >= self.t_c.0, || {
            Error::Config(format!(
                "t_c range [{}, {}] must lie strictly after the last observation {last}",
                self.t_c.0, self.t_c.1
            ))
        })?;
        ensure(self.m.0 > 0.0 && self.m.1 < 1.0 && self.m.1 >= self.m.0, || {
            Error::Config(format!("m range [{}, {}] must lie in (0, 1)", self.m.0, self.m.1))
        })?;
        ensure(self.omega.0 > 0.0 && self.omega.1 >= self.omega.0, || {
            Error::Config(format!(
                "omega range [{}, {}] must be positive",
                self.omega.0, self.omega.1
            ))
        })?;
        ensure(
            self.t_c_points > 0 && self.m_points > 0 && self.omega_points > 0,
            || Error::Config("grid counts must be positive".into()),
        )
    }
}

fn linspace((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JlsFit {
    pub params: JlsParams,
    pub rmse: f64,
    pub search_grid_size: (usize, usize, usize),
    /// Grid points dropped for a rank-deficient design.
    pub skipped_points: usize,
    pub oscillation_bounded: bool,
}

/// Linear coefficients `(A, B, C cos phi, C sin phi)` for fixed nonlinear
/// parameters; `None` when the design is rank deficient.
fn solve_linear(ts: &[f64], ys: &[f64], t_c: f64, m: f64, omega: f64) -> Option<([f64; 4], f64)> {
    let n = ts.len();
    let design = DMatrix::from_fn(n, 4, |i, j| {
        let tau = t_c - ts[i];
        let f = tau.powf(m);
        match j {
            0 => 1.0,
            1 => f,
            2 => f * (omega * tau.ln()).cos(),
            _ => f * (omega * tau.ln()).sin(),
        }
    });
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax.is_nan() || smax <= 0.0 || smin < 1e-12 * smax {
        return None;
    }
    let y = DVector::from_column_slice(ys);
    let beta = svd.solve(&y, 0.0).ok()?;
    let rss = (&design * &beta - &y).norm_squared();
    Some(([beta[0], beta[1], beta[2], beta[3]], rss))
}

/// Full parameter vector `(A, B, C1, C2, t_c, m, omega)` for the local
/// polish, with `C cos(w g - phi) = C1 cos(w g) + C2 sin(w g)`.
type Full = SVector<f64, 7>;

fn residuals_and_jacobian(ts: &[f64], ys: &[f64], p: &Full) -> (f64, SMatrix<f64, 7, 7>, Full) {
    let (a, b, c1, c2, t_c, m, omega) = (p[0], p[1], p[2], p[3], p[4], p[5], p[6]);
    let mut jtj = SMatrix::<f64, 7, 7>::zeros();
    let mut jtr = Full::zeros();
    let mut rss = 0.0;
    for (&t, &y) in ts.iter().zip(ys) {
        let tau = t_c - t;
        let g = tau.ln();
        let f = tau.powf(m);
        let (s, c) = (omega * g).sin_cos();
        let osc = b + c1 * c + c2 * s;
        let dosc = -c1 * s + c2 * c;
        let r = a + f * osc - y;
        let row = Full::from([
            1.0,
            f,
            f * c,
            f * s,
            m * f / tau * osc + f * omega / tau * dosc,
            g * f * osc,
            f * g * dosc,
        ]);
        rss += r * r;
        jtj += row * row.transpose();
        jtr += row * r;
    }
    (rss, jtj, jtr)
}

fn rss_of(ts: &[f64], ys: &[f64], p: &Full) -> f64 {
    ts.iter()
        .zip(ys)
        .map(|(&t, &y)| {
            let tau = p[4] - t;
            let f = tau.powf(p[5]);
            let (s, c) = (p[6] * tau.ln()).sin_cos();
            let r = p[0] + f * (p[1] + p[2] * c + p[3] * s) - y;
            r * r
        })
        .sum()
}

/// Levenberg-Marquardt on all seven parameters; steps that leave
/// `t_c > last, 0 < m < 1, omega > 0` are rejected like uphill steps.
fn polish(ts: &[f64], ys: &[f64], start: Full, last: f64) -> (Full, f64) {
    let feasible = |p: &Full| p[4] > last && p[5] > 0.0 && p[5] < 1.0 && p[6] > 0.0;
    let mut p = start;
    let (mut rss, mut jtj, mut jtr) = residuals_and_jacobian(ts, ys, &p);
    let mut lambda = 1e-3;
    for _ in 0..500 {
        let mut damped = jtj;
        for i in 0..7 {
            damped[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
        }
        let Some(step) = damped.lu().solve(&(-jtr)) else {
            lambda *= 10.0;
            continue;
        };
        let trial = p + step;
        let trial_rss = if feasible(&trial) { rss_of(ts, ys, &trial) } else { f64::INFINITY };
        if trial_rss < rss {
            let gain = rss - trial_rss;
            p = trial;
            (rss, jtj, jtr) = residuals_and_jacobian(ts, ys, &p);
            lambda = (lambda * 0.3).max(1e-12);
            if gain <= 1e-15 * rss.max(1e-300) || rss == 0.0 {
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    (p, rss)
}

// (rss, [t_c, m, omega], linear coefficients)
type GridBest = (f64, [f64; 3], [f64; 4]);

/// Grid search over `(t_c, m, omega)` with the four linear coefficients
/// profiled out by least squares, followed by a local polish of the best
/// grid point.
pub fn jls_fit(series: &PriceSeries, search: &JlsSearch) -> Result<JlsFit> {
    ensure(series.len() >= 30, || {
        Error::SampleSize(format!("{} observations; at least 30 required", series.len()))
    })?;
    let ts = series.times();
    let last = ts[ts.len() - 1];
    search.validate(last)?;
    let ys: Vec<f64> = series.prices().iter().map(|p| p.ln()).collect();

    let tcs = linspace(search.t_c, search.t_c_points);
    let ms = linspace(search.m, search.m_points);
    let omegas = linspace(search.omega, search.omega_points);

    // per-t_c best, reduced in grid order so the result is thread-count independent
    let per_tc: Vec<(Option<GridBest>, usize)> = tcs
        .par_iter()
        .map(|&t_c| {
            let mut best: Option<GridBest> = None;
            let mut skipped = 0;
            for &m in &ms {
                for &omega in &omegas {
                    match solve_linear(ts, &ys, t_c, m, omega) {
                        Some((lin, rss)) => {
                            if best.as_ref().is_none_or(|b| rss < b.0) {
                                best = Some((rss, [t_c, m, omega], lin));
                            }
                        }
                        None => skipped += 1,
                    }
                }
            }
            (best, skipped)
        })
        .collect();
    let skipped_points: usize = per_tc.iter().map(|(_, s)| s).sum();
    let (_, nonlin, lin) = per_tc
        .into_iter()
        .filter_map(|(b, _)| b)
        .reduce(|acc, b| if b.0 < acc.0 { b } else { acc })
        .ok_or_else(|| Error::Fit("every grid point had a rank-deficient design".into()))?;

    let start = Full::from([lin[0], lin[1], lin[2], lin[3], nonlin[0], nonlin[1], nonlin[2]]);
    let (p, rss) = polish(ts, &ys, start, last);
    let c = p[2].hypot(p[3]);
    let phi = p[3].atan2(p[2]).rem_euclid(TAU);
    let params = JlsParams {
        a: p[0],
        b: p[1],
        c,
        t_c: p[4],
        m: p[5],
        omega: p[6],
        phi,
    };
    Ok(JlsFit {
        rmse: (rss / ts.len() as f64).sqrt(),
        search_grid_size: search.size(),
        skipped_points,
        oscillation_bounded: params.oscillation_bounded(),
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;

    const TRUTH: JlsParams = JlsParams {
        a: 5.0,
        b: -1.0,
        c: 0.2,
        t_c: 100.0,
        m: 0.5,
        omega: 8.0,
        phi: 1.0,
    };

    fn synthetic(params: &JlsParams, noise: f64, seed: u64) -> PriceSeries {
        let mut rng = RandomSource::named(seed, "test.jls_noise");
        let ts: Vec<f64> = (0..=95).map(f64::from).collect();
        let ps = ts
            .iter()
            .map(|&t| (jls_evaluate(params, t).unwrap() + noise * rng.standard_normal()).exp())
            .collect();
        PriceSeries::new(ts, ps).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let p = JlsParams { phi: 0.0, ..TRUTH };
        assert!((jls_evaluate(&p, 99.0).unwrap() - 4.2).abs() < 1e-12);
        let flat = JlsParams { b: 0.0, c: 0.0, ..TRUTH };
        assert_eq!(jls_evaluate(&flat, 3.0).unwrap(), 5.0);
        let no_osc = JlsParams { c: 0.0, ..TRUTH };
        assert!((jls_evaluate(&no_osc, 100.0 - 1e-12).unwrap() - 5.0).abs() < 1e-5);
        assert!(matches!(jls_evaluate(&p, 100.0), Err(Error::Domain(_))));
    }

    #[test]
    fn noiseless_recovery() {
        let series = synthetic(&TRUTH, 0.0, 0);
        let fit = jls_fit(&series, &JlsSearch::default_for(&series)).unwrap();
        assert!(fit.rmse < 1e-8, "rmse {}", fit.rmse);
        assert!((fit.params.t_c - 100.0).abs() < 0.5, "{:?}", fit.params);
        assert!((fit.params.phi - 1.0).abs() < 1e-4);
    }

    #[test]
    fn pure_power_law_has_no_oscillation() {
        let p = JlsParams { c: 0.0, ..TRUTH };
        let series = synthetic(&p, 0.01, 3);
        let fit = jls_fit(&series, &JlsSearch::default_for(&series)).unwrap();
        assert!(fit.params.c < 3.0 * fit.rmse, "{:?} rmse {}", fit.params, fit.rmse);
    }

    #[test]
    fn rejects_short_series_and_bad_range() {
        let ts: Vec<f64> = (0..10).map(f64::from).collect();
        let s = PriceSeries::new(ts, vec![1.0; 10]).unwrap();
        assert!(matches!(jls_fit(&s, &JlsSearch::default_for(&s)), Err(Error::SampleSize(_))));
        let series = synthetic(&TRUTH, 0.0, 0);
        let mut search = JlsSearch::default_for(&series);
        search.t_c.0 = 95.0;
        assert!(matches!(jls_fit(&series, &search), Err(Error::Config(_))));
    }
}
