use serde::Serialize;

use crate::empirical::weighted_line_fit;
use crate::error::{ensure, Error, Result};

/// Fewest samples a segment may hold.
pub const MIN_SEGMENT_SAMPLES: usize = 50;

/// Log-spaced histogram bins per segment.
pub const BINS_PER_SEGMENT: usize = 20;

// bins with fewer counts are too noisy for the log-density regression
const MIN_BIN_COUNT: usize = 5;

/// Log-log density slopes on the segments `[min, b1), [b1, b2), ..., [bk, max]`.
/// A slope `s` corresponds to the density exponent `xi = -s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeSlopes {
    pub breakpoints: Vec<f64>,
    pub slopes: Vec<f64>,
    pub slope_errors: Vec<f64>,
    /// Fitted `ln density` at `ln x = 0` per segment; the density is
    /// normalized over the whole sample.
    pub intercepts: Vec<f64>,
    /// `(lo, hi)` of each segment.
    pub bounds: Vec<(f64, f64)>,
    pub counts: Vec<usize>,
    /// Regression-weighted mean of `ln x` per segment, where the fitted
    /// level is best determined.
    pub centroids: Vec<f64>,
}

impl RegimeSlopes {
    /// Fitted density and its abscissa at the centroid of segment `i`.
    pub fn density_at_centroid(&self, i: usize) -> (f64, f64) {
        let ln_x = self.centroids[i];
        (ln_x.exp(), (self.intercepts[i] + self.slopes[i] * ln_x).exp())
    }
}

pub fn regime_slopes(samples: &[f64], breakpoints: &[f64]) -> Result<RegimeSlopes> {
    if let Some(bad) = samples.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::Domain(format!("sample {bad} is not strictly positive")));
    }
    ensure(breakpoints.windows(2).all(|w| w[1] > w[0]), || {
        Error::Ordering("breakpoints must be strictly increasing".into())
    })?;
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let total = sorted.len();
    ensure(total >= MIN_SEGMENT_SAMPLES, || {
        Error::SegmentSize(format!("{total} samples; at least {MIN_SEGMENT_SAMPLES} required"))
    })?;
    let (min, max) = (sorted[0], sorted[total - 1]);
    ensure(breakpoints.iter().all(|&b| b > min && b < max), || {
        Error::Config(format!("breakpoints must lie inside the sample range ({min}, {max})"))
    })?;

    let mut edges = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(min);
    edges.extend_from_slice(breakpoints);
    edges.push(max);

    let mut out = RegimeSlopes {
        breakpoints: breakpoints.to_vec(),
        slopes: Vec::new(),
        slope_errors: Vec::new(),
        intercepts: Vec::new(),
        bounds: Vec::new(),
        counts: Vec::new(),
        centroids: Vec::new(),
    };
    let segments = edges.len() - 1;
    for s in 0..segments {
        let (lo, hi) = (edges[s], edges[s + 1]);
        let last = s + 1 == segments;
        let start = sorted.partition_point(|&x| x < lo);
        let end = if last { total } else { sorted.partition_point(|&x| x < hi) };
        let seg = &sorted[start..end];
        ensure(seg.len() >= MIN_SEGMENT_SAMPLES, || {
            Error::SegmentSize(format!(
                "segment [{lo}, {hi}] holds {} samples; at least {MIN_SEGMENT_SAMPLES} required",
                seg.len()
            ))
        })?;

        let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
        let width = (ln_hi - ln_lo) / BINS_PER_SEGMENT as f64;
        let mut counts = [0usize; BINS_PER_SEGMENT];
        for &x in seg {
            let k = ((x.ln() - ln_lo) / width) as usize;
            counts[k.min(BINS_PER_SEGMENT - 1)] += 1;
        }
        let (mut xs, mut ys, mut ws) = (Vec::new(), Vec::new(), Vec::new());
        for (k, &c) in counts.iter().enumerate() {
            if c < MIN_BIN_COUNT {
                continue;
            }
            let a = (ln_lo + width * k as f64).exp();
            let b = (ln_lo + width * (k + 1) as f64).exp();
            let density = c as f64 / (total as f64 * (b - a));
            xs.push(0.5 * (a.ln() + b.ln()));
            ys.push(density.ln());
            // Poisson counts: var(ln c) ~ 1 / c
            ws.push(c as f64);
        }
        let fit = weighted_line_fit(&xs, &ys, &ws, true).ok_or_else(|| {
            Error::SegmentSize(format!(
                "segment [{lo}, {hi}] has {} populated bins; at least 3 required",
                xs.len()
            ))
        })?;
        out.slopes.push(fit.slope);
        out.slope_errors.push(fit.slope_std_error);
        out.intercepts.push(fit.intercept);
        out.bounds.push((lo, hi));
        out.counts.push(seg.len());
        let wsum: f64 = ws.iter().sum();
        out.centroids
            .push(xs.iter().zip(&ws).map(|(x, w)| x * w).sum::<f64>() / wsum);
    }
    Ok(out)
}

/// Constant-acceleration parameters read off the two outer regimes of a
/// displacement density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinematicCrossover {
    pub v0: f64,
    pub accel: f64,
    /// `2 v0 / accel`, the interval at which both displacement terms match.
    pub crossover_interval: f64,
}

/// With `dt` uniform on `(0, dt_max]`, small displacements have the flat
/// density `1 / (v0 dt_max)` and large ones `K dS^-1/2` with
/// `K = 1 / (dt_max sqrt(2 accel))`. The first segment gives `v0`, the last
/// gives `accel`.
pub fn kinematic_crossover(slopes: &RegimeSlopes, dt_max: f64) -> Result<KinematicCrossover> {
    ensure(slopes.slopes.len() >= 2, || {
        Error::Config("need at least two segments".into())
    })?;
    ensure(dt_max > 0.0, || Error::Config(format!("dt_max = {dt_max} must be > 0")))?;
    let last = slopes.slopes.len() - 1;
    let (_, flat) = slopes.density_at_centroid(0);
    let (x, p) = slopes.density_at_centroid(last);
    let k = p * x.sqrt();
    let v0 = 1.0 / (dt_max * flat);
    let accel = 1.0 / (2.0 * (k * dt_max).powi(2));
    Ok(KinematicCrossover {
        v0,
        accel,
        crossover_interval: 2.0 * v0 / accel,
    })
}
