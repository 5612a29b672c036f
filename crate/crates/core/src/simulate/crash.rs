//! Crash hazard rates and log-periodic bubble paths with a single crash.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::rng::RandomSource;
use crate::series::PriceSeries;

/// Log-periodic hazard
/// `h(t) = B'(tc - t)^(m-1) + C'(tc - t)^(m-1) cos(omega ln(tc - t) - phi')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HazardParams {
    pub b_prime: f64,
    pub c_prime: f64,
    pub m: f64,
    pub omega: f64,
    pub phi_prime: f64,
    pub t_c: f64,
    /// Set only through [`HazardParams::exploratory`]: allows `|C'| > B'` and
    /// clamps negative rates to zero.
    #[serde(default)]
    pub clamp_negative: bool,
}

impl HazardParams {
    pub fn new(b_prime: f64, c_prime: f64, m: f64, omega: f64, phi_prime: f64, t_c: f64) -> Result<Self> {
        let hz = Self {
            b_prime,
            c_prime,
            m,
            omega,
            phi_prime,
            t_c,
            clamp_negative: false,
        };
        hz.validate()?;
        Ok(hz)
    }

    /// Skips the `|C'| <= B'` check; evaluation clamps at zero instead.
    pub fn exploratory(b_prime: f64, c_prime: f64, m: f64, omega: f64, phi_prime: f64, t_c: f64) -> Result<Self> {
        let hz = Self {
            b_prime,
            c_prime,
            m,
            omega,
            phi_prime,
            t_c,
            clamp_negative: true,
        };
        hz.validate()?;
        Ok(hz)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.m > 0.0 && self.m < 1.0, || {
            Error::Config(format!("m = {} must lie in (0, 1)", self.m))
        })?;
        ensure(self.omega > 0.0, || {
            Error::Config(format!("omega = {} must be > 0", self.omega))
        })?;
        ensure(self.b_prime >= 0.0, || {
            Error::Config(format!("B' = {} must be >= 0", self.b_prime))
        })?;
        ensure(
            [self.c_prime, self.phi_prime, self.t_c].iter().all(|x| x.is_finite()),
            || Error::Config("non-finite hazard parameter".into()),
        )?;
        ensure(self.clamp_negative || self.c_prime.abs() <= self.b_prime, || {
            Error::Constraint(format!(
                "|C'| = {} exceeds B' = {}; the hazard would go negative",
                self.c_prime.abs(),
                self.b_prime
            ))
        })
    }
}

/// Crash hazard rate at `t < t_c`.
pub fn hazard_rate(hz: &HazardParams, t: f64) -> Result<f64> {
    ensure(t < hz.t_c, || {
        Error::Domain(format!("t = {t} is not before the critical time {}", hz.t_c))
    })?;
    let x = hz.t_c - t;
    let power = x.powf(hz.m - 1.0);
    let h = hz.b_prime * power + hz.c_prime * power * (hz.omega * x.ln() - hz.phi_prime).cos();
    // |C'| <= B' makes h >= 0 analytically; the clamp only removes rounding
    // residue, or real negatives in exploratory mode.
    Ok(h.max(0.0))
}

/// Hazard driving the crash jump of a bubble path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CrashHazard {
    LogPeriodic(HazardParams),
    /// Time-independent rate, e.g. a mixed crash intensity.
    Constant(f64),
}

impl CrashHazard {
    pub fn rate_at(&self, t: f64) -> Result<f64> {
        match self {
            CrashHazard::LogPeriodic(hz) => hazard_rate(hz, t),
            CrashHazard::Constant(h) => Ok(*h),
        }
    }

    pub fn critical_time(&self) -> Option<f64> {
        match self {
            CrashHazard::LogPeriodic(hz) => Some(hz.t_c),
            CrashHazard::Constant(_) => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            CrashHazard::LogPeriodic(hz) => hz.validate(),
            CrashHazard::Constant(h) => ensure(*h >= 0.0 && h.is_finite(), || {
                Error::Config(format!("constant hazard {h} must be >= 0"))
            }),
        }
    }
}

/// `dp/p = mu dt + sigma dW - k dj` with `mu(t) = k h(t)` before the crash.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JlsPathConfig {
    pub hazard: CrashHazard,
    /// Crash amplitude: the price is multiplied by `1 - k` on the jump.
    pub k: f64,
    pub sigma: f64,
    pub p0: f64,
    pub t0: f64,
    pub n: usize,
    pub dt: f64,
}

impl JlsPathConfig {
    pub fn end_time(&self) -> f64 {
        self.t0 + self.dt * self.n as f64
    }

    pub fn validate(&self) -> Result<()> {
        self.hazard.validate()?;
        ensure(self.k > 0.0 && self.k < 1.0 || self.k == 0.0, || {
            Error::Config(format!("k = {} must lie in [0, 1)", self.k))
        })?;
        ensure(self.sigma >= 0.0, || {
            Error::Config(format!("sigma = {} must be >= 0", self.sigma))
        })?;
        ensure(self.p0 > 0.0, || Error::Config(format!("p0 = {} must be > 0", self.p0)))?;
        ensure(self.n >= 1, || Error::Config("n must be >= 1".into()))?;
        ensure(self.dt > 0.0, || Error::Config(format!("dt = {} must be > 0", self.dt)))?;
        if let Some(t_c) = self.hazard.critical_time() {
            ensure(self.end_time() <= t_c, || {
                Error::Domain(format!(
                    "grid ends at {} which is past the critical time {t_c}",
                    self.end_time()
                ))
            })?;
        }
        Ok(())
    }

    /// Pre-crash hazard on each step's left endpoint; rejects grids where
    /// `h dt >= 0.5` anywhere.
    fn step_hazards(&self) -> Result<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                let t = self.t0 + self.dt * i as f64;
                let h = self.hazard.rate_at(t)?;
                ensure(h * self.dt < 0.5, || {
                    Error::Resolution(format!(
                        "h(t) dt = {} at t = {t}; refine dt below {}",
                        h * self.dt,
                        0.5 / h
                    ))
                })?;
                Ok(h)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JlsPath {
    pub series: PriceSeries,
    /// End of the step in which the crash happened.
    pub crash_time: Option<f64>,
}

/// One bubble path on `t0, t0 + dt, ..., t0 + n dt`.
///
/// Each step draws a normal innovation and a uniform variate. The crash fires
/// with probability `h(t) dt`; afterwards the hazard and drift are zero and
/// the path continues as driftless log-normal diffusion. Diffusion steps are
/// exact in log space.
pub fn jls_path(cfg: &JlsPathConfig, rng: &mut RandomSource) -> Result<JlsPath> {
    cfg.validate()?;
    let hazards = cfg.step_hazards()?;
    let sqrt_dt = cfg.dt.sqrt();
    let mut log_p = cfg.p0.ln();
    let mut prices = Vec::with_capacity(cfg.n + 1);
    prices.push(cfg.p0);
    let mut crash_time = None;
    for (i, &h) in hazards.iter().enumerate() {
        let z = rng.standard_normal();
        let u = rng.uniform();
        let h = if crash_time.is_some() { 0.0 } else { h };
        let mu = cfg.k * h;
        log_p += (mu - 0.5 * cfg.sigma * cfg.sigma) * cfg.dt + cfg.sigma * sqrt_dt * z;
        if crash_time.is_none() && u < h * cfg.dt {
            log_p += (1.0 - cfg.k).ln();
            crash_time = Some(cfg.t0 + cfg.dt * (i + 1) as f64);
        }
        prices.push(log_p.exp());
    }
    Ok(JlsPath {
        series: PriceSeries::on_grid(cfg.t0, cfg.dt, prices)?,
        crash_time,
    })
}

/// Fraction of `paths` independent bubble paths that crash before the end of
/// the grid. Path `i` uses stream `i` of the `"simulate.jls"` family, so the
/// result does not depend on the number of worker threads.
pub fn crash_fraction(cfg: &JlsPathConfig, paths: usize, seed: u64) -> Result<f64> {
    cfg.validate()?;
    ensure(paths > 0, || Error::Config("paths must be > 0".into()))?;
    let crashed = (0..paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RandomSource::named_indexed(seed, "simulate.jls", i);
            jls_path(cfg, &mut rng).map(|p| usize::from(p.crash_time.is_some()))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(crashed as f64 / paths as f64)
}
