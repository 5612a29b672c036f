use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::rng::RandomSource;
use crate::series::PriceSeries;

/// Geometric Brownian motion `dP = mu0 P dt + sqrt(h0) P dz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WienerConfig {
    /// Drift rate per unit time.
    pub mu0: f64,
    /// Variance rate per unit time.
    pub h0: f64,
    pub p0: f64,
    pub n: usize,
    pub dt: f64,
}

impl WienerConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.h0 >= 0.0 && self.h0.is_finite(), || {
            Error::Config(format!("h0 = {} must be >= 0", self.h0))
        })?;
        ensure(self.p0 > 0.0 && self.p0.is_finite(), || {
            Error::Config(format!("p0 = {} must be > 0", self.p0))
        })?;
        ensure(self.n >= 1, || Error::Config("n must be >= 1".into()))?;
        ensure(self.dt > 0.0 && self.dt.is_finite(), || {
            Error::Config(format!("dt = {} must be > 0", self.dt))
        })?;
        ensure(self.mu0.is_finite(), || Error::Config("mu0 must be finite".into()))
    }
}

/// `n + 1` prices on `0, dt, ..., n dt`.
///
/// Steps are exact in log space,
/// `ln P_{i+1} = ln P_i + (mu0 - h0/2) dt + sqrt(h0 dt) z_i`,
/// so prices stay positive. With `h0 = 0` the path is `p0 exp(mu0 i dt)`,
/// not the Euler value `p0 (1 + mu0 dt)^i`.
pub fn wiener_path(cfg: &WienerConfig, rng: &mut RandomSource) -> Result<PriceSeries> {
    cfg.validate()?;
    let drift = (cfg.mu0 - 0.5 * cfg.h0) * cfg.dt;
    let vol = (cfg.h0 * cfg.dt).sqrt();
    // cumulative log increment; keeps p0 exact on noiseless, driftless paths
    let mut x = 0.0;
    let mut prices = Vec::with_capacity(cfg.n + 1);
    prices.push(cfg.p0);
    for _ in 0..cfg.n {
        let z = rng.standard_normal();
        x += drift + vol * z;
        prices.push(cfg.p0 * x.exp());
    }
    PriceSeries::on_grid(0.0, cfg.dt, prices)
}
