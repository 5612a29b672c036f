use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::rng::RandomSource;

/// Constant-acceleration displacement `dS = v0 dt + accel dt^2 / 2` with
/// `dt` uniform on `(0, dt_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicConfig {
    pub v0: f64,
    pub accel: f64,
    pub dt_max: f64,
    pub n: usize,
}

impl KinematicConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.v0 >= 0.0 && self.accel >= 0.0, || {
            Error::Config(format!("v0 = {} and accel = {} must be >= 0", self.v0, self.accel))
        })?;
        ensure(self.v0 + self.accel > 0.0, || {
            Error::Config("v0 and accel cannot both be zero".into())
        })?;
        ensure(self.dt_max > 0.0 && self.dt_max.is_finite(), || {
            Error::Config(format!("dt_max = {} must be > 0", self.dt_max))
        })
    }

    pub fn displacement(&self, dt: f64) -> f64 {
        self.v0 * dt + 0.5 * self.accel * dt * dt
    }

    /// Interval at which the linear and quadratic terms are equal,
    /// `2 v0 / accel`; infinite without acceleration.
    pub fn crossover_interval(&self) -> f64 {
        2.0 * self.v0 / self.accel
    }

    /// Inverse of [`KinematicConfig::displacement`] on `dt >= 0`.
    pub fn interval_for(&self, ds: f64) -> f64 {
        if self.accel == 0.0 {
            ds / self.v0
        } else {
            // stable root of accel/2 dt^2 + v0 dt - ds = 0
            2.0 * ds / (self.v0 + (self.v0 * self.v0 + 2.0 * self.accel * ds).sqrt())
        }
    }
}

pub fn kinematic_displacements(cfg: &KinematicConfig, rng: &mut RandomSource) -> Result<Vec<f64>> {
    cfg.validate()?;
    Ok((0..cfg.n)
        .map(|_| cfg.displacement(cfg.dt_max * rng.uniform_open0()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_regime_is_uniform() {
        let cfg = KinematicConfig { v0: 1.0, accel: 0.0, dt_max: 1.0, n: 100_000 };
        let mut rng = RandomSource::new(0, 0);
        let ds = kinematic_displacements(&cfg, &mut rng).unwrap();
        assert!(ds.iter().all(|&x| x > 0.0 && x <= 1.0));
        let below_half = ds.iter().filter(|&&x| x < 0.5).count() as f64 / 1e5;
        assert!((below_half - 0.5).abs() < 0.01);
    }

    #[test]
    fn quadratic_regime_is_squared_uniform() {
        let cfg = KinematicConfig { v0: 0.0, accel: 2.0, dt_max: 1.0, n: 10 };
        let mut a = RandomSource::new(4, 4);
        let mut b = RandomSource::new(4, 4);
        let ds = kinematic_displacements(&cfg, &mut a).unwrap();
        for x in ds {
            let u = b.uniform_open0();
            assert_eq!(x, u * u);
        }
    }

    #[test]
    fn inverse_map_roundtrip() {
        let cfg = KinematicConfig { v0: 1.0, accel: 4.0, dt_max: 2.0, n: 0 };
        for dt in [1e-6, 0.1, 0.5, 1.9] {
            assert!((cfg.interval_for(cfg.displacement(dt)) - dt).abs() < 1e-12);
        }
        assert_eq!(cfg.crossover_interval(), 0.5);
    }

    #[test]
    fn rejects_motionless_config() {
        let cfg = KinematicConfig { v0: 0.0, accel: 0.0, dt_max: 1.0, n: 10 };
        let mut rng = RandomSource::new(0, 0);
        assert!(kinematic_displacements(&cfg, &mut rng).is_err());
    }
}
