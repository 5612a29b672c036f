//! Fund-ecology volume sampler.
//!
//! Fund sizes follow the Zipf density `rho(S) ~ S^-2`, each fund trades with
//! frequency `F(S) ~ S^(1 - 3 delta / 2)` (constant relative impact cost) and
//! blocks of size `V = S^delta`. Sampling fund size from the trade-weighted
//! density `F(S) rho(S) ~ S^-(1 + 3 delta / 2)` gives `P(V > x) ~ x^-3/2`
//! whatever `delta` is.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::rng::RandomSource;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundEcology {
    /// Volume-size elasticity in `V ~ S^delta`.
    pub delta: f64,
    pub s_min: f64,
    /// May be `f64::INFINITY`.
    pub s_max: f64,
}

impl FundEcology {
    /// Zipf exponent of the fund-size survival function; fixed.
    pub const ZIPF_EXPONENT: f64 = 1.0;

    /// `s_max = 1e6 s_min`.
    pub fn with_default_support(delta: f64, s_min: f64) -> Self {
        Self {
            delta,
            s_min,
            s_max: 1e6 * s_min,
        }
    }

    /// Exponent `gamma` of the combined density `S^-gamma`.
    pub fn combined_exponent(&self) -> f64 {
        // rho ~ S^-(1 + zipf), F ~ S^(1 - 3 delta / 2)
        (1.0 + Self::ZIPF_EXPONENT) - (1.0 - 1.5 * self.delta)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.delta > 0.0 && self.delta.is_finite(), || {
            Error::Config(format!("delta = {} must be > 0", self.delta))
        })?;
        ensure(self.s_min > 0.0 && self.s_min.is_finite(), || {
            Error::Support(format!("s_min = {} must be > 0", self.s_min))
        })?;
        ensure(self.s_max >= self.s_min, || {
            Error::Support(format!("s_max = {} is below s_min = {}", self.s_max, self.s_min))
        })?;
        ensure(self.s_max.is_finite() || self.combined_exponent() > 1.0, || {
            Error::Support("combined density is not normalizable on an unbounded support".into())
        })
    }
}

/// `n` block volumes `V = S^delta` with `S` drawn by inverse CDF from the
/// truncated power law `S^-gamma` on `[s_min, s_max]`.
pub fn fund_ecology_volumes(eco: &FundEcology, n: usize, rng: &mut RandomSource) -> Result<Vec<f64>> {
    eco.validate()?;
    if eco.s_min == eco.s_max {
        return Ok(vec![eco.s_min.powf(eco.delta); n]);
    }
    // survival of S is proportional to S^-beta - s_max^-beta
    let beta = eco.combined_exponent() - 1.0;
    let lo = eco.s_min.powf(-beta);
    let hi = if eco.s_max.is_finite() { eco.s_max.powf(-beta) } else { 0.0 };
    Ok((0..n)
        .map(|_| {
            let u = rng.uniform();
            let s = (lo - u * (lo - hi)).powf(-1.0 / beta);
            s.clamp(eco.s_min, eco.s_max).powf(eco.delta)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::hill_tail_exponent;

    #[test]
    fn combined_exponent_matches_frequency_times_zipf() {
        for delta in [0.5, 1.0, 2.0] {
            let eco = FundEcology::with_default_support(delta, 1.0);
            assert!((eco.combined_exponent() - (1.0 + 1.5 * delta)).abs() < 1e-15);
        }
    }

    #[test]
    fn samples_stay_in_support() {
        let eco = FundEcology::with_default_support(1.0, 2.0);
        let mut rng = RandomSource::new(0, 0);
        let v = fund_ecology_volumes(&eco, 10_000, &mut rng).unwrap();
        assert!(v.iter().all(|&x| (2.0..=2e6).contains(&x)));
    }

    #[test]
    fn volume_tail_is_three_halves() {
        for (delta, seed) in [(1.0, 1), (0.5, 2)] {
            let eco = FundEcology::with_default_support(delta, 1.0);
            let mut rng = RandomSource::new(seed, 0);
            let v = fund_ecology_volumes(&eco, 1_000_000, &mut rng).unwrap();
            let est = hill_tail_exponent(&v, 0.01).unwrap();
            assert!((est.exponent - 1.5).abs() < 0.1, "delta {delta}: {}", est.exponent);
        }
    }

    #[test]
    fn point_mass_is_degenerate_for_hill() {
        let eco = FundEcology {
            delta: 0.5,
            s_min: 4.0,
            s_max: 4.0,
        };
        let mut rng = RandomSource::new(0, 0);
        let v = fund_ecology_volumes(&eco, 5000, &mut rng).unwrap();
        assert!(v.iter().all(|&x| x == 2.0));
        assert!(matches!(hill_tail_exponent(&v, 0.05), Err(Error::Degenerate(_))));
    }

    #[test]
    fn bad_support() {
        let mut rng = RandomSource::new(0, 0);
        let eco = FundEcology {
            delta: 1.0,
            s_min: 5.0,
            s_max: 1.0,
        };
        assert!(matches!(fund_ecology_volumes(&eco, 10, &mut rng), Err(Error::Support(_))));
        let eco = FundEcology {
            delta: 1.0,
            s_min: 0.0,
            s_max: 1.0,
        };
        assert!(matches!(fund_ecology_volumes(&eco, 10, &mut rng), Err(Error::Support(_))));
        let unbounded = FundEcology {
            delta: 1.0,
            s_min: 1.0,
            s_max: f64::INFINITY,
        };
        assert!(fund_ecology_volumes(&unbounded, 10, &mut rng).is_ok());
    }
}
