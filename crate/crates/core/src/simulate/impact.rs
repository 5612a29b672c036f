//! Tick-level impact model: a martingale regular regime mixed with big-player
//! moves, its constraint solver, and the two-population volatility split.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::rng::RandomSource;
use crate::series::sample_variance;

const MARTINGALE_TOL: f64 = 1e-12;

/// Regime mixture for one tick.
///
/// With probability `1 - pa - pb` the tick is regular: `ds1` with probability
/// `p`, `ds2` otherwise. With probability `pa` (big player) or `pb`
/// (compositional change) the move is `ds3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactTickParams {
    pub p: f64,
    pub ds1: f64,
    pub ds2: f64,
    pub pa: f64,
    pub pb: f64,
    pub ds3: f64,
}

impl ImpactTickParams {
    /// Builds a parameter set whose regular regime is a martingale, deriving
    /// `ds2 = -p ds1 / (1 - p)`.
    pub fn martingale(p: f64, ds1: f64, pa: f64, pb: f64, ds3: f64) -> Result<Self> {
        ensure(p > 0.0 && p < 1.0, || {
            Error::Constraint(format!("p = {p} must lie in (0, 1)"))
        })?;
        let params = Self {
            p,
            ds1,
            ds2: -p * ds1 / (1.0 - p),
            pa,
            pb,
            ds3,
        };
        params.validate()?;
        Ok(params)
    }

    /// Expected regular-regime move `p ds1 + (1 - p) ds2`.
    pub fn regular_drift(&self) -> f64 {
        self.p * self.ds1 + (1.0 - self.p) * self.ds2
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.p > 0.0 && self.p < 1.0, || {
            Error::Constraint(format!("p = {} must lie in (0, 1)", self.p))
        })?;
        ensure((0.0..1.0).contains(&self.pa) && (0.0..1.0).contains(&self.pb), || {
            Error::Constraint(format!("pa = {}, pb = {} must lie in [0, 1)", self.pa, self.pb))
        })?;
        ensure(self.pa + self.pb < 1.0, || {
            Error::Constraint(format!("pa + pb = {} must be < 1", self.pa + self.pb))
        })?;
        ensure(
            [self.ds1, self.ds2, self.ds3].iter().all(|x| x.is_finite()),
            || Error::Constraint("non-finite move size".into()),
        )?;
        let scale = self.ds1.abs().max(self.ds2.abs()).max(1.0);
        ensure(self.regular_drift().abs() <= MARTINGALE_TOL * scale, || {
            Error::Constraint(format!(
                "regular regime is not a martingale: p ds1 + (1 - p) ds2 = {}",
                self.regular_drift()
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Regular,
    BigPlayer,
    Compositional,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Regular => "regular",
            Regime::BigPlayer => "big_player",
            Regime::Compositional => "compositional",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tick {
    pub regime: Regime,
    pub dx: f64,
}

/// `n` independent ticks. Each tick consumes two uniforms: one for the regime
/// and one for the regular-regime direction.
pub fn impact_tick_stream(params: &ImpactTickParams, n: usize, rng: &mut RandomSource) -> Result<Vec<Tick>> {
    params.validate()?;
    let ticks = (0..n)
        .map(|_| {
            let u_regime = rng.uniform();
            let u_move = rng.uniform();
            if u_regime < params.pa {
                Tick {
                    regime: Regime::BigPlayer,
                    dx: params.ds3,
                }
            } else if u_regime < params.pa + params.pb {
                Tick {
                    regime: Regime::Compositional,
                    dx: params.ds3,
                }
            } else {
                let dx = if u_move < params.p { params.ds1 } else { params.ds2 };
                Tick {
                    regime: Regime::Regular,
                    dx,
                }
            }
        })
        .collect();
    Ok(ticks)
}

/// Inputs of the mixed-regime no-arbitrage equation
/// `(1 - pa - pb)(p ds1 + (1 - p) ds2) + (pa + pb)(ds - ds3) = 0`.
/// The field named by [`ImpactUnknown`] is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactEquation {
    pub p: f64,
    pub ds1: f64,
    pub ds2: f64,
    pub pa: f64,
    pub pb: f64,
    pub ds3: f64,
    /// Expected total price change.
    pub ds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpactUnknown {
    Ds2,
    Ds3,
    Ds,
}

/// Solves the no-arbitrage equation for the marked unknown. With
/// `pa = pb = 0` solving for `ds2` reduces to the single-regime condition
/// `p ds1 + (1 - p) ds2 = 0`.
pub fn solve_impact_constraint(eq: &ImpactEquation, unknown: ImpactUnknown) -> Result<f64> {
    ensure((0.0..=1.0).contains(&eq.p), || {
        Error::Constraint(format!("p = {} must lie in [0, 1]", eq.p))
    })?;
    ensure(eq.pa >= 0.0 && eq.pb >= 0.0 && eq.pa + eq.pb <= 1.0, || {
        Error::Constraint(format!("pa = {}, pb = {} are not valid probabilities", eq.pa, eq.pb))
    })?;
    let big = eq.pa + eq.pb;
    let regular = 1.0 - big;
    let value = match unknown {
        ImpactUnknown::Ds2 => {
            let coef = regular * (1.0 - eq.p);
            ensure(coef != 0.0, || {
                Error::Singular("coefficient of ds2, (1 - pa - pb)(1 - p), is zero".into())
            })?;
            -(regular * eq.p * eq.ds1 + big * (eq.ds - eq.ds3)) / coef
        }
        ImpactUnknown::Ds3 | ImpactUnknown::Ds => {
            ensure(big != 0.0, || {
                Error::Singular("pa + pb = 0 leaves the big-player term undetermined".into())
            })?;
            let drift = regular * (eq.p * eq.ds1 + (1.0 - eq.p) * eq.ds2) / big;
            if unknown == ImpactUnknown::Ds3 {
                eq.ds + drift
            } else {
                eq.ds3 - drift
            }
        }
    };
    ensure(value.is_finite(), || Error::Singular("solution is not finite".into()))?;
    Ok(value)
}

/// Informed (probability `p`, move `ds1`) versus noise (move `ds2`) traders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPopulationConfig {
    pub p: f64,
    pub ds1: f64,
    pub n: usize,
}

impl TwoPopulationConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.p != 1.0, || {
            Error::Singular("p = 1 makes the noise move -p ds1 / (1 - p) infinite".into())
        })?;
        ensure(self.p > 0.0 && self.p < 1.0, || {
            Error::Config(format!("p = {} must lie in (0, 1)", self.p))
        })?;
        ensure(self.ds1.is_finite(), || Error::Config("ds1 must be finite".into()))
    }

    pub fn ds2(&self) -> f64 {
        -self.p * self.ds1 / (1.0 - self.p)
    }
}

/// Analytic volatility split `sigma^2 = sigma1^2 + sigma2^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolatilityDecomposition {
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    pub sigma_sq: f64,
}

impl VolatilityDecomposition {
    pub fn noise_to_informed_ratio(&self) -> f64 {
        self.sigma2_sq / self.sigma1_sq
    }
}

pub fn volatility_decomposition(cfg: &TwoPopulationConfig) -> Result<VolatilityDecomposition> {
    cfg.validate()?;
    let sigma1_sq = cfg.p * cfg.ds1 * cfg.ds1;
    let ds2 = cfg.ds2();
    let sigma2_sq = (1.0 - cfg.p) * ds2 * ds2;
    Ok(VolatilityDecomposition {
        sigma1_sq,
        sigma2_sq,
        sigma_sq: sigma1_sq + sigma2_sq,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoPopulationSample {
    pub ticks: Vec<f64>,
    pub decomposition: VolatilityDecomposition,
    pub sample_variance: f64,
}

pub fn two_population_ticks(cfg: &TwoPopulationConfig, rng: &mut RandomSource) -> Result<TwoPopulationSample> {
    let decomposition = volatility_decomposition(cfg)?;
    let ds2 = cfg.ds2();
    let ticks: Vec<f64> = (0..cfg.n)
        .map(|_| if rng.uniform() < cfg.p { cfg.ds1 } else { ds2 })
        .collect();
    let sample_variance = sample_variance(&ticks);
    Ok(TwoPopulationSample {
        ticks,
        decomposition,
        sample_variance,
    })
}
