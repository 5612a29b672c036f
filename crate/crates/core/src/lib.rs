//! Numerical laboratory for quasi-microstructure market models.
//!
//! The crate is split along the same lines as the models it implements:
//!
//! * [`series`], [`rng`], [`empirical`]: shared substrate (price and return
//!   paths, the deterministic random source, empirical survival functions).
//! * [`simulate`]: synthetic-market generators (Wiener and log-periodic crash
//!   paths, mixed-regime impact ticks, optimal execution, fund ecology,
//!   kinematic displacements, two-population ticks).
//! * [`estimate`]: Hill tail exponents, GARCH(1,1) likelihood fitting,
//!   log-periodic fitting, regime slopes, the least-action variance
//!   predictor and quasicontinuous variance interpolation.
//! * [`action`]: the quadratic volatility Lagrangian, its Euler-Lagrange
//!   dynamics, crash-hazard ratio profiles, the scaling order parameter and
//!   the discrete arbitrage functional.

pub mod action;
pub mod empirical;
pub mod error;
pub mod estimate;
pub mod rng;
pub mod series;
pub mod simulate;

pub use empirical::{empirical_ccdf, StylizedTargets, TailEstimate, STYLIZED_TARGETS};
pub use error::{Error, Result};
pub use rng::RandomSource;
pub use series::{PriceSeries, ReturnSeries};
