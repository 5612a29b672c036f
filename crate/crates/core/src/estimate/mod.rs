//! Estimators and predictors fitted to simulated or observed series.

mod garch;
mod hill;
mod jls_fit;
mod least_action;
mod regimes;
mod variance;

pub use garch::{
    garch_fit, garch_recursion, garch_simulate, gaussian_log_likelihood, GarchFit, GarchSpec,
    GRADIENT_TOLERANCE, MAX_PERSISTENCE, STATIONARITY_MARGIN,
};
pub use hill::{hill_tail_exponent, DEFAULT_TAIL_FRACTION, MIN_TAIL_POINTS};
pub use jls_fit::{jls_evaluate, jls_fit, JlsFit, JlsParams, JlsSearch};
pub use least_action::{least_action_coefficient, least_action_path, least_action_predict};
pub use regimes::{
    kinematic_crossover, regime_slopes, KinematicCrossover, RegimeSlopes, BINS_PER_SEGMENT,
    MIN_SEGMENT_SAMPLES,
};
pub use variance::{interpolate_variance, NaturalCubicSpline, VarianceSample, VarianceTriple};
