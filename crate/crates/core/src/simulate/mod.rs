//! Synthetic-market generators. Every generator is a pure function of its
//! configuration and a [`RandomSource`](crate::rng::RandomSource).

mod crash;
mod ecology;
mod execution;
mod impact;
mod kinematic;
mod wiener;

pub use crash::{crash_fraction, hazard_rate, jls_path, CrashHazard, HazardParams, JlsPath, JlsPathConfig};
pub use ecology::{fund_ecology_volumes, FundEcology};
pub use execution::{optimal_execution, ExecutionProblem, ExecutionSolution};
pub use impact::{
    impact_tick_stream, solve_impact_constraint, two_population_ticks, volatility_decomposition,
    ImpactEquation, ImpactTickParams, ImpactUnknown, Regime, Tick, TwoPopulationConfig,
    TwoPopulationSample, VolatilityDecomposition,
};
pub use kinematic::{kinematic_displacements, KinematicConfig};
pub use wiener::{wiener_path, WienerConfig};
