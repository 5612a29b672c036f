//! Least-action machinery for volatility and crash-ratio dynamics.

mod arbitrage;
mod hazard;
mod lagrangian;
mod scaling;

pub use arbitrage::arbitrage_functional;
pub use hazard::{hazard_ratio_profile, mixed_crash_intensity, DeltaKind, DeltaMap, HazardMix};
pub use lagrangian::{
    conserved_quantity, integrate_euler_lagrange, lagrangian_value, ActionCoefficients, Trajectory,
};
pub use scaling::{scaling_function, scaling_order_parameter, ScalingLaw};
