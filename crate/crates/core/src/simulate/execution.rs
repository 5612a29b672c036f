//! Big-player execution: profit `B(dp) = V (M - mu a V / dp - dp)` traded off
//! between waiting (mispricing decays at rate `mu`, execution takes
//! `T = a V / dp`) and moving the price by `dp`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExecutionProblem {
    /// Mispricing.
    pub m: f64,
    /// Rate at which the market removes the mispricing.
    pub mu: f64,
    /// Execution-time coefficient in `T = a V / dp`.
    pub a: f64,
    /// Target volume.
    pub v: f64,
}

impl ExecutionProblem {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("M", self.m), ("mu", self.mu), ("a", self.a), ("V", self.v)] {
            ensure(x > 0.0 && x.is_finite(), || {
                Error::Domain(format!("{name} = {x} must be strictly positive"))
            })?;
        }
        Ok(())
    }

    /// Profit at price impact `dp`.
    pub fn profit(&self, dp: f64) -> f64 {
        self.v * (self.m - self.mu * self.a * self.v / dp - dp)
    }

    /// The maximized profit is positive only when `M > 2 sqrt(mu a V)`.
    pub fn is_profitable(&self) -> bool {
        self.m > 2.0 * (self.mu * self.a * self.v).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExecutionSolution {
    pub dp_star: f64,
    pub t_star: f64,
    /// Trade count, proportional to execution time with unit constant.
    pub n_star: f64,
    pub b_star: f64,
}

/// Stationary point of `B`: `dp* = sqrt(mu a V)`, hence `dp* ~ V^(1/2)` and
/// `T* = a V / dp* ~ V^(1/2)`.
pub fn optimal_execution(prob: &ExecutionProblem) -> Result<ExecutionSolution> {
    prob.validate()?;
    let dp_star = (prob.mu * prob.a * prob.v).sqrt();
    let t_star = prob.a * prob.v / dp_star;
    Ok(ExecutionSolution {
        dp_star,
        t_star,
        n_star: t_star,
        b_star: prob.profit(dp_star),
    })
}
