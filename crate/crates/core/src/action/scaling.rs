use serde::{Deserialize, Serialize};

/// Scaling form `1 / P = A dS^xi_r f(h dS^(xi - xi_r))` with the crossover
/// function `f(z) = (1 + z^2)^(beta_exp / 2)`, which is 1 for small `z` and
/// `z^beta_exp` for large `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingLaw {
    pub amplitude: f64,
    pub xi_r: f64,
    pub xi: f64,
    pub beta_exp: f64,
    pub field_h: f64,
}

impl ScalingLaw {
    /// `dS*` where the asymptotes meet (`z = 1`); infinite without a field.
    pub fn crossover(&self) -> f64 {
        self.field_h.powf(-1.0 / (self.xi - self.xi_r))
    }

    fn z(&self, ds: f64) -> f64 {
        self.field_h * ds.powf(self.xi - self.xi_r)
    }

    /// Analytic `d ln(1/P) / d ln dS`.
    pub fn log_slope(&self, ds: f64) -> f64 {
        let z2 = self.z(ds).powi(2);
        self.xi_r + self.beta_exp * (self.xi - self.xi_r) * z2 / (1.0 + z2)
    }

    /// Log-log slope far above the crossover.
    pub fn asymptotic_slope(&self) -> f64 {
        self.xi_r + self.beta_exp * (self.xi - self.xi_r)
    }
}

pub fn scaling_function(z: f64, beta_exp: f64) -> f64 {
    (1.0 + z * z).powf(0.5 * beta_exp)
}

pub fn scaling_order_parameter(law: &ScalingLaw, ds: f64) -> f64 {
    debug_assert!(ds > 0.0, "dS = {ds} must be positive");
    law.amplitude * ds.powf(law.xi_r) * scaling_function(law.z(ds), law.beta_exp)
}
