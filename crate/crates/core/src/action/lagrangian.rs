use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Coefficients of the quadratic Lagrangian `L = a h'^2 / 2 + b h^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionCoefficients {
    pub a: f64,
    pub b: f64,
}

impl ActionCoefficients {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let c = Self { a, b };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.a > 0.0 && self.b > 0.0 && self.a.is_finite() && self.b.is_finite(), || {
            Error::Config(format!("a = {} and b = {} must be positive", self.a, self.b))
        })
    }

    /// First integral `a h'^2 / 2 - b h^2 / 2` of a state.
    pub fn c1(&self, h: f64, hdot: f64) -> f64 {
        0.5 * self.a * hdot * hdot - 0.5 * self.b * h * h
    }
}

pub fn lagrangian_value(coef: &ActionCoefficients, h: f64, hdot: f64) -> f64 {
    0.5 * coef.a * hdot * hdot + 0.5 * coef.b * h * h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub h_values: Vec<f64>,
    pub hdot_values: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Classic RK4 for the Euler-Lagrange equation `a h'' = b h`. The step is
/// adjusted down so that the uniform grid ends exactly at `t_end`.
pub fn integrate_euler_lagrange(
    coef: &ActionCoefficients,
    h0: f64,
    hdot0: f64,
    t_end: f64,
    step: f64,
) -> Result<Trajectory> {
    coef.validate()?;
    ensure(t_end > 0.0 && t_end.is_finite(), || {
        Error::Config(format!("t_end = {t_end} must be positive"))
    })?;
    ensure(step > 0.0 && step <= t_end / 10.0, || {
        Error::Config(format!("step = {step} must lie in (0, t_end / 10]"))
    })?;
    let n = (t_end / step).round() as usize;
    let dt = t_end / n as f64;
    let k = coef.b / coef.a;

    let mut times = Vec::with_capacity(n + 1);
    let mut hs = Vec::with_capacity(n + 1);
    let mut vs = Vec::with_capacity(n + 1);
    let (mut h, mut v) = (h0, hdot0);
    times.push(0.0);
    hs.push(h);
    vs.push(v);
    for i in 1..=n {
        let (k1h, k1v) = (v, k * h);
        let (k2h, k2v) = (v + 0.5 * dt * k1v, k * (h + 0.5 * dt * k1h));
        let (k3h, k3v) = (v + 0.5 * dt * k2v, k * (h + 0.5 * dt * k2h));
        let (k4h, k4v) = (v + dt * k3v, k * (h + dt * k3h));
        h += dt / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        times.push(dt * i as f64);
        hs.push(h);
        vs.push(v);
    }
    Ok(Trajectory {
        times,
        h_values: hs,
        hdot_values: vs,
    })
}

/// `a h'^2 / 2 - b h^2 / 2` at every grid point; constant along exact
/// solutions.
pub fn conserved_quantity(coef: &ActionCoefficients, traj: &Trajectory) -> Result<Vec<f64>> {
    ensure(!traj.is_empty(), || Error::Size("trajectory is empty".into()))?;
    ensure(
        traj.h_values.len() == traj.len() && traj.hdot_values.len() == traj.len(),
        || Error::Size("trajectory columns differ in length".into()),
    )?;
    Ok(traj
        .h_values
        .iter()
        .zip(&traj.hdot_values)
        .map(|(&h, &v)| coef.c1(h, v))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lagrangian_arithmetic() {
        let unit = ActionCoefficients::new(1.0, 1.0).unwrap();
        assert_eq!(lagrangian_value(&unit, 0.0, 0.0), 0.0);
        let c = ActionCoefficients::new(2.0, 0.5).unwrap();
        assert_eq!(lagrangian_value(&c, 2.0, 1.0), 2.0);
    }

    #[test]
    fn exponential_solution() {
        let c = ActionCoefficients::new(1.0, 1.0).unwrap();
        let tr = integrate_euler_lagrange(&c, 1.0, 1.0, 1.0, 1e-3).unwrap();
        let h1 = *tr.h_values.last().unwrap();
        assert!((h1 / 1f64.exp() - 1.0).abs() < 1e-8);
        let c1 = conserved_quantity(&c, &tr).unwrap();
        assert!(c1.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn cosh_solution_and_invariant() {
        let c = ActionCoefficients::new(1.0, 4.0).unwrap();
        let tr = integrate_euler_lagrange(&c, 1.0, 0.0, 1.0, 1e-3).unwrap();
        assert!((tr.h_values.last().unwrap() - 2f64.cosh()).abs() < 1e-6);
        let c1 = conserved_quantity(&c, &tr).unwrap();
        assert!(c1.iter().all(|v| (v + 2.0).abs() < 1e-6));
    }

    #[test]
    fn fourth_order_convergence() {
        let c = ActionCoefficients::new(1.0, 4.0).unwrap();
        let max_err = |step: f64| {
            let tr = integrate_euler_lagrange(&c, 1.0, 0.0, 1.0, step).unwrap();
            tr.times
                .iter()
                .zip(&tr.h_values)
                .map(|(t, h)| (h - (2.0 * t).cosh()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = max_err(0.02) / max_err(0.01);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn rejects_coarse_step() {
        let c = ActionCoefficients::new(1.0, 1.0).unwrap();
        assert!(integrate_euler_lagrange(&c, 1.0, 0.0, 1.0, 0.2).is_err());
        assert!(ActionCoefficients::new(0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn lagrangian_is_even(h in -1e3f64..1e3, v in -1e3f64..1e3, a in 0.01f64..10.0, b in 0.01f64..10.0) {
            let c = ActionCoefficients::new(a, b).unwrap();
            prop_assert_eq!(lagrangian_value(&c, h, v), lagrangian_value(&c, -h, -v));
        }
    }
}
