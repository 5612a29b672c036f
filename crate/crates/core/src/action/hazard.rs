use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Two-population crash intensity `C1 h1 + C2 h2` together with the harmonic
/// profile `h_c + h_r0 cos(omega Delta)` of the ratio `h1 / h2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HazardMix {
    pub c1_weight: f64,
    pub c2_weight: f64,
    pub h_c: f64,
    pub h_r0: f64,
    pub omega: f64,
}

impl HazardMix {
    pub fn validate(&self) -> Result<()> {
        ensure(self.c1_weight >= 0.0 && self.c2_weight >= 0.0, || {
            Error::Config("mixing weights must be nonnegative".into())
        })?;
        ensure(self.h_c > 0.0 && self.omega > 0.0, || {
            Error::Config(format!("h_c = {} and omega = {} must be positive", self.h_c, self.omega))
        })?;
        ensure(self.h_r0.abs() <= self.h_c, || {
            Error::Constraint(format!(
                "|h_r0| = {} exceeds h_c = {}; the ratio would go negative",
                self.h_r0.abs(),
                self.h_c
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaKind {
    /// `(t_c - t)^alpha`
    PowerDecreasing,
    /// `ln(t_c - t)`
    Log,
    /// `(t_c - t)^-alpha`
    PowerIncreasing,
}

/// Perceived distance to the crash as a function of calendar time, evaluated
/// on `t_c - t > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaMap {
    pub kind: DeltaKind,
    pub alpha: f64,
    pub t_c: f64,
}

impl DeltaMap {
    pub fn delta(&self, t: f64) -> Result<f64> {
        ensure(t < self.t_c, || {
            Error::Domain(format!("t = {t} is not before t_c = {}", self.t_c))
        })?;
        let tau = self.t_c - t;
        Ok(match self.kind {
            DeltaKind::PowerDecreasing => tau.powf(self.alpha),
            DeltaKind::Log => tau.ln(),
            DeltaKind::PowerIncreasing => tau.powf(-self.alpha),
        })
    }

    fn validate(&self) -> Result<()> {
        ensure(self.kind == DeltaKind::Log || self.alpha > 0.0, || {
            Error::Config(format!("alpha = {} must be positive", self.alpha))
        })
    }
}

pub fn hazard_ratio_profile(mix: &HazardMix, map: &DeltaMap, times: &[f64]) -> Result<Vec<f64>> {
    mix.validate()?;
    map.validate()?;
    times
        .iter()
        .map(|&t| Ok(mix.h_c + mix.h_r0 * (mix.omega * map.delta(t)?).cos()))
        .collect()
}

/// Crash intensity per unit time from the small-player and big-player
/// hazards.
pub fn mixed_crash_intensity(mix: &HazardMix, h1: f64, h2: f64) -> f64 {
    debug_assert!(h1 >= 0.0 && h2 >= 0.0);
    mix.c1_weight * h1 + mix.c2_weight * h2
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mix(h_r0: f64, omega: f64) -> HazardMix {
        HazardMix { c1_weight: 0.5, c2_weight: 0.5, h_c: 1.0, h_r0, omega }
    }

    #[test]
    fn flat_without_oscillation() {
        let map = DeltaMap { kind: DeltaKind::Log, alpha: 0.0, t_c: 10.0 };
        let p = hazard_ratio_profile(&mix(0.0, 3.0), &map, &[0.0, 5.0, 9.9]).unwrap();
        assert!(p.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn linear_map_is_plain_cosine() {
        let map = DeltaMap { kind: DeltaKind::PowerDecreasing, alpha: 1.0, t_c: 100.0 };
        let omega = 0.7;
        let period = std::f64::consts::TAU / omega;
        let ts = [1.0, 1.0 + period, 1.0 + 2.0 * period];
        let p = hazard_ratio_profile(&mix(0.5, omega), &map, &ts).unwrap();
        assert!((p[0] - p[1]).abs() < 1e-12 && (p[1] - p[2]).abs() < 1e-12);
    }

    #[test]
    fn log_map_maxima_are_geometric() {
        let map = DeltaMap { kind: DeltaKind::Log, alpha: 0.0, t_c: 100.0 };
        let spacing = 1e-4;
        let ts: Vec<f64> = (0..1_000_000).map(|i| i as f64 * spacing).collect();
        let p = hazard_ratio_profile(&mix(0.5, std::f64::consts::TAU), &map, &ts).unwrap();
        // maxima closer to t_c than 1000 grid steps are not resolved to 1%
        let taus: Vec<f64> = (1..p.len() - 1)
            .filter(|&i| p[i] > p[i - 1] && p[i] >= p[i + 1])
            .map(|i| 100.0 - ts[i])
            .filter(|&tau| tau > 1e3 * spacing)
            .collect();
        assert!(taus.len() >= 3, "{taus:?}");
        for w in taus.windows(2) {
            assert!((w[0] / w[1] / std::f64::consts::E - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn rejects_crash_time_and_bad_mix() {
        let map = DeltaMap { kind: DeltaKind::Log, alpha: 0.0, t_c: 1.0 };
        assert!(matches!(hazard_ratio_profile(&mix(0.5, 1.0), &map, &[1.0]), Err(Error::Domain(_))));
        assert!(matches!(hazard_ratio_profile(&mix(1.5, 1.0), &map, &[0.0]), Err(Error::Constraint(_))));
    }

    #[test]
    fn intensity_examples() {
        let only_small = HazardMix { c1_weight: 1.0, c2_weight: 0.0, ..mix(0.0, 1.0) };
        assert_eq!(mixed_crash_intensity(&only_small, 0.3, 0.9), 0.3);
        assert!((mixed_crash_intensity(&mix(0.0, 1.0), 0.02, 0.02) - 0.02).abs() < 1e-17);
    }

    proptest! {
        #[test]
        fn profile_is_bounded(
            h_r0 in -1.0f64..1.0,
            omega in 0.1f64..50.0,
            alpha in 0.1f64..3.0,
            kind in 0usize..3,
        ) {
            let kind = [DeltaKind::PowerDecreasing, DeltaKind::Log, DeltaKind::PowerIncreasing][kind];
            let map = DeltaMap { kind, alpha, t_c: 10.0 };
            let ts: Vec<f64> = (0..200).map(|i| i as f64 * 0.0499).collect();
            let m = mix(h_r0, omega);
            for v in hazard_ratio_profile(&m, &map, &ts).unwrap() {
                prop_assert!(v >= m.h_c - m.h_r0.abs() - 1e-12 && v <= m.h_c + m.h_r0.abs() + 1e-12);
            }
        }

        #[test]
        fn intensity_superposition(
            w1 in 0.0f64..5.0, w2 in 0.0f64..5.0,
            a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0, k in 0.0f64..4.0,
        ) {
            let m = HazardMix { c1_weight: w1, c2_weight: w2, ..mix(0.0, 1.0) };
            let lhs = mixed_crash_intensity(&m, a + k * b, c);
            let rhs = mixed_crash_intensity(&m, a, c) + k * mixed_crash_intensity(&m, b, 0.0);
            prop_assert!((lhs - rhs).abs() < 1e-12);
            let lhs = mixed_crash_intensity(&m, c, a + k * b);
            let rhs = mixed_crash_intensity(&m, c, a) + k * mixed_crash_intensity(&m, 0.0, b);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
