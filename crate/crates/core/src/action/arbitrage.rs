use crate::error::{ensure, Error, Result};
use crate::series::PriceSeries;

/// Left-point quadrature of the squared excess over riskless growth,
/// `sum_i (dP_i - r P_i dt)^2`.
pub fn arbitrage_functional(portfolio: &PriceSeries, r: f64) -> Result<f64> {
    ensure(portfolio.len() >= 2, || {
        Error::Size(format!("{} points; at least 2 required", portfolio.len()))
    })?;
    let dt = portfolio.uniform_spacing()?;
    Ok(portfolio
        .prices()
        .windows(2)
        .map(|w| {
            let excess = (w[1] - w[0]) - r * w[0] * dt;
            excess * excess
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;
    use crate::simulate::{wiener_path, WienerConfig};
    use proptest::prelude::*;

    #[test]
    fn arithmetic_example() {
        let s = PriceSeries::on_grid(0.0, 1.0, vec![1.0, 2.0, 1.0]).unwrap();
        assert_eq!(arbitrage_functional(&s, 0.0).unwrap(), 2.0);
    }

    #[test]
    fn nonuniform_grid_rejected() {
        let s = PriceSeries::new(vec![0.0, 1.0, 3.0], vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(arbitrage_functional(&s, 0.0), Err(Error::Spacing(_))));
    }

    #[test]
    fn quadratic_variation_of_gbm() {
        let cfg = WienerConfig { mu0: 0.02, h0: 0.04, p0: 1.0, n: 100_000, dt: 1e-3 };
        let mut rng = RandomSource::new(9, 0);
        let path = wiener_path(&cfg, &mut rng).unwrap();
        let total = arbitrage_functional(&path, cfg.mu0).unwrap();
        let expected: f64 = path.prices()[..cfg.n]
            .iter()
            .map(|p| cfg.h0 * p * p * cfg.dt)
            .sum();
        assert!((total / expected - 1.0).abs() < 0.05);
    }

    proptest! {
        #[test]
        fn compounding_series_is_free(r in -0.5f64..0.5, dt in 0.01f64..1.0, p0 in 0.1f64..100.0) {
            let prices: Vec<f64> = (0..50).map(|i| p0 * (1.0 + r * dt).powi(i)).collect();
            let scale: f64 = prices.iter().map(|p| p * p).sum();
            let s = PriceSeries::on_grid(0.0, dt, prices).unwrap();
            let f = arbitrage_functional(&s, r).unwrap();
            prop_assert!(f >= 0.0 && f < 1e-26 * scale);
        }

        #[test]
        fn nonnegative(prices in proptest::collection::vec(0.1f64..10.0, 2..50), r in -1.0f64..1.0) {
            let s = PriceSeries::on_grid(0.0, 0.5, prices).unwrap();
            prop_assert!(arbitrage_functional(&s, r).unwrap() >= 0.0);
        }
    }
}
