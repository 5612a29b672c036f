/// One step of the least-action variance predictor,
/// `h(t + dt) = h(t) + c (realized_return_rate - mu)^2`, where
/// `realized_return_rate = dP / (P dt)` and `c = sqrt(b / a) dt`.
///
/// Only the ratio `b / a` of the Lagrangian coefficients enters, so they are
/// passed folded into `c`. Requires finite inputs and `c > 0`; the variance
/// never decreases. This is GARCH(1,1) with `omega = 0, alpha = c, beta = 1`.
pub fn least_action_predict(h_now: f64, realized_return_rate: f64, mu: f64, c: f64) -> f64 {
    debug_assert!(c > 0.0, "c = {c} must be positive");
    let innovation = realized_return_rate - mu;
    h_now + c * (innovation * innovation)
}

/// Folds the Lagrangian coefficients and the sampling interval into the
/// predictor coefficient `sqrt(b / a) dt`.
pub fn least_action_coefficient(a: f64, b: f64, dt: f64) -> f64 {
    (b / a).sqrt() * dt
}

/// Iterates the predictor over a sequence of realized return rates, returning
/// the variance after each step (length `rates.len() + 1`, starting at `h0`).
pub fn least_action_path(h0: f64, rates: &[f64], mu: f64, c: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(rates.len() + 1);
    let mut h = h0;
    out.push(h);
    for &r in rates {
        h = least_action_predict(h, r, mu, c);
        out.push(h);
    }
    out
}
