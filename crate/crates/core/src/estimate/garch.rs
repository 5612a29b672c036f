use nalgebra::{DMatrix, SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::rng::RandomSource;
use crate::series::{mean, sample_variance, ReturnSeries};

/// GARCH(p, q) conditional-variance model
/// `h(t) = omega + sum_i alpha_i e(t - i)^2 + sum_j beta_j h(t - j)` with
/// `e = r - mu`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchSpec {
    pub omega: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub mu: f64,
}

impl GarchSpec {
    pub fn garch11(omega: f64, alpha: f64, beta: f64, mu: f64) -> Self {
        Self {
            omega,
            alpha: vec![alpha],
            beta: vec![beta],
            mu,
        }
    }

    pub fn persistence(&self) -> f64 {
        self.alpha.iter().sum::<f64>() + self.beta.iter().sum::<f64>()
    }

    pub fn is_stationary(&self) -> bool {
        self.persistence() < 1.0
    }

    pub fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.persistence())
    }

    fn validate(&self) -> Result<()> {
        let coeffs_ok = std::iter::once(self.omega)
            .chain(self.alpha.iter().copied())
            .chain(self.beta.iter().copied())
            .all(|c| c >= 0.0 && c.is_finite());
        ensure(coeffs_ok && self.mu.is_finite(), || {
            Error::Config("GARCH coefficients must be finite and nonnegative".into())
        })?;
        ensure(self.is_stationary(), || {
            Error::Stationarity(format!(
                "persistence {} must be below 1",
                self.persistence()
            ))
        })
    }
}

/// Simulates `n` returns on the unit grid. The pre-sample variances and
/// squared innovations sit at the unconditional variance.
pub fn garch_simulate(spec: &GarchSpec, n: usize, rng: &mut RandomSource) -> Result<ReturnSeries> {
    spec.validate()?;
    ensure(n >= 1, || Error::Config("n must be at least 1".into()))?;
    let (p, q) = (spec.alpha.len(), spec.beta.len());
    let h_bar = spec.unconditional_variance();
    // ring buffers, most recent first
    let mut e2_hist = vec![h_bar; p];
    let mut h_hist = vec![h_bar; q];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut h = spec.omega;
        for (a, e2) in spec.alpha.iter().zip(&e2_hist) {
            h += a * e2;
        }
        for (b, hp) in spec.beta.iter().zip(&h_hist) {
            h += b * hp;
        }
        let e = h.sqrt() * rng.standard_normal();
        out.push(spec.mu + e);
        if p > 0 {
            e2_hist.rotate_right(1);
            e2_hist[0] = e * e;
        }
        if q > 0 {
            h_hist.rotate_right(1);
            h_hist[0] = h;
        }
    }
    ReturnSeries::from_values(out, 1.0)
}

/// Deterministic GARCH(1,1) variance recursion driven by given innovations
/// `e = r - mu`: `h[i + 1] = omega + alpha e[i]^2 + beta h[i]`, `h[0] = h_init`.
/// No stationarity requirement, so boundary cases such as `beta = 1` can be
/// iterated.
pub fn garch_recursion(omega: f64, alpha: f64, beta: f64, innovations: &[f64], h_init: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(innovations.len() + 1);
    let mut h = h_init;
    out.push(h);
    for e in innovations {
        h = omega + alpha * (e * e) + beta * h;
        out.push(h);
    }
    out
}

/// Gradient tolerance on the mean negative log-likelihood in the
/// optimizer's unconstrained coordinates.
pub const GRADIENT_TOLERANCE: f64 = 1e-6;

/// Upper bound on `alpha + beta` imposed by the fitter.
pub const MAX_PERSISTENCE: f64 = 1.0 - 1e-6;

/// Fits with `alpha + beta` at or above this are flagged nonstationary.
pub const STATIONARITY_MARGIN: f64 = 1e-5;

const MAX_ITERATIONS: usize = 1000;

// (persistence, alpha share) per start; omega starts at the matching
// unconditional level
const STARTS: [(f64, f64); 5] = [(0.5, 0.2), (0.9, 0.1), (0.95, 0.05), (0.99, 0.05), (0.7, 0.5)];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GarchFit {
    pub spec: GarchSpec,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    pub stationary: bool,
    /// Asymptotic standard errors of `(omega, alpha, beta, mu)` from the
    /// observed information; absent when the Hessian is not invertible.
    pub std_errors: Option<[f64; 4]>,
    /// Log-likelihood at each multi-start initial point.
    pub start_log_likelihoods: Vec<f64>,
}

struct Likelihood<'a> {
    r: &'a [f64],
    h1: f64,
    mean: f64,
    sd: f64,
}

impl Likelihood<'_> {
    /// Total negative log-likelihood (without the `ln 2 pi` constant) and its
    /// gradient in `(omega, alpha, beta, mu)`.
    fn natural(&self, x: &[f64; 4]) -> (f64, [f64; 4]) {
        let [omega, alpha, beta, mu] = *x;
        let mut h = self.h1;
        let mut dh = [0.0; 4];
        let mut nll = 0.0;
        let mut grad = [0.0; 4];
        let mut e_prev = 0.0;
        for (t, &r) in self.r.iter().enumerate() {
            let e = r - mu;
            if t > 0 {
                let h_prev = h;
                dh = [
                    1.0 + beta * dh[0],
                    e_prev * e_prev + beta * dh[1],
                    h_prev + beta * dh[2],
                    -2.0 * alpha * e_prev + beta * dh[3],
                ];
                h = omega + alpha * e_prev * e_prev + beta * h_prev;
            }
            if !(h > 0.0 && h.is_finite()) {
                return (f64::INFINITY, [f64::NAN; 4]);
            }
            let e2h = e * e / h;
            nll += 0.5 * (h.ln() + e2h);
            let w = 0.5 * (1.0 - e2h) / h;
            for k in 0..4 {
                grad[k] += w * dh[k];
            }
            grad[3] -= e / h;
            e_prev = e;
        }
        (nll, grad)
    }

    fn to_natural(&self, theta: &SVector<f64, 4>) -> [f64; 4] {
        let s = MAX_PERSISTENCE * logistic(theta[1]);
        let share = logistic(theta[2]);
        [
            theta[0].exp() * self.h1,
            s * share,
            s * (1.0 - share),
            self.mean + theta[3] * self.sd,
        ]
    }

    fn to_theta(&self, omega: f64, persistence: f64, share: f64) -> SVector<f64, 4> {
        SVector::from([
            (omega / self.h1).ln(),
            logit(persistence / MAX_PERSISTENCE),
            logit(share),
            0.0,
        ])
    }

    /// Mean NLL and gradient in the unconstrained coordinates.
    fn scaled(&self, theta: &SVector<f64, 4>) -> (f64, SVector<f64, 4>) {
        let x = self.to_natural(theta);
        let (nll, g) = self.natural(&x);
        let n = self.r.len() as f64;
        if !nll.is_finite() {
            return (f64::INFINITY, SVector::from([f64::NAN; 4]));
        }
        let sig1 = logistic(theta[1]);
        let ds = MAX_PERSISTENCE * sig1 * (1.0 - sig1);
        let share = logistic(theta[2]);
        let s = MAX_PERSISTENCE * sig1;
        let dshare = share * (1.0 - share);
        let grad = SVector::from([
            g[0] * x[0],
            (g[1] * share + g[2] * (1.0 - share)) * ds,
            (g[1] - g[2]) * s * dshare,
            g[3] * self.sd,
        ]);
        (nll / n, grad / n)
    }
}

fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

struct Descent {
    theta: SVector<f64, 4>,
    value: f64,
    converged: bool,
    iterations: usize,
}

/// BFGS with Armijo backtracking.
fn bfgs(lik: &Likelihood, theta0: SVector<f64, 4>) -> Descent {
    let mut theta = theta0;
    let (mut f, mut g) = lik.scaled(&theta);
    let mut inv_h = SMatrix::<f64, 4, 4>::identity();
    for iter in 0..MAX_ITERATIONS {
        if g.norm() < GRADIENT_TOLERANCE {
            return Descent { theta, value: f, converged: true, iterations: iter };
        }
        let mut dir = -(inv_h * g);
        if dir.dot(&g) >= 0.0 {
            inv_h = SMatrix::identity();
            dir = -g;
        }
        // keep trial points away from exp overflow
        let len = dir.norm();
        if len > 5.0 {
            dir *= 5.0 / len;
        }
        let slope = dir.dot(&g);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = theta + dir * step;
            let (ft, gt) = lik.scaled(&trial);
            if ft.is_finite() && ft <= f + 1e-4 * step * slope {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((next, f_next, g_next)) = accepted else {
            // no further decrease representable
            return Descent { theta, value: f, converged: false, iterations: iter };
        };
        let s = next - theta;
        let y = g_next - g;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            let rho = 1.0 / sy;
            let eye = SMatrix::<f64, 4, 4>::identity();
            let left = eye - s * y.transpose() * rho;
            let right = eye - y * s.transpose() * rho;
            inv_h = left * inv_h * right + s * s.transpose() * rho;
        }
        theta = next;
        f = f_next;
        g = g_next;
    }
    let converged = g.norm() < GRADIENT_TOLERANCE;
    Descent { theta, value: f, converged, iterations: MAX_ITERATIONS }
}

/// Observed-information standard errors via central differences of the
/// analytic gradient.
fn standard_errors(lik: &Likelihood, x: &[f64; 4]) -> Option<[f64; 4]> {
    let mut hess = DMatrix::<f64>::zeros(4, 4);
    for j in 0..4 {
        let step = 1e-5 * x[j].abs().max(1e-3);
        let mut up = *x;
        let mut down = *x;
        up[j] += step;
        down[j] -= step;
        let (fu, gu) = lik.natural(&up);
        let (fd, gd) = lik.natural(&down);
        if !(fu.is_finite() && fd.is_finite()) {
            return None;
        }
        for i in 0..4 {
            hess[(i, j)] = (gu[i] - gd[i]) / (2.0 * step);
        }
    }
    let sym = (&hess + hess.transpose()) * 0.5;
    let cov = sym.try_inverse()?;
    let mut se = [0.0; 4];
    for (i, v) in se.iter_mut().enumerate() {
        let d = cov[(i, i)];
        if !(d > 0.0 && d.is_finite()) {
            return None;
        }
        *v = d.sqrt();
    }
    Some(se)
}

/// Gaussian conditional maximum likelihood for GARCH(1,1), with the
/// recursion started at the sample variance. Deterministic: five fixed
/// starting points, best likelihood wins.
pub fn garch_fit(returns: &ReturnSeries) -> Result<GarchFit> {
    let r = returns.returns();
    ensure(r.len() >= 3, || {
        Error::SampleSize(format!("{} returns; at least 3 required", r.len()))
    })?;
    let var = sample_variance(r);
    let scale = r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    ensure(var.sqrt() > 1e-12 * scale, || {
        Error::Degenerate("returns are constant".into())
    })?;
    let lik = Likelihood {
        r,
        h1: var,
        mean: mean(r),
        sd: var.sqrt(),
    };
    let n = r.len() as f64;
    let constant = 0.5 * n * (2.0 * std::f64::consts::PI).ln();

    let mut best: Option<Descent> = None;
    let mut start_log_likelihoods = Vec::with_capacity(STARTS.len());
    let mut total_iterations = 0;
    for &(persistence, share) in &STARTS {
        let theta0 = lik.to_theta(var * (1.0 - persistence), persistence, share);
        let (f0, _) = lik.scaled(&theta0);
        start_log_likelihoods.push(-(f0 * n) - constant);
        let run = bfgs(&lik, theta0);
        total_iterations += run.iterations;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one start");
    let x = lik.to_natural(&best.theta);
    let spec = GarchSpec::garch11(x[0], x[1], x[2], x[3]);
    let fit = GarchFit {
        stationary: spec.persistence() < 1.0 - STATIONARITY_MARGIN,
        spec,
        log_likelihood: -(best.value * n) - constant,
        converged: best.converged,
        iterations: total_iterations,
        std_errors: standard_errors(&lik, &x),
        start_log_likelihoods,
    };
    if fit.converged {
        Ok(fit)
    } else {
        Err(Error::Convergence {
            iterations: total_iterations,
            best: Box::new(fit),
        })
    }
}

/// Maximized Gaussian i.i.d. log-likelihood, the null model nested at
/// `alpha = beta = 0`.
pub fn gaussian_log_likelihood(returns: &[f64]) -> f64 {
    let n = returns.len() as f64;
    let m = mean(returns);
    let var = returns.iter().map(|r| (r - m).powi(2)).sum::<f64>() / n;
    -0.5 * n * ((2.0 * std::f64::consts::PI * var).ln() + 1.0)
}
