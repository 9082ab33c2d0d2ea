//! Univariate logistic regression fitted by Newton-Raphson (IRLS).
//!
//! Group membership is not a feature: the model pools both groups.

use alloc::format;
use alloc::vec::Vec;

use crate::datagen::Dataset;
use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 100;
pub const TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticModel {
    pub intercept: f64,
    pub slope: f64,
    /// False when the iteration cap was hit or the information matrix became
    /// singular, which happens under complete separation.
    pub converged: bool,
    pub iterations: usize,
}

impl LogisticModel {
    pub fn new(intercept: f64, slope: f64) -> Self {
        Self {
            intercept,
            slope,
            converged: true,
            iterations: 0,
        }
    }

    pub fn predict(&self, x: f64) -> f64 {
        sigmoid(self.intercept + self.slope * x)
    }

    /// Elementwise `sigma(intercept + slope * x)`.
    pub fn score(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&x| self.predict(x)).collect()
    }
}

pub fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + libm::exp(-eta))
    } else {
        let e = libm::exp(eta);
        e / (1.0 + e)
    }
}

/// Log-likelihood, score vector and Fisher information at one parameter point.
#[derive(Debug, Clone, Copy)]
struct Evaluation {
    log_lik: f64,
    gradient: [f64; 2],
    // [sum w, sum w x, sum w x^2]
    information: [f64; 3],
}

fn evaluate(x: &[f64], y: &[bool], beta: [f64; 2]) -> Evaluation {
    let mut log_lik = 0.0;
    let mut gradient = [0.0; 2];
    let mut information = [0.0; 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let eta = beta[0] + beta[1] * xi;
        // softplus(eta) = log(1 + e^eta) without overflow
        let e = libm::exp(-libm::fabs(eta));
        let softplus = eta.max(0.0) + libm::log1p(e);
        let p = if eta >= 0.0 {
            1.0 / (1.0 + e)
        } else {
            e / (1.0 + e)
        };
        let yf = if yi { 1.0 } else { 0.0 };
        log_lik += yf * eta - softplus;
        let r = yf - p;
        gradient[0] += r;
        gradient[1] += r * xi;
        let w = p * (1.0 - p);
        information[0] += w;
        information[1] += w * xi;
        information[2] += w * xi * xi;
    }
    Evaluation {
        log_lik,
        gradient,
        information,
    }
}

/// Binomial log-likelihood `sum y eta - log(1 + e^eta)` with `eta = b0 + b1 x`.
pub fn log_likelihood(x: &[f64], y: &[bool], beta: [f64; 2]) -> f64 {
    evaluate(x, y, beta).log_lik
}

/// Analytic gradient of [`log_likelihood`] with respect to `(b0, b1)`.
pub fn gradient(x: &[f64], y: &[bool], beta: [f64; 2]) -> [f64; 2] {
    evaluate(x, y, beta).gradient
}

/// Maximum-likelihood fit of `y ~ x` on the training records.
pub fn fit(train: &Dataset) -> Result<LogisticModel> {
    fit_xy(&train.x, &train.y)
}

/// Newton-Raphson with step halving whenever the likelihood drops.
///
/// Starts from `(logit(mean y), 0)`; stops once every component of the Newton
/// step is below [`TOLERANCE`], or after [`MAX_ITERATIONS`].
pub fn fit_xy(x: &[f64], y: &[bool]) -> Result<LogisticModel> {
    if x.len() != y.len() {
        return Err(Error::domain(
            "fit",
            format!("x has {} values but y has {}", x.len(), y.len()),
        ));
    }
    let positives = y.iter().filter(|&&v| v).count();
    if positives == 0 || positives == y.len() {
        return Err(Error::DegenerateData(format!(
            "{} training labels, {positives} positive",
            y.len()
        )));
    }

    let rate = (positives as f64 / y.len() as f64).clamp(1e-6, 1.0 - 1e-6);
    let mut beta = [libm::log(rate / (1.0 - rate)), 0.0];
    let mut current = evaluate(x, y, beta);
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let [a, b, c] = current.information;
        let det = a * c - b * b;
        if det.is_nan() || det <= 0.0 || !det.is_finite() {
            break;
        }
        let [g0, g1] = current.gradient;
        let step = [(c * g0 - b * g1) / det, (a * g1 - b * g0) / det];
        if !(step[0].is_finite() && step[1].is_finite()) {
            break;
        }

        let small = step[0].abs().max(step[1].abs()) < TOLERANCE;
        let mut t = 1.0;
        let (next_beta, next) = loop {
            let cand = [beta[0] + t * step[0], beta[1] + t * step[1]];
            let eval = evaluate(x, y, cand);
            let slack = 1e-12 * (1.0 + current.log_lik.abs());
            if eval.log_lik >= current.log_lik - slack || t < 1e-10 {
                break (cand, eval);
            }
            t *= 0.5;
        };
        beta = next_beta;
        current = next;
        if small {
            converged = true;
            break;
        }
    }

    Ok(LogisticModel {
        intercept: beta[0],
        slope: beta[1],
        converged,
        iterations,
    })
}
