//! Gaussian tail helpers and the two error-floor lower bounds.
//!
//! `lb1` sums the Poisson-weighted tail `Σ Λ_i Q(√(i+1)/σ)` that results from
//! perfect check-to-source messages. `lb2` replaces `Q` by its leading
//! exponential term `Q₁(x) = e^{-x²/2}/12`, after which the Poisson sum has the
//! closed form `g/12 · e^{(g-1)βε}` with `g = e^{-1/(2σ²)}`.

use crate::degree_dist::{poisson_node_dist, PoissonParams, DEFAULT_TAIL_TOL};

/// Standard normal tail `Q(x) = erfc(x/√2)/2`.
pub fn q_func(x: f64) -> f64 {
    0.5 * libm::erfc(x / core::f64::consts::SQRT_2)
}

/// Two-term exponential approximation `e^{-x²/2}/12 + e^{-2x²/3}/4`.
///
/// Upper-bounds `Q(x)` for `x >= 0.666` (below that `Q` is larger, e.g. `Q(0) = 1/2 > 1/3`).
pub fn q_upper(x: f64) -> f64 {
    q1(x) + q2(x)
}

pub fn q1(x: f64) -> f64 {
    libm::exp(-x * x / 2.0) / 12.0
}

pub fn q2(x: f64) -> f64 {
    libm::exp(-2.0 * x * x / 3.0) / 4.0
}

/// `g(σ) = e^{-1/(2σ²)}`.
pub fn g(sigma: f64) -> f64 {
    libm::exp(-1.0 / (2.0 * sigma * sigma))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundError {
    #[error("invalid bound parameters: sigma = {sigma}, beta = {beta}, epsilon = {epsilon}")]
    InvalidParams { sigma: f64, beta: f64, epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    /// Noise standard deviation `σ_n`.
    pub sigma: f64,
    /// Average check degree.
    pub beta: f64,
    pub epsilon: f64,
    pub tail_tol: f64,
    /// Include the Poisson mass at degree 0 in `lb1`. Needed for `lb1` to match `lb2`.
    pub include_degree_zero: bool,
}

impl BoundParams {
    pub fn new(sigma: f64, beta: f64, epsilon: f64) -> Result<Self, BoundError> {
        let p = BoundParams {
            sigma,
            beta,
            epsilon,
            tail_tol: DEFAULT_TAIL_TOL,
            include_degree_zero: true,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), BoundError> {
        let ok = self.sigma > 0.0
            && self.sigma.is_finite()
            && self.beta >= 1.0
            && self.beta.is_finite()
            && self.epsilon >= 0.0
            && self.epsilon.is_finite()
            && self.tail_tol > 0.0
            && self.tail_tol < 1.0;
        if ok {
            Ok(())
        } else {
            Err(BoundError::InvalidParams {
                sigma: self.sigma,
                beta: self.beta,
                epsilon: self.epsilon,
            })
        }
    }

    /// Mean source degree `α = β ε`.
    pub fn alpha(&self) -> f64 {
        self.beta * self.epsilon
    }
}

/// Poisson-weighted sum of `tail(√(i+1)/σ)` over the truncated source-degree law.
pub fn poisson_tail_sum(p: &BoundParams, tail: impl Fn(f64) -> f64) -> f64 {
    let lambda = poisson_node_dist(&PoissonParams {
        alpha: p.alpha(),
        tail_tol: p.tail_tol,
    });
    lambda
        .iter()
        .filter(|&(i, _)| p.include_degree_zero || i > 0)
        .map(|(i, prob)| prob * tail(libm::sqrt(i as f64 + 1.0) / p.sigma))
        .fold(0.0, |acc, t| acc + t)
}

/// `LB₁ = Σ Λ_i Q(√(i+1)/σ_n)` with `Λ ~ Poisson(βε)`.
pub fn lb1(p: &BoundParams) -> f64 {
    poisson_tail_sum(p, q_func)
}

/// `LB₂ = g(σ)/12 · e^{(g(σ)-1)βε}`.
pub fn lb2(p: &BoundParams) -> f64 {
    let g = g(p.sigma);
    g / 12.0 * libm::exp((g - 1.0) * p.alpha())
}
