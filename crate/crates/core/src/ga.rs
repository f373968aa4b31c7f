//! Gaussian-approximation density evolution for SLT codes.
//!
//! Every message is modelled as a symmetric Gaussian `N(µ, 2µ)`, so only the
//! means are tracked. The check-side update goes through
//! `φ(µ) = 1 - E[tanh(R/2)]`, evaluated with a two-branch closed-form
//! approximation; `φ⁻¹` inverts that same approximation so the recursion is
//! self-consistent.
//!
//! The approximation is not continuous. Near zero the first branch tends to
//! `e^{-0.0218} < 1` while `φ(0) = 1`, and at `x = 10` the second branch starts
//! about 0.0026 above where the first one ends. [`phi_inv`] maps values in
//! either gap to the gap's abscissa (0 or 10).

use alloc::vec::Vec;

use crate::bounds::q_func;
use crate::degree_dist::{
    poisson_node_dist, DistError, EdgeDegreeDistribution, NodeDegreeDistribution, PoissonParams,
    DEFAULT_TAIL_TOL,
};

/// Switch point between the two branches of the approximation.
pub const PHI_BRANCH_POINT: f64 = 10.0;
/// Upper end of the bisection bracket for [`phi_inv`].
pub const PHI_INV_MAX: f64 = 500.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GaError {
    #[error("phi is defined for x >= 0, got {0}")]
    NegativeArgument(f64),
    #[error("phi_inv needs 0 < y <= 1, got {0}")]
    OutOfRange(f64),
    #[error("noise variance must be positive, got {0}")]
    InvalidVariance(f64),
    #[error("overhead must be non-negative, got {0}")]
    InvalidOverhead(f64),
    #[error(transparent)]
    Distribution(#[from] DistError),
}

fn phi_low(x: f64) -> f64 {
    libm::exp(-(0.4527 * libm::pow(x, 0.86) + 0.0218))
}

fn phi_high(x: f64) -> f64 {
    libm::sqrt(core::f64::consts::PI / x) * (1.0 - 10.0 / (7.0 * x)) * libm::exp(-x / 4.0)
}

/// `φ` without the domain check. Callers guarantee `x >= 0`.
pub(crate) fn phi_approx(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if x < PHI_BRANCH_POINT {
        phi_low(x)
    } else {
        phi_high(x)
    }
}

/// `φ(x)`: 1 at zero, `e^{-(0.4527 x^0.86 + 0.0218)}` on `(0, 10)`,
/// `√(π/x) (1 - 10/(7x)) e^{-x/4}` from 10 on.
pub fn phi(x: f64) -> Result<f64, GaError> {
    if !(x >= 0.0) {
        return Err(GaError::NegativeArgument(x));
    }
    Ok(phi_approx(x))
}

fn bisect(f: impl Fn(f64) -> f64, y: f64, mut lo: f64, mut hi: f64) -> f64 {
    // f is decreasing on [lo, hi]
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub(crate) fn phi_inv_approx(y: f64) -> f64 {
    let low_at_zero = libm::exp(-0.0218);
    let low_at_branch = phi_low(PHI_BRANCH_POINT);
    let high_at_branch = phi_high(PHI_BRANCH_POINT);
    if y >= low_at_zero {
        0.0
    } else if y > high_at_branch {
        bisect(phi_low, y, 0.0, PHI_BRANCH_POINT)
    } else if y >= low_at_branch {
        PHI_BRANCH_POINT
    } else if y <= phi_high(PHI_INV_MAX) {
        PHI_INV_MAX
    } else {
        bisect(phi_high, y, PHI_BRANCH_POINT, PHI_INV_MAX)
    }
}

/// Inverse of [`phi`] by bisection on `[0, 500]`, branch by branch.
pub fn phi_inv(y: f64) -> Result<f64, GaError> {
    if !(y > 0.0 && y <= 1.0) {
        return Err(GaError::OutOfRange(y));
    }
    Ok(phi_inv_approx(y))
}

/// Mean of the message a degree-`j` check sends, given the edge-averaged
/// `φ̄ = Σ λ_i φ(µ_{Q,i})` of its incoming source messages.
pub fn check_update_from_phi(phi_bar: f64, j: usize, sigma2: f64) -> f64 {
    let channel = 2.0 / sigma2;
    if j <= 1 {
        return channel;
    }
    let inner = 1.0 - (1.0 - phi_approx(channel)) * libm::pow(1.0 - phi_bar, (j - 1) as f64);
    phi_inv_approx(inner.clamp(f64::MIN_POSITIVE, 1.0))
}

/// `φ⁻¹(1 - (1 - φ(2/σ²))(1 - φ(µ_Q))^{j-1})`. Exactly `2/σ²` for `j = 1`.
pub fn check_update(mu_q: f64, j: usize, sigma2: f64) -> f64 {
    check_update_from_phi(phi_approx(mu_q.max(0.0)), j, sigma2)
}

/// `µ_{Q,i} = 2/σ² + (i - 1) µ_R`.
pub fn source_update(mu_r: f64, i: usize, sigma2: f64) -> f64 {
    2.0 / sigma2 + (i as f64 - 1.0) * mu_r
}

/// Decision error rate `Σ Λ_i Q(√((2/σ² + i µ_R)/2))`.
///
/// With `include_degree_zero == false` the sum runs over `i >= 1` and is
/// renormalized by the mass there; if that mass is zero the full sum is used.
pub fn predict_ber(
    mu_r: f64,
    lambda_node: &NodeDegreeDistribution,
    sigma2: f64,
    include_degree_zero: bool,
) -> f64 {
    let term = |i: usize| q_func(libm::sqrt((2.0 / sigma2 + i as f64 * mu_r) / 2.0));
    let positive = lambda_node.positive_mass();
    if include_degree_zero || positive == 0.0 {
        lambda_node.iter().map(|(i, p)| p * term(i)).sum()
    } else {
        lambda_node
            .iter()
            .filter(|&(i, _)| i > 0)
            .map(|(i, p)| p * term(i))
            .sum::<f64>()
            / positive
    }
}

/// Left-hand side minus right-hand side of the growth condition
/// `α Σ ω_j f_j(µ) + 2/σ² > µ`. Positive means the mean keeps growing at `µ`.
pub fn growth_margin(alpha: f64, omega_edge: &EdgeDegreeDistribution, mu: f64, sigma2: f64) -> f64 {
    alpha
        * omega_edge
            .iter()
            .map(|(j, w)| w * check_update(mu, j, sigma2))
            .sum::<f64>()
        + 2.0 / sigma2
        - mu
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub sigma2: f64,
    /// Check-node degree distribution `Ω`.
    pub omega: NodeDegreeDistribution,
    pub epsilon: f64,
    pub max_iters: usize,
    /// Relative change of `µ_R` below which the recursion counts as converged.
    pub conv_tol: f64,
    pub poisson_tail_tol: f64,
    pub include_degree_zero: bool,
}

impl GaConfig {
    pub fn new(omega: NodeDegreeDistribution, sigma2: f64, epsilon: f64) -> Self {
        GaConfig {
            sigma2,
            omega,
            epsilon,
            max_iters: 1000,
            conv_tol: 1e-6,
            poisson_tail_tol: DEFAULT_TAIL_TOL,
            include_degree_zero: true,
        }
    }

    /// Mean source degree `α = β ε`.
    pub fn alpha(&self) -> f64 {
        self.omega.avg_degree() * self.epsilon
    }
}

/// Per-iteration means and predicted error rate.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GaTrajectory {
    /// `µ_R^{(l)}`, check-to-source mean averaged over check edges.
    pub mu_r: Vec<f64>,
    /// Edge-averaged source-to-check mean produced from `µ_R^{(l)}`.
    pub mu_q: Vec<f64>,
    pub ber: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl GaTrajectory {
    pub fn final_ber(&self) -> f64 {
        self.ber.last().copied().unwrap_or(f64::NAN)
    }

    pub fn final_mu_r(&self) -> f64 {
        self.mu_r.last().copied().unwrap_or(f64::NAN)
    }
}

/// Runs the mean recursion until `µ_R` settles or `max_iters` is hit.
///
/// The source side is Poisson with mean `α = β(Ω) ε`: its edge view `λ` weights
/// `φ` inside the check update and its node view `Λ` weights the error rate.
pub fn evolve(cfg: &GaConfig) -> Result<GaTrajectory, GaError> {
    if !(cfg.sigma2 > 0.0) || !cfg.sigma2.is_finite() {
        return Err(GaError::InvalidVariance(cfg.sigma2));
    }
    if !(cfg.epsilon >= 0.0) || !cfg.epsilon.is_finite() {
        return Err(GaError::InvalidOverhead(cfg.epsilon));
    }
    let sigma2 = cfg.sigma2;
    let channel = 2.0 / sigma2;
    let lambda_node = poisson_node_dist(&PoissonParams::new(cfg.alpha(), cfg.poisson_tail_tol)?);
    let mut traj = GaTrajectory::default();

    let lambda_edge = match lambda_node.to_edge_dist() {
        Ok(e) => e,
        Err(DistError::ZeroMean) => {
            // No check nodes: nothing flows, the source bits see the raw channel.
            traj.mu_r.push(0.0);
            traj.mu_q.push(channel);
            traj.ber.push(q_func(1.0 / libm::sqrt(sigma2)));
            traj.iterations = 1;
            traj.converged = true;
            return Ok(traj);
        }
        Err(e) => return Err(e.into()),
    };
    let omega_edge = cfg.omega.to_edge_dist()?;
    let lambda: Vec<(usize, f64)> = lambda_edge.iter().collect();
    let omega: Vec<(usize, f64)> = omega_edge.iter().collect();

    let mut mu_q_by_degree: Vec<f64> = lambda.iter().map(|_| channel).collect();
    let mut previous: Option<f64> = None;
    for iter in 1..=cfg.max_iters.max(1) {
        let phi_bar: f64 = lambda
            .iter()
            .zip(&mu_q_by_degree)
            .map(|(&(_, w), &mu)| w * phi_approx(mu))
            .sum();
        let mu_r: f64 = omega
            .iter()
            .map(|&(j, w)| w * check_update_from_phi(phi_bar, j, sigma2))
            .sum();
        for (mu, &(i, _)) in mu_q_by_degree.iter_mut().zip(&lambda) {
            *mu = source_update(mu_r, i, sigma2);
        }
        let mu_q: f64 = lambda
            .iter()
            .zip(&mu_q_by_degree)
            .map(|(&(_, w), &mu)| w * mu)
            .sum();

        traj.mu_r.push(mu_r);
        traj.mu_q.push(mu_q);
        traj.ber
            .push(predict_ber(mu_r, &lambda_node, sigma2, cfg.include_degree_zero).clamp(0.0, 0.5));
        traj.iterations = iter;

        if let Some(prev) = previous {
            if (mu_r - prev).abs() <= cfg.conv_tol * mu_r.abs() {
                traj.converged = true;
                break;
            }
        }
        previous = Some(mu_r);
    }
    Ok(traj)
}
