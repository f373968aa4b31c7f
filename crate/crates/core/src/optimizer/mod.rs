//! Check-node degree design by linear programming.
//!
//! With `θ_j = α ω_j` the growth condition
//! `α Σ_j ω_j f_j(µ) + 2/σ² > µ` is linear in `θ`, and the overhead
//! `ε = α/β = Σ_j θ_j / j` is a linear objective. The condition is imposed on
//! `L` equally spaced means `µ_k = (k+1) µ₀ / L`; the strict inequality becomes
//! `>= ... + slack`. The optimal `θ` factors into `α = Σ θ_j` and the edge
//! distribution `ω = θ / α`, from which the node distribution `Ω` follows.

mod simplex;

pub use simplex::{solve_lp, Constraint, LpError, LpProblem, LpSolution, LpStatus, Relation};

use alloc::vec::Vec;

use crate::degree_dist::{DistError, EdgeDegreeDistribution, NodeDegreeDistribution};
use crate::ga::{check_update, growth_margin};

/// `θ_j` below this are treated as zero before normalization.
pub const THETA_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DesignError {
    #[error("invalid design grid: {0}")]
    InvalidGrid(&'static str),
    #[error("design LP is infeasible")]
    Infeasible,
    #[error("design LP is unbounded")]
    Unbounded,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Distribution(#[from] DistError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignParams {
    /// Maximum check degree `d_c`.
    pub max_degree: usize,
    pub sigma2: f64,
    /// Upper end `µ₀` of the mean grid.
    pub mu0: f64,
    /// Number of grid points `L`.
    pub grid_points: usize,
    pub slack: f64,
}

impl Default for DesignParams {
    fn default() -> Self {
        DesignParams {
            max_degree: 20,
            sigma2: 1.0,
            mu0: 45.0,
            grid_points: 500,
            slack: 1e-6,
        }
    }
}

impl DesignParams {
    pub fn with_max_degree(max_degree: usize) -> Self {
        DesignParams {
            max_degree,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), DesignError> {
        if self.max_degree < 1 {
            return Err(DesignError::InvalidGrid("max degree must be at least 1"));
        }
        if self.grid_points < 2 {
            return Err(DesignError::InvalidGrid("need at least 2 grid points"));
        }
        if !(self.mu0 > 0.0) || !self.mu0.is_finite() {
            return Err(DesignError::InvalidGrid("mu0 must be positive"));
        }
        if !(self.slack >= 0.0) || !self.slack.is_finite() {
            return Err(DesignError::InvalidGrid("slack must be non-negative"));
        }
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(DesignError::InvalidGrid("sigma2 must be positive"));
        }
        Ok(())
    }

    /// The `L` grid means `(k+1) µ₀ / L`.
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.grid_points).map(move |k| (k + 1) as f64 * self.mu0 / self.grid_points as f64)
    }
}

/// `f_j(µ) = φ⁻¹(1 - (1 - φ(2/σ²))(1 - φ(µ))^{j-1})`.
pub fn f_j(mu: f64, j: usize, sigma2: f64) -> f64 {
    check_update(mu, j, sigma2)
}

/// One `>=` row per grid mean over `θ_1..θ_{d_c}`; sign constraints are implicit.
pub fn build_lp(params: &DesignParams) -> Result<LpProblem, DesignError> {
    params.validate()?;
    let dc = params.max_degree;
    let objective = (1..=dc).map(|j| 1.0 / j as f64).collect();
    let channel = 2.0 / params.sigma2;
    let constraints = params
        .grid()
        .map(|mu| {
            let coeffs = (1..=dc).map(|j| f_j(mu, j, params.sigma2)).collect();
            Constraint::new(coeffs, Relation::Ge, mu - channel + params.slack)
        })
        .collect();
    Ok(LpProblem {
        objective,
        constraints,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignResult {
    pub omega_check: NodeDegreeDistribution,
    pub edge_dist: EdgeDegreeDistribution,
    /// Mean source degree `α = Σ θ_j`.
    pub alpha: f64,
    /// Mean check degree of `omega_check`.
    pub beta: f64,
    /// Smallest overhead the LP certifies, `Σ θ_j / j = α / β`.
    pub epsilon_min: f64,
    /// Cleaned LP solution, `theta[j - 1] = θ_j`.
    pub theta: Vec<f64>,
}

impl DesignResult {
    /// Smallest growth margin over the design grid.
    pub fn min_growth_margin(&self, params: &DesignParams) -> f64 {
        params
            .grid()
            .map(|mu| growth_margin(self.alpha, &self.edge_dist, mu, params.sigma2))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Builds and solves the design LP, then factors the optimum into `α`, `ω` and `Ω`.
pub fn design_distribution(params: &DesignParams) -> Result<DesignResult, DesignError> {
    let lp = build_lp(params)?;
    let sol = solve_lp(&lp)?;
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(DesignError::Infeasible),
        LpStatus::Unbounded => return Err(DesignError::Unbounded),
    }
    let theta: Vec<f64> = sol
        .theta
        .iter()
        .map(|&t| if t < THETA_ZERO_TOL { 0.0 } else { t })
        .collect();
    let alpha: f64 = theta.iter().sum();
    if !(alpha > 0.0) {
        // Only possible when every grid mean is already below 2/σ² - slack.
        return Err(DesignError::InvalidGrid(
            "grid imposes no constraint; mu0 too small",
        ));
    }
    let pairs: Vec<(usize, f64)> = theta
        .iter()
        .enumerate()
        .filter(|&(_, &t)| t > 0.0)
        .map(|(i, &t)| (i + 1, t / alpha))
        .collect();
    let edge_dist = EdgeDegreeDistribution::new(&pairs)?;
    let omega_check = edge_dist.to_node_dist();
    let beta = omega_check.avg_degree();
    let epsilon_min = theta
        .iter()
        .enumerate()
        .map(|(i, t)| t / (i + 1) as f64)
        .sum();
    Ok(DesignResult {
        omega_check,
        edge_dist,
        alpha,
        beta,
        epsilon_min,
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::phi;

    #[test]
    fn f_j_values() {
        for mu in [0.1, 1.0, 30.0] {
            assert_eq!(f_j(mu, 1, 1.0), 2.0);
        }
        let y = 1.0 - (1.0 - phi(2.0).unwrap()) * (1.0 - phi(1.0).unwrap());
        assert!((y - 0.78477).abs() < 1e-4);
        let v = f_j(1.0, 2, 1.0);
        assert!((phi(v).unwrap() - y).abs() < 1e-9);
    }

    #[test]
    fn f_j_shrinks_with_degree() {
        for mu in [0.5, 2.0, 10.0] {
            for j in 1..20 {
                // more incoming edges dilute the extrinsic information
                assert!(f_j(mu, j + 1, 1.0) <= f_j(mu, j, 1.0), "mu={mu} j={j}");
            }
        }
    }

    #[test]
    fn lp_shape() {
        let params = DesignParams::default();
        let lp = build_lp(&params).unwrap();
        assert_eq!(lp.constraints.len(), 500);
        assert_eq!(lp.var_count(), 20);
        for c in &lp.constraints {
            if c.rhs <= 0.0 {
                assert_eq!(c.violation(&[0.0; 20]), 0.0);
            }
        }
        // θ_1 = max_k µ_k / f_1 satisfies every row.
        let mut cert = [0.0; 20];
        cert[0] = 45.0 / 2.0;
        assert_eq!(lp.max_violation(&cert), 0.0);
    }

    #[test]
    fn invalid_grids() {
        for bad in [
            DesignParams {
                grid_points: 1,
                ..DesignParams::default()
            },
            DesignParams {
                mu0: 0.0,
                ..DesignParams::default()
            },
            DesignParams {
                max_degree: 0,
                ..DesignParams::default()
            },
            DesignParams {
                slack: -1.0,
                ..DesignParams::default()
            },
        ] {
            assert!(matches!(build_lp(&bad), Err(DesignError::InvalidGrid(_))));
        }
    }

    #[test]
    fn degree_one_design() {
        let params = DesignParams::with_max_degree(1);
        let d = design_distribution(&params).unwrap();
        assert_eq!(d.omega_check.prob(1), 1.0);
        assert!((d.alpha - (45.0 - 2.0 + 1e-6) / 2.0).abs() < 1e-9);
        assert!((d.epsilon_min - d.alpha).abs() < 1e-12);
    }
}
