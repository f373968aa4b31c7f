//! Dense two-phase tableau simplex with Bland's pivoting rule.
//!
//! Solves `min c·x` subject to linear rows and `x >= 0`. Phase one minimizes
//! the sum of artificial variables; phase two optimizes the real objective
//! over the feasible basis phase one leaves behind. Bland's rule (lowest
//! eligible index for both entering and leaving variable) rules out cycling
//! and makes the pivot sequence a pure function of the input.

use alloc::vec;
use alloc::vec::Vec;

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-9;
const FEASIBILITY_EPS: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    /// Amount by which `x` violates this row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs: f64 = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.relation {
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `min objective·x` s.t. `constraints`, `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("constraint {row} has {got} coefficients, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("problem contains a non-finite coefficient")]
    NonFinite,
}

impl LpProblem {
    pub fn var_count(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.var_count();
        if !self.objective.iter().all(|c| c.is_finite()) {
            return Err(LpError::NonFinite);
        }
        for (row, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::RowLength {
                    row,
                    expected: n,
                    got: c.coeffs.len(),
                });
            }
            if !c.rhs.is_finite() || !c.coeffs.iter().all(|a| a.is_finite()) {
                return Err(LpError::NonFinite);
            }
        }
        Ok(())
    }

    /// Largest row violation at `x`, including the sign constraints.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.constraints.iter().map(|c| c.violation(x));
        let signs = x.iter().map(|&v| (-v).max(0.0));
        rows.chain(signs).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point when `status == Optimal`, otherwise empty.
    pub theta: Vec<f64>,
    pub objective_value: f64,
}

struct Tableau {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    data: Vec<f64>,
    rows: usize,
    cols: usize,
    basis: Vec<usize>,
    /// Reduced costs, with the negated objective value in the last slot.
    cost_row: Vec<f64>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width() + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn set_costs(&mut self, costs: &[f64]) {
        let w = self.width();
        self.cost_row = costs.to_vec();
        self.cost_row.push(0.0);
        for r in 0..self.rows {
            let cb = costs[self.basis[r]];
            if cb != 0.0 {
                let row = &self.data[r * w..(r + 1) * w];
                for (d, a) in self.cost_row.iter_mut().zip(row) {
                    *d -= cb * a;
                }
            }
        }
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width();
        let p = self.at(pr, pc);
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let factor = self.data[r * w + pc];
            if factor != 0.0 {
                for (v, a) in self.data[r * w..(r + 1) * w].iter_mut().zip(&pivot_row) {
                    *v -= factor * a;
                }
                self.data[r * w + pc] = 0.0;
            }
        }
        let factor = self.cost_row[pc];
        if factor != 0.0 {
            for (v, a) in self.cost_row.iter_mut().zip(&pivot_row) {
                *v -= factor * a;
            }
            self.cost_row[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Runs Bland-rule pivots until optimal. Returns `false` on an unbounded ray.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.cols).find(|&c| allowed[c] && self.cost_row[c] < -COST_EPS);
            let Some(pc) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_EPS {
                    let ratio = self.rhs(r) / a;
                    leaving = match leaving {
                        None => Some((r, ratio)),
                        Some((br, best)) => {
                            if ratio < best - 1e-12
                                || (ratio <= best + 1e-12 && self.basis[r] < self.basis[br])
                            {
                                Some((r, ratio))
                            } else {
                                Some((br, best))
                            }
                        }
                    };
                }
            }
            match leaving {
                Some((pr, _)) => self.pivot(pr, pc),
                None => return false,
            }
        }
    }
}

/// Solves the problem. Malformed input is an error; infeasibility and
/// unboundedness are reported through [`LpStatus`].
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution, LpError> {
    problem.validate()?;
    let n = problem.var_count();
    let m = problem.constraints.len();

    // Flip rows so every right-hand side is non-negative.
    let rows: Vec<(Vec<f64>, Relation, f64)> = problem
        .constraints
        .iter()
        .map(|c| {
            if c.rhs < 0.0 {
                let flipped = match c.relation {
                    Relation::Ge => Relation::Le,
                    Relation::Le => Relation::Ge,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|a| -a).collect(), flipped, -c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs)
            }
        })
        .collect();

    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n + slack_count + art_count;
    let art_start = n + slack_count;
    let width = cols + 1;

    let mut data = vec![0.0; m * width];
    let mut basis = vec![0; m];
    let (mut next_slack, mut next_art) = (n, art_start);
    for (r, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        let row = &mut data[r * width..(r + 1) * width];
        row[..n].copy_from_slice(coeffs);
        row[cols] = *rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = 1.0;
                basis[r] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
        }
    }

    let mut t = Tableau {
        data,
        rows: m,
        cols,
        basis,
        cost_row: Vec::new(),
    };

    if art_count > 0 {
        let mut phase1 = vec![0.0; cols];
        for c in phase1.iter_mut().skip(art_start) {
            *c = 1.0;
        }
        t.set_costs(&phase1);
        let all = vec![true; cols];
        t.optimize(&all);
        let infeasibility = -t.cost_row[cols];
        let scale = rows.iter().map(|r| r.2).fold(1.0, f64::max);
        if infeasibility > FEASIBILITY_EPS * scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                theta: Vec::new(),
                objective_value: f64::INFINITY,
            });
        }
        // Pivot zero-level artificials out where possible; rows that cannot
        // be pivoted are redundant and keep their artificial at zero.
        for r in 0..m {
            if t.basis[r] >= art_start {
                if let Some(c) = (0..art_start).find(|&c| t.at(r, c).abs() > PIVOT_EPS) {
                    t.pivot(r, c);
                }
            }
        }
    }

    let mut costs = vec![0.0; cols];
    costs[..n].copy_from_slice(&problem.objective);
    t.set_costs(&costs);
    let allowed: Vec<bool> = (0..cols).map(|c| c < art_start).collect();
    if !t.optimize(&allowed) {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            theta: Vec::new(),
            objective_value: f64::NEG_INFINITY,
        });
    }

    let mut theta = vec![0.0; n];
    for r in 0..m {
        if t.basis[r] < n {
            theta[t.basis[r]] = t.rhs(r).max(0.0);
        }
    }
    let objective_value = problem
        .objective
        .iter()
        .zip(&theta)
        .map(|(c, x)| c * x)
        .sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        theta,
        objective_value,
    })
}
