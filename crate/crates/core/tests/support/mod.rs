//! Independent reference computations shared by the integration suites.
//!
//! Nothing here calls into the code paths it is used to check: MAP posteriors
//! come from exhaustive enumeration, LP optima from enumerating vertices, and
//! `φ` from numerical integration of its defining expectation.
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use rand::Rng;
use slt_core::optimizer::{Constraint, LpProblem, Relation};
use slt_core::SltCode;

/// Exact bitwise posterior LLRs of the source bits given channel LLRs `z`,
/// by summing over all `2^K` source words.
pub fn brute_force_map(code: &SltCode, z: &[f64]) -> Vec<f64> {
    let k = code.k();
    assert!(k <= 16, "enumeration is exponential in K");
    let mut log_w0 = vec![f64::NEG_INFINITY; k];
    let mut log_w1 = vec![f64::NEG_INFINITY; k];
    for word in 0u32..(1 << k) {
        let u: Vec<u8> = (0..k).map(|i| ((word >> i) & 1) as u8).collect();
        // parities by hand, independent of SltCode::encode
        let mut c = u.clone();
        for nbrs in code.checks() {
            c.push(nbrs.iter().fold(0, |acc, &s| acc ^ u[s]));
        }
        let log_w: f64 = c
            .iter()
            .zip(z)
            .map(|(&b, &l)| if b == 0 { l / 2.0 } else { -l / 2.0 })
            .sum();
        for i in 0..k {
            let slot = if u[i] == 0 {
                &mut log_w0[i]
            } else {
                &mut log_w1[i]
            };
            *slot = log_add(*slot, log_w);
        }
    }
    log_w0.iter().zip(&log_w1).map(|(a, b)| a - b).collect()
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Random code whose source/check graph is a forest: every check joins
/// sources from distinct connected components.
pub fn random_forest_code<R: Rng>(k: usize, max_checks: usize, rng: &mut R) -> SltCode {
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut checks = Vec::new();
    for _ in 0..max_checks {
        let want = rng.random_range(1..=k.min(4));
        let mut nbrs: Vec<usize> = Vec::new();
        let mut roots: Vec<usize> = Vec::new();
        for _ in 0..4 * k {
            if nbrs.len() == want {
                break;
            }
            let s = rng.random_range(0..k);
            let r = find(&mut parent, s);
            if !roots.contains(&r) {
                roots.push(r);
                nbrs.push(s);
            }
        }
        for w in roots.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
        checks.push(nbrs);
    }
    SltCode::from_neighbors(k, checks, 0).unwrap()
}

/// `φ(x) = 1 - E[tanh(R/2)]`, `R ~ N(x, 2x)`, by composite Simpson in the
/// standardized variable over `[-12, 12]`.
pub fn phi_quadrature(x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let n = 8000;
    let (a, b) = (-12.0f64, 12.0f64);
    let h = (b - a) / n as f64;
    let s = (2.0 * x).sqrt();
    let f = |t: f64| ((x + s * t) / 2.0).tanh() * (-t * t / 2.0).exp();
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let t = a + i as f64 * h;
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(t);
    }
    1.0 - acc * h / 3.0 / (2.0 * std::f64::consts::PI).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleOutcome {
    Optimal(f64),
    Infeasible,
}

/// Minimum of `c·x` over the vertices of `{x >= 0, rows}`, by trying every
/// choice of `n` active hyperplanes. Only valid when the LP is bounded.
pub fn vertex_enumeration(lp: &LpProblem) -> OracleOutcome {
    let n = lp.objective.len();
    let mut planes: Vec<(Vec<f64>, f64)> = lp
        .constraints
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs))
        .collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e, 0.0));
    }
    let mut best: Option<f64> = None;
    let mut chosen = Vec::with_capacity(n);
    subsets(planes.len(), n, 0, &mut chosen, &mut |idx| {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_dense(a, b) {
            if x.iter().all(|&v| v >= -1e-9) && lp.constraints.iter().all(|c| satisfied(c, &x)) {
                let obj: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
        }
    });
    best.map_or(OracleOutcome::Infeasible, OracleOutcome::Optimal)
}

fn satisfied(c: &Constraint, x: &[f64]) -> bool {
    let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
    let tol = 1e-9 * (1.0 + c.rhs.abs());
    match c.relation {
        Relation::Ge => lhs >= c.rhs - tol,
        Relation::Le => lhs <= c.rhs + tol,
        Relation::Eq => (lhs - c.rhs).abs() <= tol,
    }
}

fn subsets(
    total: usize,
    k: usize,
    start: usize,
    cur: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..total {
        cur.push(i);
        subsets(total, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Gaussian elimination with partial pivoting; `None` when (nearly) singular.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Bounded random LP with at most 6 variables and 8 rows.
pub fn random_lp<R: Rng>(rng: &mut R) -> LpProblem {
    let n = rng.random_range(1..=6);
    let m = rng.random_range(1..=8);
    let signed_costs = rng.random_bool(0.5);
    let objective: Vec<f64> = (0..n)
        .map(|_| {
            if signed_costs {
                rng.random_range(-1.0..1.0)
            } else {
                rng.random_range(0.0..1.0)
            }
        })
        .collect();
    let mut constraints: Vec<Constraint> = (0..m)
        .map(|_| {
            let coeffs = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let relation = match rng.random_range(0..5) {
                0 | 1 => Relation::Ge,
                2 | 3 => Relation::Le,
                _ => Relation::Eq,
            };
            Constraint::new(coeffs, relation, rng.random_range(-1.0..2.0))
        })
        .collect();
    if signed_costs {
        // keep the feasible set bounded
        let last = constraints.len() - 1;
        constraints[last] = Constraint::new(vec![1.0; n], Relation::Le, 5.0);
    }
    LpProblem {
        objective,
        constraints,
    }
}
