//! Degree distributions from the node and the edge perspective.
//!
//! A node distribution `Ω(x) = Σ Ω_i x^i` gives the probability that a node
//! has degree `i`; the matching edge distribution `ω(x) = Ω'(x)/Ω'(1)` gives
//! the fraction of edges attached to degree-`i` nodes. Both are stored
//! sparsely as sorted `(degree, probability)` pairs.

use alloc::vec::Vec;

use rand::Rng;

/// Accepted deviation of `Σ p` from 1 at construction time.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Default Poisson truncation: stop once the remaining tail mass drops below this.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DistError {
    #[error("probabilities sum to {sum}, expected 1")]
    NonNormalized { sum: f64 },
    #[error("degree {degree} has invalid probability {prob}")]
    NegativeProbability { degree: usize, prob: f64 },
    #[error("degree {0} listed more than once")]
    DuplicateDegree(usize),
    #[error("degrees must be at least 1")]
    ZeroDegree,
    #[error("distribution has no mass on positive degrees")]
    ZeroMean,
    #[error("invalid Poisson parameters: alpha = {alpha}, tail_tol = {tail_tol}")]
    InvalidPoisson { alpha: f64, tail_tol: f64 },
}

/// Shared storage: sorted support plus the cumulative sums used for sampling.
#[derive(Debug, Clone, PartialEq)]
struct Pmf {
    support: Vec<(usize, f64)>,
    cdf: Vec<f64>,
}

impl Pmf {
    fn validated(pairs: &[(usize, f64)], allow_zero_degree: bool) -> Result<Self, DistError> {
        let mut support: Vec<(usize, f64)> = Vec::with_capacity(pairs.len());
        for &(degree, prob) in pairs {
            if degree == 0 && !allow_zero_degree {
                return Err(DistError::ZeroDegree);
            }
            if !(prob >= 0.0) || !prob.is_finite() {
                return Err(DistError::NegativeProbability { degree, prob });
            }
            support.push((degree, prob));
        }
        support.sort_by_key(|&(d, _)| d);
        for w in support.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(DistError::DuplicateDegree(w[0].0));
            }
        }
        let sum: f64 = support.iter().map(|&(_, p)| p).sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(DistError::NonNormalized { sum });
        }
        Ok(Self::normalized(support))
    }

    /// Drops zero entries and rescales. `support` must be sorted with positive total mass.
    fn normalized(mut support: Vec<(usize, f64)>) -> Self {
        support.retain(|&(_, p)| p > 0.0);
        let sum: f64 = support.iter().map(|&(_, p)| p).sum();
        // Already normalized up to rounding: keep the values so construction is idempotent.
        if (sum - 1.0).abs() > 4.0 * f64::EPSILON * support.len() as f64 {
            for entry in support.iter_mut() {
                entry.1 /= sum;
            }
        }
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = support
            .iter()
            .map(|&(_, p)| {
                acc += p;
                acc
            })
            .collect();
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        Pmf { support, cdf }
    }

    fn prob(&self, degree: usize) -> f64 {
        self.support
            .binary_search_by_key(&degree, |&(d, _)| d)
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }

    fn max_degree(&self) -> usize {
        self.support.last().map(|&(d, _)| d).unwrap_or(0)
    }

    fn mean(&self) -> f64 {
        self.support.iter().map(|&(d, p)| d as f64 * p).sum()
    }
}

/// Node-perspective distribution, `Ω(x)` for check nodes or `Λ(x)` for source nodes.
///
/// Immutable once built. Distributions from [`NodeDegreeDistribution::new`]
/// have degrees `>= 1`; only the Poisson source model may carry degree 0.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeDegreeDistribution(Pmf);

/// Edge-perspective distribution, `ω(x)` or `λ(x)`. Degrees are always `>= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDegreeDistribution(Pmf);

impl NodeDegreeDistribution {
    /// Validates `(degree, probability)` pairs. The sum must be within
    /// [`NORMALIZATION_TOL`] of 1; the stored values are rescaled to sum to 1.
    pub fn new(pairs: &[(usize, f64)]) -> Result<Self, DistError> {
        Pmf::validated(pairs, false).map(Self)
    }

    pub fn prob(&self, degree: usize) -> f64 {
        self.0.prob(degree)
    }

    /// Largest degree with positive probability.
    pub fn max_degree(&self) -> usize {
        self.0.max_degree()
    }

    /// Nonzero `(degree, probability)` pairs in increasing degree order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.support.iter().copied()
    }

    /// Average degree `Ω'(1) = Σ i Ω_i`.
    pub fn avg_degree(&self) -> f64 {
        self.0.mean()
    }

    /// `ω_j = j Ω_j / Ω'(1)`. Degree-0 mass carries no edges and vanishes.
    pub fn to_edge_dist(&self) -> Result<EdgeDegreeDistribution, DistError> {
        let mean = self.avg_degree();
        if !(mean > 0.0) {
            return Err(DistError::ZeroMean);
        }
        let support = self
            .iter()
            .filter(|&(d, _)| d > 0)
            .map(|(d, p)| (d, d as f64 * p / mean))
            .collect();
        Ok(EdgeDegreeDistribution(Pmf::normalized(support)))
    }

    /// Draws a degree by inverse-CDF lookup on one uniform variate.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let idx = self.0.cdf.partition_point(|&c| c <= u);
        self.0.support[idx.min(self.0.support.len() - 1)].0
    }

    /// Probability mass on degrees `>= 1`.
    pub fn positive_mass(&self) -> f64 {
        self.iter().filter(|&(d, _)| d > 0).map(|(_, p)| p).sum()
    }
}

impl EdgeDegreeDistribution {
    pub fn new(pairs: &[(usize, f64)]) -> Result<Self, DistError> {
        Pmf::validated(pairs, false).map(Self)
    }

    pub fn prob(&self, degree: usize) -> f64 {
        self.0.prob(degree)
    }

    pub fn max_degree(&self) -> usize {
        self.0.max_degree()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.support.iter().copied()
    }

    /// Mean degree seen from a random edge, `Σ j ω_j`.
    pub fn edge_mean(&self) -> f64 {
        self.0.mean()
    }

    /// Integrates back to the node view: `Ω_j ∝ ω_j / j`.
    pub fn to_node_dist(&self) -> NodeDegreeDistribution {
        let support = self.iter().map(|(d, p)| (d, p / d as f64)).collect();
        NodeDegreeDistribution(Pmf::normalized(support))
    }
}

/// Free-function form of [`EdgeDegreeDistribution::to_node_dist`].
pub fn from_edge_dist(edge: &EdgeDegreeDistribution) -> NodeDegreeDistribution {
    edge.to_node_dist()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonParams {
    /// Mean source-node degree.
    pub alpha: f64,
    pub tail_tol: f64,
}

impl PoissonParams {
    pub fn new(alpha: f64, tail_tol: f64) -> Result<Self, DistError> {
        if !(alpha >= 0.0) || !alpha.is_finite() || !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(DistError::InvalidPoisson { alpha, tail_tol });
        }
        Ok(PoissonParams { alpha, tail_tol })
    }

    pub fn with_alpha(alpha: f64) -> Result<Self, DistError> {
        Self::new(alpha, DEFAULT_TAIL_TOL)
    }
}

/// Truncated Poisson source-degree model `Λ_i = e^{-α} α^i / i!`, degree 0 included.
///
/// Terms are generated up to the smallest `d_s` past the mean whose remaining
/// tail is below `tail_tol`, then renormalized.
pub fn poisson_node_dist(params: &PoissonParams) -> NodeDegreeDistribution {
    let alpha = params.alpha;
    if alpha == 0.0 {
        return NodeDegreeDistribution(Pmf::normalized(alloc::vec![(0, 1.0)]));
    }
    let ln_alpha = libm::log(alpha);
    // Far enough out that the remaining mass underflows regardless of tail_tol.
    let hard_cap = (alpha + 40.0 * libm::sqrt(alpha) + 50.0) as usize;
    let mut support = Vec::new();
    let mut cumulative = 0.0;
    for i in 0..=hard_cap {
        let ln_p = -alpha + i as f64 * ln_alpha - libm::lgamma(i as f64 + 1.0);
        let p = libm::exp(ln_p);
        support.push((i, p));
        cumulative += p;
        if i as f64 >= alpha && 1.0 - cumulative < params.tail_tol {
            break;
        }
    }
    NodeDegreeDistribution(Pmf::normalized(support))
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 3] = ["omega1", "omega2", "omega3"];

/// The three LP-designed check distributions for `σ² = 1` with maximum
/// degrees 20, 50 and 100.
pub fn preset(name: &str) -> Option<NodeDegreeDistribution> {
    let pairs: &[(usize, f64)] = match name {
        "omega1" => &[(5, 0.7361), (20, 0.2639)],
        "omega2" => &[(5, 0.3189), (6, 0.5713), (50, 0.1098)],
        "omega3" => &[(6, 0.8966), (34, 0.0333), (100, 0.0701)],
        _ => return None,
    };
    NodeDegreeDistribution::new(pairs).ok()
}
