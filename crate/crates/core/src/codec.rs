//! SLT code graphs, systematic encoding and log-domain BP decoding.
//!
//! The decoder works on the reduced bipartite graph: `K` source nodes on one
//! side, `M` check nodes on the other. Each check node carries its own channel
//! LLR `Z_{K+n}`, which enters the tanh rule as one more factor.
//!
//! ```text
//! R_{m,n} = 2 atanh( tanh(Z_{K+n}/2) * Π_{k ∈ S_n \ m} tanh(Q_{n,k}/2) )
//! Q_{n,m} = Z_m + Σ_{k ∈ S_m \ n} R_{m,k}
//! ```

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::degree_dist::NodeDegreeDistribution;

/// Messages are clamped to this magnitude before `tanh` and after `atanh`.
pub const DEFAULT_LLR_CLAMP: f64 = 30.0;
pub const DEFAULT_MAX_ITERS: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("check degree {degree} exceeds the number of source symbols {k}")]
    DegreeExceedsK { degree: usize, k: usize },
    #[error("expected length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("code needs at least one source symbol")]
    NoSourceSymbols,
    #[error("check node {0} has no neighbors")]
    EmptyCheck(usize),
    #[error("check node {check} lists source {index} which is out of range or repeated")]
    BadNeighbor { check: usize, index: usize },
    #[error("value at position {0} is not a bit")]
    NonBinary(usize),
    #[error("max_iters must be at least 1")]
    NoIterations,
}

/// A systematic LT code: `K` source symbols followed by `M` XOR parities.
///
/// Equivalent to the generator `G = [I G_LT]` and parity-check matrix
/// `H = [G_LTᵀ I]`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SltCode {
    k: usize,
    seed: u64,
    check_neighbors: Vec<Vec<usize>>,
    /// Edge ids are assigned check by check; check `n` owns `edge_start[n]..edge_start[n + 1]`.
    edge_start: Vec<usize>,
    /// Per source node, `(check, edge id)` in increasing check order.
    source_neighbors: Vec<Vec<(usize, usize)>>,
}

impl SltCode {
    /// Draws `m` check nodes: each samples a degree from `omega`, then that
    /// many distinct source indices uniformly at random.
    pub fn build(
        k: usize,
        m: usize,
        omega: &NodeDegreeDistribution,
        seed: u64,
    ) -> Result<Self, CodecError> {
        if k == 0 {
            return Err(CodecError::NoSourceSymbols);
        }
        if omega.max_degree() > k {
            return Err(CodecError::DegreeExceedsK {
                degree: omega.max_degree(),
                k,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let checks = (0..m)
            .map(|_| {
                let degree = omega.sample(&mut rng);
                let mut nbrs = index::sample(&mut rng, k, degree).into_vec();
                nbrs.sort_unstable();
                nbrs
            })
            .collect();
        Ok(Self::assemble(k, checks, seed))
    }

    /// Builds a code from explicit neighbor lists (lists are sorted on the way in).
    pub fn from_neighbors(
        k: usize,
        mut check_neighbors: Vec<Vec<usize>>,
        seed: u64,
    ) -> Result<Self, CodecError> {
        if k == 0 {
            return Err(CodecError::NoSourceSymbols);
        }
        for (n, nbrs) in check_neighbors.iter_mut().enumerate() {
            if nbrs.is_empty() {
                return Err(CodecError::EmptyCheck(n));
            }
            nbrs.sort_unstable();
            for (i, &s) in nbrs.iter().enumerate() {
                if s >= k || (i > 0 && nbrs[i - 1] == s) {
                    return Err(CodecError::BadNeighbor { check: n, index: s });
                }
            }
        }
        Ok(Self::assemble(k, check_neighbors, seed))
    }

    fn assemble(k: usize, check_neighbors: Vec<Vec<usize>>, seed: u64) -> Self {
        let mut edge_start = Vec::with_capacity(check_neighbors.len() + 1);
        let mut source_neighbors = vec![Vec::new(); k];
        let mut edge = 0;
        for (n, nbrs) in check_neighbors.iter().enumerate() {
            edge_start.push(edge);
            for &s in nbrs {
                source_neighbors[s].push((n, edge));
                edge += 1;
            }
        }
        edge_start.push(edge);
        SltCode {
            k,
            seed,
            check_neighbors,
            edge_start,
            source_neighbors,
        }
    }

    /// Number of source symbols `K`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of check (parity) symbols `M`.
    pub fn m(&self) -> usize {
        self.check_neighbors.len()
    }

    /// Codeword length `N = K + M`.
    pub fn n(&self) -> usize {
        self.k + self.m()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Overhead `ε = M / K`.
    pub fn overhead(&self) -> f64 {
        self.m() as f64 / self.k as f64
    }

    pub fn edge_count(&self) -> usize {
        *self.edge_start.last().unwrap_or(&0)
    }

    pub fn check_neighbors(&self, check: usize) -> &[usize] {
        &self.check_neighbors[check]
    }

    pub fn checks(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.check_neighbors.iter().map(Vec::as_slice)
    }

    /// Checks adjacent to a source node, ascending.
    pub fn source_neighbors(&self, source: usize) -> impl Iterator<Item = usize> + '_ {
        self.source_neighbors[source].iter().map(|&(n, _)| n)
    }

    /// `c = (u, u G_LT)`.
    pub fn encode(&self, source: &[u8]) -> Result<Vec<u8>, CodecError> {
        if source.len() != self.k {
            return Err(CodecError::LengthMismatch {
                expected: self.k,
                got: source.len(),
            });
        }
        if let Some(pos) = source.iter().position(|&b| b > 1) {
            return Err(CodecError::NonBinary(pos));
        }
        let mut out = Vec::with_capacity(self.n());
        out.extend_from_slice(source);
        out.extend(
            self.check_neighbors
                .iter()
                .map(|nbrs| nbrs.iter().fold(0u8, |acc, &s| acc ^ source[s])),
        );
        Ok(out)
    }

    /// `H cᵀ = 0`: every parity position equals the XOR of its neighbors.
    pub fn parity_check(&self, bits: &[u8]) -> Result<bool, CodecError> {
        if bits.len() != self.n() {
            return Err(CodecError::LengthMismatch {
                expected: self.n(),
                got: bits.len(),
            });
        }
        Ok(self.parity_holds(bits))
    }

    fn parity_holds(&self, bits: &[u8]) -> bool {
        self.check_neighbors.iter().enumerate().all(|(n, nbrs)| {
            nbrs.iter()
                .fold(bits[self.k + n] & 1, |acc, &s| acc ^ (bits[s] & 1))
                == 0
        })
    }

    /// BP decoding with the default stopping rules and clamp.
    pub fn decode_bp(&self, llr: &[f64], max_iters: usize) -> Result<DecodeResult, CodecError> {
        self.decode_with(
            llr,
            &BpConfig {
                max_iters,
                ..BpConfig::default()
            },
        )
    }

    /// Flooding-schedule BP on the source/check graph.
    ///
    /// Source-to-check messages start at the source channel LLRs. Each round
    /// updates every check, then every source. Parity positions of the hard
    /// decision come straight from their channel LLR.
    pub fn decode_with(&self, llr: &[f64], cfg: &BpConfig) -> Result<DecodeResult, CodecError> {
        if llr.len() != self.n() {
            return Err(CodecError::LengthMismatch {
                expected: self.n(),
                got: llr.len(),
            });
        }
        if cfg.max_iters == 0 {
            return Err(CodecError::NoIterations);
        }
        let clamp = |x: f64| x.clamp(-cfg.llr_clamp, cfg.llr_clamp);
        let k = self.k;

        let mut q = vec![0.0; self.edge_count()];
        for (s, adj) in self.source_neighbors.iter().enumerate() {
            for &(_, e) in adj {
                q[e] = llr[s];
            }
        }
        let mut r = vec![0.0; self.edge_count()];
        let parity_tanh: Vec<f64> = (0..self.m())
            .map(|n| libm::tanh(clamp(llr[k + n]) / 2.0))
            .collect();

        let mut posterior = llr[..k].to_vec();
        let mut hard_bits: Vec<u8> = llr.iter().map(|&z| u8::from(z < 0.0)).collect();
        let mut previous = hard_bits.clone();
        let mut stable_rounds = 0;
        let mut iterations_used = 0;
        let mut suffix = Vec::new();

        for iter in 1..=cfg.max_iters {
            iterations_used = iter;

            for n in 0..self.m() {
                let (start, end) = (self.edge_start[n], self.edge_start[n + 1]);
                // Extrinsic product via prefix and suffix products; no division by tanh values.
                suffix.clear();
                suffix.resize(end - start + 1, 1.0);
                for i in (start..end).rev() {
                    suffix[i - start] = suffix[i - start + 1] * libm::tanh(clamp(q[i]) / 2.0);
                }
                let mut prefix = parity_tanh[n];
                for i in start..end {
                    let t = prefix * suffix[i - start + 1];
                    r[i] = clamp(2.0 * libm::atanh(t));
                    prefix *= libm::tanh(clamp(q[i]) / 2.0);
                }
            }

            for (s, adj) in self.source_neighbors.iter().enumerate() {
                let total = llr[s] + adj.iter().map(|&(_, e)| r[e]).sum::<f64>();
                posterior[s] = total;
                for &(_, e) in adj {
                    q[e] = total - r[e];
                }
                hard_bits[s] = u8::from(total < 0.0);
            }

            if cfg.early_stop {
                if self.parity_holds(&hard_bits) {
                    break;
                }
                if hard_bits[..k] == previous[..k] {
                    stable_rounds += 1;
                    if stable_rounds >= 2 {
                        break;
                    }
                } else {
                    stable_rounds = 0;
                }
                previous.copy_from_slice(&hard_bits);
            }
        }

        let converged = self.parity_holds(&hard_bits);
        Ok(DecodeResult {
            hard_bits,
            posterior_llrs: posterior,
            iterations_used,
            converged,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpConfig {
    pub max_iters: usize,
    /// Stop once the hard decision satisfies every check, or has not changed
    /// for two consecutive rounds.
    pub early_stop: bool,
    pub llr_clamp: f64,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            max_iters: DEFAULT_MAX_ITERS,
            early_stop: true,
            llr_clamp: DEFAULT_LLR_CLAMP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    /// Length `N`; bit `k < K` is 1 iff its posterior LLR is negative.
    pub hard_bits: Vec<u8>,
    /// Length `K`.
    pub posterior_llrs: Vec<f64>,
    pub iterations_used: usize,
    /// Whether the hard decision satisfies every parity check.
    pub converged: bool,
}

impl DecodeResult {
    pub fn source_bits(&self) -> &[u8] {
        &self.hard_bits[..self.posterior_llrs.len()]
    }
}
