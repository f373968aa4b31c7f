//! Systematic LT (SLT) codes over a BPSK/AWGN channel.
//!
//! The crate is `no_std` (it needs `alloc`) and holds the numerical core:
//!
//! - [`degree_dist`]: node/edge degree distributions, Poisson source model, sampling.
//! - [`channel`]: BPSK mapping, AWGN corruption and channel LLRs.
//! - [`codec`]: random code graphs, systematic encoding, log-domain BP decoding.
//! - [`ga`]: Gaussian-approximation density evolution (the `φ` machinery).
//! - [`optimizer`]: the check-degree design LP and a dense two-phase simplex.
//! - [`bounds`]: Q-function helpers and the two error-floor lower bounds.
//!
//! File formats, the Monte Carlo harness and the CLI live in the `slt` crate.
#![no_std]
// Parameter guards use `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod channel;
pub mod codec;
pub mod degree_dist;
pub mod ga;
pub mod optimizer;

pub use bounds::{lb1, lb2, q_func, BoundParams};
pub use channel::{awgn_transmit, channel_llr, modulate_bpsk, ChannelParams, ReceivedBlock};
pub use codec::{BpConfig, DecodeResult, SltCode};
pub use degree_dist::{EdgeDegreeDistribution, NodeDegreeDistribution, PoissonParams};
pub use ga::{evolve, phi, phi_inv, GaConfig, GaTrajectory};
pub use optimizer::{design_distribution, DesignParams, DesignResult};
