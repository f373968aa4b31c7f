//! Std companion to `slt-core`: text file formats, experiment configuration
//! and the seeded Monte Carlo harness behind the `slt` binary.

// Parameter guards use `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod formats;
pub mod harness;

pub use config::{parse_grid, ExperimentConfig, Mode};
pub use harness::{run_ber_point, run_sweep, BerRecord, HarnessError, SweepRow};
