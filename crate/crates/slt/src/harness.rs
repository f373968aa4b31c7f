//! Seeded Monte Carlo BER sweeps plus the GA and bound columns.
//!
//! Every trial draws a fresh code graph with `M = round(εK)` checks, so the
//! average is over the code ensemble. Randomness is derived from the master
//! seed in two steps: one point seed per overhead index, then one ChaCha
//! stream per trial of that point. Trials run in fixed-size batches on the
//! rayon pool and the early-stop rule is only checked between batches, so the
//! result does not depend on thread count or scheduling.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use slt_core::bounds::BoundError;
use slt_core::channel::ChannelError;
use slt_core::codec::CodecError;
use slt_core::ga::GaError;
use slt_core::{
    awgn_transmit, channel_llr, evolve, lb1, lb2, modulate_bpsk, BoundParams, ChannelParams,
    GaConfig, NodeDegreeDistribution, SltCode,
};

use crate::config::{ConfigError, ExperimentConfig};
use crate::formats::{self, FormatError};

/// Trials per parallel batch.
pub const BATCH_SIZE: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Ga(#[from] GaError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("point epsilon = {epsilon} failed after {written} rows were written: {source}")]
    Point {
        epsilon: f64,
        written: usize,
        source: Box<HarnessError>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub epsilon: f64,
    pub k: usize,
    pub ber: f64,
    pub error_events: u64,
    pub trials_run: usize,
    pub wall_seconds: f64,
    pub seed: u64,
}

impl BerRecord {
    pub fn bits(&self) -> u64 {
        (self.k * self.trials_run) as u64
    }

    /// Binomial standard error of `ber`.
    pub fn std_error(&self) -> f64 {
        (self.ber * (1.0 - self.ber) / self.bits() as f64).sqrt()
    }
}

/// Seed of the `index`-th point of a sweep.
pub fn point_seed(master_seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index as u64);
    rng.next_u64()
}

/// Random stream of one trial within a point.
pub fn trial_rng(point_seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(point_seed);
    rng.set_stream(trial as u64);
    rng
}

/// Number of checks for overhead `epsilon`.
pub fn check_count(k: usize, epsilon: f64) -> usize {
    (epsilon * k as f64).round() as usize
}

/// One codeword through build, encode, channel and BP; returns source-bit errors.
pub fn run_trial(
    cfg: &ExperimentConfig,
    omega: &NodeDegreeDistribution,
    channel: &ChannelParams,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<u64, HarnessError> {
    let code = SltCode::build(cfg.k, m, omega, rng.next_u64())?;
    let source: Vec<u8> = if cfg.random_codeword {
        (0..cfg.k).map(|_| rng.random_range(0..2u8)).collect()
    } else {
        vec![0; cfg.k]
    };
    let codeword = code.encode(&source)?;
    let received = awgn_transmit(&modulate_bpsk(&codeword)?, channel, rng);
    let decoded = code.decode_bp(&channel_llr(&received, channel), cfg.max_bp_iters)?;
    let errors = decoded
        .source_bits()
        .iter()
        .zip(&source)
        .filter(|(a, b)| a != b)
        .count();
    Ok(errors as u64)
}

/// Runs trials for one overhead until `trials` codewords or `min_error_events` errors.
pub fn run_ber_point(
    cfg: &ExperimentConfig,
    omega: &NodeDegreeDistribution,
    epsilon: f64,
    seed: u64,
) -> Result<BerRecord, HarnessError> {
    cfg.validate()?;
    let start = Instant::now();
    let channel = ChannelParams::new(cfg.sigma2)?;
    let m = check_count(cfg.k, epsilon);
    let mut errors = 0u64;
    let mut done = 0usize;
    while done < cfg.trials && errors < cfg.min_error_events {
        let end = (done + BATCH_SIZE).min(cfg.trials);
        errors += (done..end)
            .into_par_iter()
            .map(|t| run_trial(cfg, omega, &channel, m, &mut trial_rng(seed, t)))
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        done = end;
    }
    Ok(BerRecord {
        epsilon,
        k: cfg.k,
        ber: errors as f64 / (cfg.k * done) as f64,
        error_events: errors,
        trials_run: done,
        wall_seconds: start.elapsed().as_secs_f64(),
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaRow {
    pub epsilon: f64,
    pub iterations: usize,
    pub mu_r_final: f64,
    pub ber: f64,
}

pub fn ga_point(
    omega: &NodeDegreeDistribution,
    sigma2: f64,
    epsilon: f64,
) -> Result<GaRow, GaError> {
    let traj = evolve(&GaConfig::new(omega.clone(), sigma2, epsilon))?;
    Ok(GaRow {
        epsilon,
        iterations: traj.iterations,
        mu_r_final: traj.final_mu_r(),
        ber: traj.final_ber(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub epsilon: f64,
    pub lb1: f64,
    pub lb2: f64,
}

/// Both bounds at one overhead; `beta` is the average check degree.
pub fn bound_point(
    beta: f64,
    sigma2: f64,
    epsilon: f64,
    include_degree_zero: bool,
) -> Result<BoundRow, BoundError> {
    let p = BoundParams {
        include_degree_zero,
        ..BoundParams::new(sigma2.sqrt(), beta, epsilon)?
    };
    Ok(BoundRow {
        epsilon,
        lb1: lb1(&p),
        lb2: lb2(&p),
    })
}

/// One sweep CSV row; columns a mode does not compute stay empty.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub k: Option<usize>,
    pub ber: Option<f64>,
    pub error_events: Option<u64>,
    pub trials: Option<usize>,
    pub ga_ber: Option<f64>,
    pub lb1: Option<f64>,
    pub lb2: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub records: Vec<BerRecord>,
}

fn sweep_point(
    cfg: &ExperimentConfig,
    omega: &NodeDegreeDistribution,
    index: usize,
    epsilon: f64,
) -> Result<(SweepRow, Option<BerRecord>), HarnessError> {
    let mut row = SweepRow {
        epsilon,
        ..SweepRow::default()
    };
    let mut record = None;
    if cfg.mode.runs_montecarlo() {
        let rec = run_ber_point(cfg, omega, epsilon, point_seed(cfg.master_seed, index))?;
        row.k = Some(rec.k);
        row.ber = Some(rec.ber);
        row.error_events = Some(rec.error_events);
        row.trials = Some(rec.trials_run);
        row.seed = Some(rec.seed);
        record = Some(rec);
    }
    if cfg.mode.runs_ga() {
        row.ga_ber = Some(ga_point(omega, cfg.sigma2, epsilon)?.ber);
    }
    if cfg.mode.runs_bounds() {
        let b = bound_point(omega.avg_degree(), cfg.sigma2, epsilon, true)?;
        row.lb1 = Some(b.lb1);
        row.lb2 = Some(b.lb2);
    }
    Ok((row, record))
}

/// Runs every overhead of the grid in order, writing and flushing one CSV row per point.
///
/// On failure the rows already produced stay in `out` and the error names the failing point.
pub fn run_sweep<W: Write>(cfg: &ExperimentConfig, out: W) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    let omega = formats::load_distribution(&cfg.distribution)?;
    let mut writer = csv::Writer::from_writer(out);
    let mut result = SweepResult::default();
    for (index, &epsilon) in cfg.epsilons.iter().enumerate() {
        let (row, record) = match sweep_point(cfg, &omega, index, epsilon) {
            Ok(r) => r,
            Err(e) => {
                if result.rows.is_empty() {
                    // still emit the header so the file is a valid empty table
                    writer.write_record(SWEEP_COLUMNS)?;
                }
                writer.flush()?;
                return Err(HarnessError::Point {
                    epsilon,
                    written: result.rows.len(),
                    source: Box::new(e),
                });
            }
        };
        writer.serialize(&row)?;
        writer.flush()?;
        result.rows.push(row);
        result.records.extend(record);
    }
    writer.flush()?;
    Ok(result)
}

pub const SWEEP_COLUMNS: [&str; 9] = [
    "epsilon",
    "k",
    "ber",
    "error_events",
    "trials",
    "ga_ber",
    "lb1",
    "lb2",
    "seed",
];

/// Writes serializable rows as CSV with a header.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<(), csv::Error> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}
