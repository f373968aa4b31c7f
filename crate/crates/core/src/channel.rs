//! BPSK over an AWGN channel.
//!
//! Noise samples come from `rand_distr::StandardNormal` (ziggurat) scaled by
//! `σ_n`, so a seeded generator reproduces the same block on a given platform.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChannelError {
    #[error("noise variance must be positive and finite, got {0}")]
    InvalidVariance(f64),
    #[error("input bit at position {0} is not 0 or 1")]
    NonBinaryInput(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    sigma2: f64,
}

impl ChannelParams {
    pub fn new(sigma2: f64) -> Result<Self, ChannelError> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(ChannelError::InvalidVariance(sigma2));
        }
        Ok(ChannelParams { sigma2 })
    }

    /// Noise variance `σ_n²`.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn sigma(&self) -> f64 {
        libm::sqrt(self.sigma2)
    }

    /// `10 log10(1/σ_n²)`: unit-energy BPSK symbols, so `σ_n² = 1` is 0 dB.
    pub fn snr_db(&self) -> f64 {
        -10.0 * libm::log10(self.sigma2)
    }
}

/// Channel outputs `y = x + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedBlock(pub Vec<f64>);

impl ReceivedBlock {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `x_k = 1 - 2 c_k`.
pub fn modulate_bpsk(bits: &[u8]) -> Result<Vec<f64>, ChannelError> {
    bits.iter()
        .enumerate()
        .map(|(k, &b)| match b {
            0 => Ok(1.0),
            1 => Ok(-1.0),
            _ => Err(ChannelError::NonBinaryInput(k)),
        })
        .collect()
}

pub fn awgn_transmit<R: Rng + ?Sized>(
    symbols: &[f64],
    params: &ChannelParams,
    rng: &mut R,
) -> ReceivedBlock {
    let sigma = params.sigma();
    ReceivedBlock(
        symbols
            .iter()
            .map(|&x| {
                let n: f64 = rng.sample(StandardNormal);
                x + sigma * n
            })
            .collect(),
    )
}

/// `Z_k = 2 y_k / σ_n²`.
pub fn channel_llr(received: &ReceivedBlock, params: &ChannelParams) -> Vec<f64> {
    let scale = 2.0 / params.sigma2;
    received.0.iter().map(|&y| scale * y).collect()
}
