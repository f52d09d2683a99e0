//! BPSK over AWGN with the all-zero codeword, channel LLRs, and seeding.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::CodeError;
pub use crate::fixed::{quantize, FixedPointFormat};
use crate::fixed::Msg;

/// Noise level derived from Eb/N0 and the code rate.
///
/// `sigma² = 1 / (2 · rate · 10^(ebno_db / 10))`. An infinite Eb/N0 is
/// accepted as a noiseless channel (`sigma = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub ebno_db: f64,
    /// Code rate as `(k, n)`.
    pub code_rate: (usize, usize),
    pub sigma: f64,
}

impl NoiseSpec {
    pub fn new(ebno_db: f64, code_rate: (usize, usize)) -> Result<Self, CodeError> {
        let (k, n) = code_rate;
        if k == 0 || n == 0 || k > n {
            return Err(CodeError::InvalidParameters(format!("code rate {k}/{n}")));
        }
        if ebno_db.is_nan() || ebno_db == f64::NEG_INFINITY {
            return Err(CodeError::InvalidParameters(format!("Eb/N0 {ebno_db} dB")));
        }
        let rate = k as f64 / n as f64;
        let sigma = (1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))).sqrt();
        Ok(NoiseSpec {
            ebno_db,
            code_rate,
            sigma,
        })
    }

    pub fn is_noiseless(&self) -> bool {
        self.sigma == 0.0
    }
}

/// Received samples for the all-zero codeword mapped to `+1`.
pub fn transmit_all_zero(n: usize, noise: &NoiseSpec, seed: u64) -> Vec<f64> {
    if noise.is_noiseless() {
        return vec![1.0; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let g: f64 = StandardNormal.sample(&mut rng);
            1.0 + noise.sigma * g
        })
        .collect()
}

/// Channel LLR `2·y / sigma²`; positive favors bit 0.
pub fn llr_of(sample: f64, noise: &NoiseSpec) -> f64 {
    if noise.is_noiseless() {
        return if sample > 0.0 {
            f64::INFINITY
        } else if sample < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        };
    }
    2.0 * sample / (noise.sigma * noise.sigma)
}

/// Transmit, compute LLRs, and quantize in one pass.
pub fn quantized_frame(n: usize, noise: &NoiseSpec, fmt: &FixedPointFormat, seed: u64) -> Vec<Msg> {
    transmit_all_zero(n, noise, seed)
        .into_iter()
        .map(|y| quantize(llr_of(y, noise), fmt))
        .collect()
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Per-frame seed keyed by the master seed, SNR index, and frame index.
pub fn frame_seed(master_seed: u64, snr_index: usize, frame_index: u64) -> u64 {
    splitmix64(splitmix64(master_seed ^ splitmix64(snr_index as u64)) ^ frame_index)
}
