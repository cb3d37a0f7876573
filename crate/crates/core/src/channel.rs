//! Memoryless binary-input channels and their log-likelihood ratios.
//!
//! BPSK maps bit 0 to +1 and bit 1 to -1 with unit symbol energy, and a
//! positive LLR favors bit 0.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::code::ParityCheckCode;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    /// Additive white Gaussian noise with variance `sigma2` per real symbol.
    Awgn { sigma2: f64 },
    /// Binary symmetric channel with crossover probability `p`.
    Bsc { p: f64 },
}

impl ChannelSpec {
    pub fn awgn(sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(invalid(format!("noise variance must be positive, got {sigma2}")));
        }
        Ok(ChannelSpec::Awgn { sigma2 })
    }

    /// AWGN at `ebn0_db` for a code of rate `rate`.
    pub fn awgn_ebn0(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(invalid(format!("rate must lie in (0, 1], got {rate}")));
        }
        Self::awgn(sigma2_from_ebn0(ebn0_db, rate))
    }

    pub fn bsc(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 0.5) {
            return Err(invalid(format!("crossover probability must lie in (0, 0.5), got {p}")));
        }
        Ok(ChannelSpec::Bsc { p })
    }
}

/// `sigma^2 = 1 / (2 R 10^(Eb/N0 / 10))`.
pub fn sigma2_from_ebn0(ebn0_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * libm::pow(10.0, ebn0_db / 10.0))
}

/// Inverse of [`sigma2_from_ebn0`].
pub fn ebn0_from_sigma2(sigma2: f64, rate: f64) -> f64 {
    10.0 * libm::log10(1.0 / (2.0 * rate * sigma2))
}

/// `2 r / sigma^2`.
pub fn awgn_llr(received: f64, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(invalid(format!("noise variance must be positive, got {sigma2}")));
    }
    Ok(2.0 * received / sigma2)
}

/// `+-log((1-p)/p)`, positive when the received bit is 0.
pub fn bsc_llr(received_bit: u8, p: f64) -> f64 {
    let mag = libm::log((1.0 - p) / p);
    if received_bit == 0 {
        mag
    } else {
        -mag
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialSample {
    pub transmitted: Vec<u8>,
    /// Channel output: noisy BPSK amplitudes, or 0/1 bits for the BSC.
    pub received: Vec<f64>,
    pub llr: Vec<f64>,
}

/// Sends `transmitted` through `channel`.
pub fn sample_trial<R: Rng + ?Sized>(
    code: &ParityCheckCode,
    channel: ChannelSpec,
    transmitted: &[u8],
    rng: &mut R,
) -> Result<TrialSample> {
    if !code.is_codeword(transmitted) {
        return Err(invalid("transmitted word is not a codeword"));
    }
    let (received, llr): (Vec<f64>, Vec<f64>) = match channel {
        ChannelSpec::Awgn { sigma2 } => {
            let sigma = libm::sqrt(sigma2);
            transmitted
                .iter()
                .map(|&b| {
                    let noise: f64 = StandardNormal.sample(rng);
                    let r = if b == 0 { 1.0 } else { -1.0 } + sigma * noise;
                    (r, 2.0 * r / sigma2)
                })
                .unzip()
        }
        ChannelSpec::Bsc { p } => transmitted
            .iter()
            .map(|&b| {
                let out = b ^ (rng.random::<f64>() < p) as u8;
                (out as f64, bsc_llr(out, p))
            })
            .unzip(),
    };
    Ok(TrialSample {
        transmitted: transmitted.to_vec(),
        received,
        llr,
    })
}

/// Independent generator for stream `stream` under `master_seed`.
///
/// The stream is selected in the ChaCha counter space, so draws do not
/// depend on how streams are scheduled across workers.
pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
