//! BPSK over a real AWGN channel and the two-user PNC detector.
//!
//! Bit 0 maps to `+sqrt(E)` and bit 1 to `-sqrt(E)`. Noise is real-valued with
//! variance `N0 / 2` per sample, so point-to-point BPSK has symbol error
//! probability `Q(sqrt(2 * gamma))`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gf2::BitBlock;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    gamma: f64,
    energy: f64,
}

impl ChannelParams {
    /// `gamma` is the linear SNR `E / N0`; `f64::INFINITY` gives a noiseless channel.
    pub fn new(gamma: f64, energy: f64) -> Result<Self> {
        if gamma.is_nan() || gamma <= 0.0 || !energy.is_finite() || energy <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "channel needs gamma > 0 and finite energy > 0, got gamma={gamma}, energy={energy}"
            )));
        }
        Ok(Self { gamma, energy })
    }

    /// Unit symbol energy at the given SNR in dB.
    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        Self::new(db_to_linear(snr_db), 1.0)
    }

    pub fn noiseless() -> Self {
        Self {
            gamma: f64::INFINITY,
            energy: 1.0,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn n0(&self) -> f64 {
        self.energy / self.gamma
    }

    /// Per-sample noise standard deviation, `sqrt(N0 / 2)`.
    pub fn noise_sigma(&self) -> f64 {
        (self.n0() / 2.0).sqrt()
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolBlock(Vec<f64>);

impl SymbolBlock {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if let Some(bad) = samples.iter().find(|s| !s.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite sample {bad}")));
        }
        Ok(Self(samples))
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

pub fn bpsk_modulate(bits: &BitBlock, energy: f64) -> SymbolBlock {
    let amp = energy.sqrt();
    SymbolBlock(bits.iter().map(|b| if b { -amp } else { amp }).collect())
}

pub fn awgn<R: Rng + ?Sized>(x: &SymbolBlock, params: &ChannelParams, rng: &mut R) -> SymbolBlock {
    let sigma = params.noise_sigma();
    if sigma == 0.0 {
        return x.clone();
    }
    SymbolBlock(
        x.0.iter()
            .map(|&s| s + sigma * rng.sample::<f64, _>(StandardNormal))
            .collect(),
    )
}

/// Relay reception of two simultaneous unit-amplitude transmissions.
pub fn multiple_access<R: Rng + ?Sized>(
    x1: &SymbolBlock,
    x2: &SymbolBlock,
    params: &ChannelParams,
    rng: &mut R,
) -> Result<SymbolBlock> {
    if x1.len() != x2.len() {
        return Err(Error::LengthMismatch {
            expected: x1.len(),
            actual: x2.len(),
        });
    }
    let amp = params.energy.sqrt();
    let sum = SymbolBlock(x1.0.iter().zip(&x2.0).map(|(a, b)| amp * (a + b)).collect());
    Ok(awgn(&sum, params, rng))
}

/// Maximum-likelihood magnitude threshold separating XOR 0 (`|y|` near
/// `2 sqrt(E)`) from XOR 1 (`y` near 0).
///
/// `sqrt(E) + sqrt(N0) / (4 sqrt(gamma)) * ln(1 + sqrt(1 - exp(-8 gamma)))`
pub fn pnc_threshold(params: &ChannelParams) -> f64 {
    let gamma = params.gamma;
    let spread = if gamma.is_infinite() {
        0.0
    } else {
        params.n0().sqrt() / (4.0 * gamma.sqrt())
    };
    params.energy.sqrt() + spread * pnc_log_term(gamma)
}

/// `ln(1 + sqrt(1 - exp(-8 gamma)))`, accurate for tiny and huge `gamma`.
pub(crate) fn pnc_log_term(gamma: f64) -> f64 {
    let inner = -(-8.0 * gamma).exp_m1();
    inner.sqrt().ln_1p()
}

/// Relay PNC mapping: declares 0 when `|y| > threshold`, otherwise 1.
pub fn pnc_map(y: &SymbolBlock, params: &ChannelParams) -> Result<BitBlock> {
    let th = pnc_threshold(params);
    BitBlock::from_bits(y.0.iter().map(|s| s.abs() <= th))
}

pub fn bpsk_demodulate(y: &SymbolBlock) -> Result<BitBlock> {
    BitBlock::from_bits(y.0.iter().map(|&s| s <= 0.0 || s.is_nan()))
}
