//! Single-source observation model and the minimum-distance decoder.
//!
//! An observation is `y = x * c(alpha_n) + w` with a unit-modulus source
//! amplitude `x` and i.i.d. circularly symmetric complex Gaussian noise of
//! variance `sigma^2` per antenna. The decoder returns the grid index that
//! maximizes `|y^H c(alpha)|`, which is the ML estimate under this model.
//!
//! Randomness for trial `t` comes from a ChaCha8 stream keyed by the seed and
//! selected by `t`, so any trial can be regenerated in isolation and results
//! do not depend on how trials are scheduled across threads.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{Fft, FftPlanner};

use crate::codebook::Codebook;
use crate::error::{Error, Result};

/// `(1 + j) / sqrt(2)`.
pub const DEFAULT_AMPLITUDE: Complex64 = Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);

const AMPLITUDE_TOLERANCE: f64 = 1e-12;

/// Independent random streams drawn for the same `(seed, trial)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stream {
    Noise = 1,
    GridIndex = 2,
}

pub(crate) fn trial_rng(seed: u64, trial: u64, stream: Stream) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8] = stream as u8;
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// `sigma = 10^(-snr_db / 20)`; `+inf` dB maps to a noiseless channel.
pub fn snr_to_sigma(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 20.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    amplitude: Complex64,
    sigma: f64,
    seed: u64,
}

impl ChannelConfig {
    /// Channel with the default source amplitude `(1 + j) / sqrt(2)`.
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "noise level sigma = {sigma} must be finite and >= 0"
            )));
        }
        Ok(Self {
            amplitude: DEFAULT_AMPLITUDE,
            sigma,
            seed,
        })
    }

    pub fn from_snr_db(snr_db: f64, seed: u64) -> Result<Self> {
        if snr_db.is_nan() {
            return Err(Error::InvalidConfig("SNR is NaN".into()));
        }
        Self::new(snr_to_sigma(snr_db), seed)
    }

    /// Overrides the source amplitude, which must have unit modulus.
    pub fn with_amplitude(mut self, x: Complex64) -> Result<Self> {
        if (x.norm() - 1.0).abs() > AMPLITUDE_TOLERANCE {
            return Err(Error::InvalidConfig(format!(
                "source amplitude {x} is not unit-modulus"
            )));
        }
        self.amplitude = x;
        Ok(self)
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub y: Vec<Complex64>,
    pub true_index: Option<usize>,
}

/// Draws `y = x * c(alpha_n) + w` for trial `trial`.
pub fn synthesize(cb: &Codebook, n: usize, cfg: &ChannelConfig, trial: u64) -> Result<Observation> {
    if n >= cb.grid_size() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: cb.grid_size(),
        });
    }
    let mut y = Vec::with_capacity(cb.sensors());
    synthesize_into(cb, n, cfg, trial, &mut y);
    Ok(Observation {
        y,
        true_index: Some(n),
    })
}

pub(crate) fn synthesize_into(
    cb: &Codebook,
    n: usize,
    cfg: &ChannelConfig,
    trial: u64,
    y: &mut Vec<Complex64>,
) {
    y.clear();
    let x = cfg.amplitude;
    y.extend(cb.vector(n).iter().map(|&c| x * c));
    if cfg.sigma > 0.0 {
        let scale = cfg.sigma * FRAC_1_SQRT_2;
        let mut rng = trial_rng(cfg.seed, trial, Stream::Noise);
        for v in y.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *v += Complex64::new(re, im) * scale;
        }
    }
}

/// `scores[n] = |y^H c(alpha_n)|` for every grid index.
pub fn matched_filter_scores(cb: &Codebook, y: &[Complex64]) -> Result<Vec<f64>> {
    check_len(cb, y)?;
    Ok(direct_scores(cb, y))
}

/// Minimum-distance decoding: argmax of the matched-filter scores, ties to
/// the smallest index.
pub fn decode(cb: &Codebook, y: &[Complex64]) -> Result<usize> {
    Ok(argmax(&matched_filter_scores(cb, y)?))
}

fn check_len(cb: &Codebook, y: &[Complex64]) -> Result<()> {
    if y.len() != cb.sensors() {
        return Err(Error::DimensionMismatch {
            expected: cb.sensors(),
            got: y.len(),
        });
    }
    Ok(())
}

fn direct_scores(cb: &Codebook, y: &[Complex64]) -> Vec<f64> {
    (0..cb.grid_size())
        .map(|n| {
            cb.vector(n)
                .iter()
                .zip(y)
                .map(|(c, v)| v.conj() * c)
                .sum::<Complex64>()
                .norm()
        })
        .collect()
}

pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Matched filter with a precomputed evaluation strategy.
///
/// The scores are `|sum_r a_r omega^(n r)|` with
/// `a_r = sum_{d_m = r mod N} conj(y_m) (-1)^d_m`, i.e. a length-`N` inverse DFT
/// of a sparse sequence. For large `M` relative to `log N` this is evaluated
/// by FFT instead of the `N * M` direct sum.
pub struct MatchedFilter<'a> {
    cb: &'a Codebook,
    fft: Option<Arc<dyn Fft<f64>>>,
}

impl<'a> MatchedFilter<'a> {
    /// Picks the cheaper strategy for the codebook.
    pub fn new(cb: &'a Codebook) -> Self {
        let n = cb.grid_size() as f64;
        if cb.sensors() as f64 > 4.0 * n.log2() {
            Self::fft(cb)
        } else {
            Self::direct(cb)
        }
    }

    pub fn direct(cb: &'a Codebook) -> Self {
        Self { cb, fft: None }
    }

    pub fn fft(cb: &'a Codebook) -> Self {
        let plan = FftPlanner::new().plan_fft_inverse(cb.grid_size());
        Self {
            cb,
            fft: Some(plan),
        }
    }

    pub fn uses_fft(&self) -> bool {
        self.fft.is_some()
    }

    pub fn scores(&self, y: &[Complex64]) -> Result<Vec<f64>> {
        check_len(self.cb, y)?;
        Ok(self.scores_unchecked(y))
    }

    pub fn decode(&self, y: &[Complex64]) -> Result<usize> {
        Ok(argmax(&self.scores(y)?))
    }

    pub(crate) fn scores_unchecked(&self, y: &[Complex64]) -> Vec<f64> {
        let Some(fft) = &self.fft else {
            return direct_scores(self.cb, y);
        };
        let big_n = self.cb.ruler().modulus();
        let mut buf = vec![Complex64::new(0.0, 0.0); self.cb.grid_size()];
        for (&d, v) in self.cb.ruler().positions().iter().zip(y) {
            let term = if d % 2 == 0 { v.conj() } else { -v.conj() };
            buf[(d % big_n) as usize] += term;
        }
        fft.process(&mut buf);
        buf.iter().map(|c| c.norm()).collect()
    }
}
