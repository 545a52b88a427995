use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::spectral::Signal;

/// Seed used by the noisy example when none is given.
pub const DEFAULT_SEED: u64 = 1234;

fn mean_power(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
}

/// White Gaussian noise with variance `mean(signal²) / 10^(snr_db / 10)`.
pub fn awgn(signal: &[f64], snr_db: f64, seed: u64) -> Result<Vec<f64>> {
    let power = mean_power(signal);
    if power == 0.0 || signal.is_empty() {
        return Err(Error::invalid("cannot scale noise to an all-zero signal"));
    }
    if snr_db.is_nan() {
        return Err(Error::invalid("SNR must not be NaN"));
    }
    let sd = (power / 10f64.powf(snr_db / 10.0)).sqrt();
    let normal = Normal::new(0.0, sd).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..signal.len()).map(|_| normal.sample(&mut rng)).collect())
}

/// Adds [`awgn`] to `signal`. `None` means no noise.
pub fn add_awgn(signal: &Signal, snr_db: Option<f64>, seed: u64) -> Result<Signal> {
    let Some(snr) = snr_db else {
        return Ok(signal.clone());
    };
    let noise = awgn(signal.samples(), snr, seed)?;
    let noisy = signal.samples().iter().zip(&noise).map(|(s, n)| s + n).collect();
    Signal::new(noisy, signal.sample_rate())
}

/// `10 log10(power(signal) / power(noise))`.
pub fn snr_db(signal: &[f64], noise: &[f64]) -> f64 {
    10.0 * (mean_power(signal) / mean_power(noise)).log10()
}
