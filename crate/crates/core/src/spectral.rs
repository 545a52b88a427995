//! Discrete Fourier analysis/synthesis and the discrete analytic signal.
//!
//! Normalization lives on the analysis side:
//!
//! ```text
//! X[k] = (1/K) Σ_n x[n] exp(-j2πkn/K)        x[n] = Σ_k X[k] exp(j2πkn/K)
//! ```
//!
//! Every other module relies on this convention, in particular on `X[0]` being the
//! signal mean.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Imaginary residue (relative to the output scale) above which a real inverse is refused.
const REAL_RESIDUE_LIMIT: f64 = 1e-6;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// A uniformly sampled real time series.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl Signal {
    /// Requires at least two samples, all finite, and a positive finite sample rate.
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid(format!(
                "signal needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("non-finite sample at index {i}")));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::invalid(format!("sample rate must be positive, got {sample_rate}")));
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample times `n / fs` in seconds.
    pub fn times(&self) -> Vec<f64> {
        sample_times(self.samples.len(), self.sample_rate)
    }

    /// Rejects odd lengths; the discrete decomposition splits out `X[K/2]`.
    pub fn require_even(&self) -> Result<()> {
        if !self.samples.len().is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "signal length must be even, got {}",
                self.samples.len()
            )));
        }
        Ok(())
    }
}

pub(crate) fn sample_times(len: usize, sample_rate: f64) -> Vec<f64> {
    (0..len).map(|n| n as f64 / sample_rate).collect()
}

/// DFT coefficients `X[0..K]` under the 1/K analysis convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    coefficients: Vec<Complex64>,
    sample_rate: f64,
}

impl Spectrum {
    pub fn new(coefficients: Vec<Complex64>, sample_rate: f64) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::invalid(format!(
                "spectrum needs at least 2 coefficients, got {}",
                coefficients.len()
            )));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::invalid(format!("sample rate must be positive, got {sample_rate}")));
        }
        Ok(Self { coefficients, sample_rate })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Frequency in Hz of a (possibly fractional) bin position.
    pub fn bin_to_hz(&self, bin: f64) -> f64 {
        bin * self.sample_rate / self.coefficients.len() as f64
    }
}

/// Complex analytic series whose real part is the originating real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSeries {
    pub values: Vec<Complex64>,
    pub sample_rate: f64,
}

impl AnalyticSeries {
    pub fn amplitudes(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm()).collect()
    }

    /// Unwrapped instantaneous phase in radians.
    pub fn phase(&self) -> Vec<f64> {
        unwrap_phase(&self.values.iter().map(|z| z.arg()).collect::<Vec<_>>())
    }
}

fn run_fft(buffer: &mut [Complex64], inverse: bool) {
    PLANNER.with(|planner| {
        let mut planner = planner.borrow_mut();
        let fft = if inverse {
            planner.plan_fft_inverse(buffer.len())
        } else {
            planner.plan_fft_forward(buffer.len())
        };
        fft.process(buffer);
    });
}

/// Forward DFT with the 1/K normalization.
pub fn forward_transform(signal: &Signal) -> Spectrum {
    let k = signal.len();
    let mut buffer: Vec<Complex64> =
        signal.samples().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    run_fft(&mut buffer, false);
    let scale = 1.0 / k as f64;
    for c in &mut buffer {
        *c *= scale;
    }
    Spectrum { coefficients: buffer, sample_rate: signal.sample_rate() }
}

/// Unnormalized synthesis `x[n] = Σ_k X[k] exp(j2πkn/K)` with complex output.
pub fn synthesize(coefficients: &[Complex64]) -> Vec<Complex64> {
    let mut buffer = coefficients.to_vec();
    run_fft(&mut buffer, true);
    buffer
}

/// Real inverse transform. The imaginary residue of a conjugate-symmetric spectrum
/// is discarded; a residue above 1e-6 of the output scale is an error.
pub fn inverse_transform(spectrum: &Spectrum) -> Result<Signal> {
    let values = synthesize(spectrum.coefficients());
    let scale = values.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let residue = values.iter().map(|z| z.im.abs()).fold(0.0_f64, f64::max);
    if scale > 0.0 && residue / scale > REAL_RESIDUE_LIMIT {
        return Err(Error::ConventionViolation { residue: residue / scale });
    }
    Signal::new(values.into_iter().map(|z| z.re).collect(), spectrum.sample_rate())
}

/// Real time series of several conjugate-symmetric spectra of equal length.
///
/// Two spectra share one complex inverse transform, since
/// `F⁻¹(A + jB) = a + jb` when `a` and `b` are real.
pub fn synthesize_real(spectra: &[Vec<Complex64>]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(spectra.len());
    for pair in spectra.chunks(2) {
        match pair {
            [a, b] => {
                let mut buffer: Vec<Complex64> =
                    a.iter().zip(b).map(|(x, y)| x + Complex64::i() * y).collect();
                run_fft(&mut buffer, true);
                out.push(buffer.iter().map(|z| z.re).collect());
                out.push(buffer.iter().map(|z| z.im).collect());
            }
            [a] => out.push(synthesize(a).into_iter().map(|z| z.re).collect()),
            _ => unreachable!("chunks(2) yields one or two items"),
        }
    }
    out
}

/// `|X[k]|` for `k = 0..=K/2`.
pub fn half_magnitudes(spectrum: &Spectrum) -> Vec<f64> {
    let half = spectrum.len() / 2;
    spectrum.coefficients()[..=half].iter().map(|c| c.norm()).collect()
}

/// One-sided-spectrum analytic signal: keep `X[0]` and `X[K/2]`, double the
/// positive bins, zero the negative ones. The real part is the input, verbatim.
pub fn analytic_signal(samples: &[f64], sample_rate: f64) -> Result<AnalyticSeries> {
    let k = samples.len();
    if k < 4 || !k.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "analytic signal needs an even length of at least 4, got {k}"
        )));
    }
    let signal = Signal::new(samples.to_vec(), sample_rate)?;
    let spectrum = forward_transform(&signal);
    let half = k / 2;
    let mut one_sided = spectrum.coefficients;
    for c in &mut one_sided[1..half] {
        *c *= 2.0;
    }
    for c in &mut one_sided[half + 1..] {
        *c = Complex64::new(0.0, 0.0);
    }
    let mut values = synthesize(&one_sided);
    for (z, &x) in values.iter_mut().zip(samples) {
        z.re = x;
    }
    Ok(AnalyticSeries { values, sample_rate })
}

/// Cumulative unwrapping: every step larger than π in magnitude is folded back by 2π.
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &p in wrapped {
        if let Some(q) = prev {
            let mut step = p - q;
            while step > PI {
                step -= 2.0 * PI;
                offset -= 2.0 * PI;
            }
            while step < -PI {
                step += 2.0 * PI;
                offset += 2.0 * PI;
            }
        }
        prev = Some(p);
        out.push(p + offset);
    }
    out
}

/// Phase increment per sample: centered differences inside, one-sided at the ends.
pub fn phase_rate(phase: &[f64]) -> Vec<f64> {
    let n = phase.len();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| {
                if i == 0 {
                    phase[1] - phase[0]
                } else if i == n - 1 {
                    phase[n - 1] - phase[n - 2]
                } else {
                    (phase[i + 1] - phase[i - 1]) / 2.0
                }
            })
            .collect(),
    }
}
