//! Empirical wavelet transform baseline.
//!
//! A Meyer-type filter bank over a spectrum segmentation: one scaling filter `φ₁`
//! up to the first boundary and one wavelet `ψ_n` per following segment. Around
//! each boundary `ω_n` the transition spans `[ω_n - τ_n, ω_n + τ_n]` with
//! `τ_n = γ ω_n`; the lower filter falls as `cos(π/2 β(·))` while the upper one
//! rises as `sin(π/2 β(·))` with the same argument, so the squared gains add to
//! one. The last wavelet stays at gain 1 up to Nyquist.
//!
//! Gains are sampled on the half-spectrum bins and mirrored, so every mode is
//! real. A mode is a single application of its filter; resynthesis with squared
//! gains ([`frame_reconstruct`]) recovers the signal.

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};
use std::str::FromStr;

use num_complex::Complex64;

use crate::decomposition::{DecompositionResult, Method, Mode};
use crate::error::{Error, Result};
use crate::segmentation::{
    boundaries_local_minima, boundaries_midpoint_maxima, Band, BoundarySet,
};
use crate::spectral::{forward_transform, half_magnitudes, synthesize_real, Signal, Spectrum};

/// Fraction of the admissibility bound used when no gamma is given.
pub const DEFAULT_GAMMA_FRACTION: f64 = 0.9;

/// Meyer auxiliary function: `x⁴(35 - 84x + 70x² - 20x³)` on `(0, 1)`, clamped outside.
pub fn meyer_beta(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x.powi(4) * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x.powi(3))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EwtSegmentation {
    #[default]
    MidpointMaxima,
    LocalMinima,
}

impl FromStr for EwtSegmentation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "midpoint" | "midpoint_maxima" | "midpoint-maxima" => Ok(Self::MidpointMaxima),
            "local" | "local_minima" | "local-minima" => Ok(Self::LocalMinima),
            other => Err(format!("unknown EWT segmentation '{other}' (expected midpoint or local)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EwtFilterBank {
    pub boundaries: BoundarySet,
    pub gamma: f64,
    /// `τ_n` in bins for each interior boundary.
    pub tau: Vec<f64>,
    /// `filters[0]` is `φ₁`, `filters[n]` is `ψ_n`; each sampled on bins `0..=K/2`.
    pub filters: Vec<Vec<f64>>,
}

impl EwtFilterBank {
    /// `Σ_n g_n(k)²` at every half-spectrum bin.
    pub fn squared_gain_sum(&self) -> Vec<f64> {
        let bins = self.filters[0].len();
        (0..bins).map(|k| self.filters.iter().map(|f| f[k] * f[k]).sum()).collect()
    }

    /// CSV with header `bin,freq_hz,filter1,...,filterN`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let k = self.boundaries.transform_len() as f64;
        let fs = self.boundaries.sample_rate();
        write!(w, "bin,freq_hz")?;
        for i in 1..=self.filters.len() {
            write!(w, ",filter{i}")?;
        }
        writeln!(w)?;
        for bin in 0..self.filters[0].len() {
            write!(w, "{bin},{}", bin as f64 * fs / k)?;
            for f in &self.filters {
                write!(w, ",{}", f[bin])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Largest admissible gamma (exclusive) for a boundary set, together with the
/// pair of boundaries that sets it. Pairs run over consecutive interior
/// boundaries and the last interior boundary against Nyquist.
pub fn gamma_bound(boundaries: &BoundarySet) -> (f64, Option<(f64, f64)>) {
    let b = boundaries.boundaries();
    let nyquist = (boundaries.transform_len() / 2) as f64;
    let mut points: Vec<f64> = b[1..b.len() - 1].to_vec();
    if points.is_empty() {
        return (1.0, None);
    }
    points.push(nyquist);
    let mut bound = 1.0;
    let mut pair = None;
    for w in points.windows(2) {
        let r = (w[1] - w[0]) / (w[1] + w[0]);
        if r < bound {
            bound = r;
            pair = Some((w[0], w[1]));
        }
    }
    (bound, pair)
}

/// Gain rising from 0 to 1 across the transition around `center`.
fn rise(omega: f64, center: f64, tau: f64) -> f64 {
    (FRAC_PI_2 * meyer_beta((tau + omega - center) / (2.0 * tau))).sin()
}

/// Gain falling from 1 to 0 across the transition around `center`.
fn fall(omega: f64, center: f64, tau: f64) -> f64 {
    (FRAC_PI_2 * meyer_beta((tau + omega - center) / (2.0 * tau))).cos()
}

fn segment_gain(omega: f64, lower: Option<(f64, f64)>, upper: Option<(f64, f64)>) -> f64 {
    if let Some((c, tau)) = upper {
        if omega >= c + tau {
            return 0.0;
        }
        if omega > c - tau {
            return fall(omega, c, tau);
        }
    }
    if let Some((c, tau)) = lower {
        if omega <= c - tau {
            return 0.0;
        }
        if omega < c + tau {
            return rise(omega, c, tau);
        }
    }
    1.0
}

/// Builds `φ₁, ψ₁, ..., ψ_{N-1}` sampled on bins `0..=K/2`.
///
/// `gamma` defaults to [`DEFAULT_GAMMA_FRACTION`] of the admissibility bound.
pub fn build_filter_bank(boundaries: &BoundarySet, gamma: Option<f64>) -> Result<EwtFilterBank> {
    let (bound, pair) = gamma_bound(boundaries);
    let gamma = match gamma {
        None => DEFAULT_GAMMA_FRACTION * bound,
        Some(g) => {
            if !(g > 0.0 && g < 1.0) {
                return Err(Error::Config(format!("gamma must lie in (0, 1), got {g}")));
            }
            if g >= bound {
                let (lo, hi) = pair.expect("bound below 1 comes from a pair");
                return Err(Error::Config(format!(
                    "gamma {g} is not admissible: boundaries {lo} and {hi} (bins) require gamma < {bound:.6}"
                )));
            }
            g
        }
    };
    let b = boundaries.boundaries();
    let interior = &b[1..b.len() - 1];
    let tau: Vec<f64> = interior.iter().map(|w| gamma * w).collect();
    let edges: Vec<(f64, f64)> = interior.iter().copied().zip(tau.iter().copied()).collect();
    let bins = boundaries.transform_len() / 2 + 1;

    let n_filters = interior.len() + 1;
    let filters = (0..n_filters)
        .map(|i| {
            let lower = i.checked_sub(1).map(|j| edges[j]);
            let upper = edges.get(i).copied();
            (0..bins).map(|k| segment_gain(k as f64, lower, upper)).collect()
        })
        .collect();
    Ok(EwtFilterBank { boundaries: boundaries.clone(), gamma, tau, filters })
}

fn gained_spectrum(spectrum: &Spectrum, gains: &[f64], power: i32) -> Vec<Complex64> {
    let k = spectrum.len();
    let half = k / 2;
    let coeffs = spectrum.coefficients();
    let mut buffer = vec![Complex64::new(0.0, 0.0); k];
    for (bin, g) in gains.iter().enumerate().take(half + 1) {
        let g = g.powi(power);
        buffer[bin] = coeffs[bin] * g;
        if bin != 0 && bin != half {
            buffer[k - bin] = coeffs[k - bin] * g;
        }
    }
    buffer
}

/// Squared-gain resynthesis `Σ_n F⁻¹(X g_n²)`; recovers the signal on a tight frame.
pub fn frame_reconstruct(spectrum: &Spectrum, bank: &EwtFilterBank) -> Vec<f64> {
    let spectra: Vec<_> = bank.filters.iter().map(|g| gained_spectrum(spectrum, g, 2)).collect();
    let mut out = vec![0.0; spectrum.len()];
    for series in synthesize_real(&spectra) {
        for (o, v) in out.iter_mut().zip(series) {
            *o += v;
        }
    }
    out
}

/// Support of a filter as a band: bins where its gain is nonzero.
fn support(gains: &[f64]) -> Band {
    let start = gains.iter().position(|&g| g > 0.0).unwrap_or(0);
    let end = gains.iter().rposition(|&g| g > 0.0).map_or(start, |e| e + 1);
    Band::from_bins(start..end)
}

/// Segments the spectrum, builds the filter bank, and filters once per segment.
pub fn ewt_decompose(
    signal: &Signal,
    n_segments: usize,
    segmentation: EwtSegmentation,
    gamma: Option<f64>,
) -> Result<DecompositionResult> {
    signal.require_even()?;
    if signal.len() < 4 {
        return Err(Error::invalid("EWT needs at least 4 samples"));
    }
    let spectrum = forward_transform(signal);
    let magnitudes = half_magnitudes(&spectrum);
    let fs = signal.sample_rate();
    let boundaries = match segmentation {
        EwtSegmentation::MidpointMaxima => boundaries_midpoint_maxima(&magnitudes, n_segments, fs)?,
        EwtSegmentation::LocalMinima => boundaries_local_minima(&magnitudes, n_segments, fs)?,
    };
    decompose_with_bank(&spectrum, &build_filter_bank(&boundaries, gamma)?)
}

/// Applies a prebuilt bank to a spectrum.
pub fn decompose_with_bank(spectrum: &Spectrum, bank: &EwtFilterBank) -> Result<DecompositionResult> {
    let k = spectrum.len();
    if bank.boundaries.transform_len() != k {
        return Err(Error::invalid("filter bank and spectrum lengths differ"));
    }
    let coeffs = spectrum.coefficients();
    let spectra: Vec<_> = bank.filters.iter().map(|g| gained_spectrum(spectrum, g, 1)).collect();
    let modes = bank
        .filters
        .iter()
        .zip(synthesize_real(&spectra))
        .enumerate()
        .map(|(i, (gains, samples))| Mode { samples, band: support(gains), label: i + 1 })
        .collect();
    Ok(DecompositionResult {
        method: Method::Ewt,
        sample_rate: spectrum.sample_rate(),
        modes,
        dc_term: coeffs[0].re,
        nyquist_term: coeffs[k / 2].re,
        dc_in_modes: true,
        nyquist_in_modes: true,
        discarded_tail: vec![0.0; k],
        boundaries: bank.boundaries.clone(),
    })
}
