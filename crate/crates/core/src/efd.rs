//! Empirical Fourier decomposition.
//!
//! The half spectrum is cut with [`boundaries_lowest_minima`] and every band is
//! synthesized on its own: `mode[n] = 2 Re Σ_{k ∈ band} X[k] exp(j2πkn/K)`. The
//! bands are disjoint, so modes plus the discarded tail (and the DC/Nyquist
//! terms) add back to the signal exactly.
//!
//! `X[0]` is folded into the first mode so that a trend keeps its mean. `X[K/2]`
//! belongs to the last mode only when the last boundary is Nyquist itself;
//! otherwise it is part of the discarded tail.

use num_complex::Complex64;

use crate::decomposition::{DecompositionResult, Method, Mode};
use crate::error::{Error, Result};
use crate::segmentation::{bands_from_boundaries, boundaries_lowest_minima, Band, BoundarySet};
use crate::spectral::{forward_transform, half_magnitudes, synthesize_real, Signal, Spectrum};

/// Two-sided spectrum holding only the band's bins in `[1, K/2 - 1]` and their mirrors.
fn band_spectrum(spectrum: &Spectrum, band: &Band) -> Vec<Complex64> {
    let k = spectrum.len();
    let coeffs = spectrum.coefficients();
    let mut buffer = vec![Complex64::new(0.0, 0.0); k];
    for bin in band.bins.start.max(1)..band.bins.end.min(k / 2) {
        buffer[bin] = coeffs[bin];
        buffer[k - bin] = coeffs[k - bin];
    }
    buffer
}

/// `2 Re Σ X[k] exp(j2πkn/K)` over the band's bins in `[1, K/2 - 1]`.
///
/// Bin 0 and bin `K/2` are left to the caller. An empty band yields zeros.
pub fn band_mode(spectrum: &Spectrum, band: &Band) -> Vec<f64> {
    synthesize_real(&[band_spectrum(spectrum, band)]).pop().expect("one output per spectrum")
}

fn alternating(value: f64, len: usize) -> impl Iterator<Item = f64> {
    (0..len).map(move |n| if n % 2 == 0 { value } else { -value })
}

/// Decomposes over a fixed boundary set (no segmentation step).
pub fn decompose_with_boundaries(spectrum: &Spectrum, boundaries: BoundarySet) -> Result<DecompositionResult> {
    let k = spectrum.len();
    if !k.is_multiple_of(2) || k < 4 {
        return Err(Error::invalid(format!("spectrum length must be even and at least 4, got {k}")));
    }
    if boundaries.transform_len() != k {
        return Err(Error::invalid(format!(
            "boundaries were computed for K = {}, spectrum has K = {k}",
            boundaries.transform_len()
        )));
    }
    let half = k / 2;
    let coeffs = spectrum.coefficients();
    let dc = coeffs[0].re;
    let nyquist = coeffs[half].re;
    let nyquist_in_last = boundaries.last() >= half as f64;

    // A valid boundary set ends above 0, so there is always a first band.
    let bands = bands_from_boundaries(&boundaries);
    let tail_band = Band::from_bins(boundaries.last().ceil() as usize..half);
    let mut spectra: Vec<Vec<Complex64>> = bands.iter().map(|b| band_spectrum(spectrum, b)).collect();
    if !tail_band.is_empty() {
        spectra.push(band_spectrum(spectrum, &tail_band));
    }
    let mut series = synthesize_real(&spectra);
    let mut tail = if tail_band.is_empty() { vec![0.0; k] } else { series.pop().expect("tail spectrum was pushed") };
    let mut modes: Vec<Mode> = bands
        .into_iter()
        .zip(series)
        .enumerate()
        .map(|(i, (band, samples))| Mode { samples, band, label: i + 1 })
        .collect();
    for s in &mut modes[0].samples {
        *s += dc;
    }

    let nyquist_target = if nyquist_in_last {
        &mut modes.last_mut().unwrap().samples
    } else {
        &mut tail
    };
    for (s, v) in nyquist_target.iter_mut().zip(alternating(nyquist, k)) {
        *s += v;
    }

    Ok(DecompositionResult {
        method: Method::Efd,
        sample_rate: spectrum.sample_rate(),
        modes,
        dc_term: dc,
        nyquist_term: nyquist,
        dc_in_modes: true,
        nyquist_in_modes: true,
        discarded_tail: tail,
        boundaries,
    })
}

/// Full EFD: lowest-minima segmentation of `|X|`, then one mode per band.
pub fn efd_decompose(signal: &Signal, n_segments: usize) -> Result<DecompositionResult> {
    signal.require_even()?;
    if signal.len() < 4 {
        return Err(Error::invalid("EFD needs at least 4 samples"));
    }
    let spectrum = forward_transform(signal);
    let boundaries =
        boundaries_lowest_minima(&half_magnitudes(&spectrum), n_segments, signal.sample_rate())?;
    decompose_with_boundaries(&spectrum, boundaries)
}
