//! Fourier decomposition method baseline (low-to-high scan).
//!
//! Starting at bin 1, each band is extended to the largest end bin `e` for which
//! the analytic partial sum `v[n] = Σ_{k=start..=e} X[k] exp(j2πkn/K)` has a
//! non-decreasing unwrapped phase. The condition is not monotone in `e`, so every
//! candidate up to `K/2 - 1` is tested. Each band gives one FIBF, `2 Re v[n]`.

use num_complex::Complex64;
use serde::Serialize;

use crate::decomposition::{DecompositionResult, Method, Mode};
use crate::error::{Error, Result};
use crate::segmentation::{Band, BoundarySet};
use crate::spectral::{forward_transform, phase_rate, synthesize, unwrap_phase, Signal, Spectrum};

/// Slack on the instantaneous-frequency sign test, in radians per sample.
pub const PHASE_TOLERANCE: f64 = 1e-10;

/// True when the centered phase rate of `values` is `>= -PHASE_TOLERANCE` at every
/// interior sample.
pub fn is_phase_monotone(values: &[Complex64]) -> bool {
    let phase = unwrap_phase(&values.iter().map(|z| z.arg()).collect::<Vec<_>>());
    let rate = phase_rate(&phase);
    let n = rate.len();
    n < 3 || rate[1..n - 1].iter().all(|&w| w >= -PHASE_TOLERANCE)
}

fn partial_sum(spectrum: &Spectrum, start: usize, end: usize) -> Vec<Complex64> {
    let coeffs = spectrum.coefficients();
    let mut buffer = vec![Complex64::new(0.0, 0.0); coeffs.len()];
    buffer[start..=end].copy_from_slice(&coeffs[start..=end]);
    synthesize(&buffer)
}

/// Largest `e` in `[start, K/2 - 1]` whose partial sum from `start` is phase-monotone.
/// Returns `start` if no candidate passes.
pub fn phase_monotone_span(spectrum: &Spectrum, start: usize) -> Result<usize> {
    let upper = upper_limit(spectrum)?;
    if start < 1 || start > upper {
        return Err(Error::invalid(format!("start bin {start} outside [1, {upper}]")));
    }
    let mut best = start;
    for end in start..=upper {
        if is_phase_monotone(&partial_sum(spectrum, start, end)) {
            best = end;
        }
    }
    Ok(best)
}

fn upper_limit(spectrum: &Spectrum) -> Result<usize> {
    let k = spectrum.len();
    if !k.is_multiple_of(2) || k < 4 {
        return Err(Error::invalid(format!("FDM needs an even length of at least 4, got {k}")));
    }
    Ok(k / 2 - 1)
}

/// Inclusive bin range of one FIBF, for the JSON band report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FdmBand {
    pub start_bin: usize,
    pub end_bin: usize,
}

/// `{"bands": [{"start_bin": .., "end_bin": ..}, ...]}` for an FDM result.
pub fn band_report_json(result: &DecompositionResult) -> String {
    #[derive(Serialize)]
    struct Report {
        bands: Vec<FdmBand>,
    }
    let bands = result
        .modes
        .iter()
        .map(|m| FdmBand { start_bin: m.band.bins.start, end_bin: m.band.bins.end - 1 })
        .collect();
    serde_json::to_string_pretty(&Report { bands }).expect("band report serializes")
}

/// Scans bands from bin 1 upward until `K/2 - 1` is covered. `X[0]` stays in
/// `dc_term`; `X[K/2]` is added to the last FIBF.
pub fn fdm_decompose(signal: &Signal) -> Result<DecompositionResult> {
    signal.require_even()?;
    let spectrum = forward_transform(signal);
    let upper = upper_limit(&spectrum)?;
    let k = spectrum.len();

    let mut modes = Vec::new();
    let mut start = 1;
    while start <= upper {
        let end = phase_monotone_span(&spectrum, start)?;
        let samples = partial_sum(&spectrum, start, end).into_iter().map(|z| 2.0 * z.re).collect();
        modes.push(Mode { samples, band: Band::from_bins(start..end + 1), label: modes.len() + 1 });
        start = end + 1;
    }

    let coeffs = spectrum.coefficients();
    let nyquist = coeffs[k / 2].re;
    if let Some(last) = modes.last_mut() {
        for (n, s) in last.samples.iter_mut().enumerate() {
            *s += if n % 2 == 0 { nyquist } else { -nyquist };
        }
    }

    let mut bounds = vec![0.0];
    bounds.extend(modes.iter().map(|m| m.band.bins.end as f64));
    *bounds.last_mut().unwrap() = (k / 2) as f64;
    let n_bands = modes.len();
    Ok(DecompositionResult {
        method: Method::Fdm,
        sample_rate: signal.sample_rate(),
        modes,
        dc_term: coeffs[0].re,
        nyquist_term: nyquist,
        dc_in_modes: false,
        nyquist_in_modes: true,
        discarded_tail: vec![0.0; k],
        boundaries: BoundarySet::new(bounds, n_bands, k, signal.sample_rate())?,
    })
}
