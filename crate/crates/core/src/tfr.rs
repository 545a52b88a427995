//! Hilbert time-frequency representation of modes.
//!
//! Each mode goes through the analytic signal; its magnitude is the
//! instantaneous amplitude and the centered difference of its unwrapped phase
//! the instantaneous frequency. Edge samples use one-sided differences and are
//! the least reliable part of a track.

use std::f64::consts::PI;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::spectral::{analytic_signal, phase_rate, sample_times};

#[derive(Debug, Clone, PartialEq)]
pub struct TFTrack {
    pub times: Vec<f64>,
    pub amplitudes: Vec<f64>,
    pub frequencies: Vec<f64>,
    pub mode_label: usize,
}

impl TFTrack {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Instantaneous amplitude and frequency (Hz) of one real mode.
pub fn instantaneous_attributes(samples: &[f64], sample_rate: f64, mode_label: usize) -> Result<TFTrack> {
    if samples.len() < 8 {
        return Err(Error::invalid(format!("need at least 8 samples, got {}", samples.len())));
    }
    let z = analytic_signal(samples, sample_rate)?;
    let frequencies = phase_rate(&z.phase()).into_iter().map(|w| w * sample_rate / (2.0 * PI)).collect();
    Ok(TFTrack {
        times: sample_times(samples.len(), sample_rate),
        amplitudes: z.amplitudes(),
        frequencies,
        mode_label,
    })
}

/// Writes `t,amplitude,frequency_hz,mode` rows for every track.
pub fn write_tracks_csv<W: Write>(tracks: &[TFTrack], mut w: W) -> io::Result<()> {
    writeln!(w, "t,amplitude,frequency_hz,mode")?;
    for track in tracks {
        for i in 0..track.len() {
            writeln!(
                w,
                "{},{},{},{}",
                track.times[i], track.amplitudes[i], track.frequencies[i], track.mode_label
            )?;
        }
    }
    Ok(())
}

/// Amplitude accumulated on a regular time × frequency raster.
#[derive(Debug, Clone, PartialEq)]
pub struct TFGrid {
    pub time_edges: Vec<f64>,
    pub freq_edges: Vec<f64>,
    /// `intensity[t_bin][f_bin]`.
    pub intensity: Vec<Vec<f64>>,
    /// Samples whose frequency fell outside `[0, fmax]` or was not finite.
    pub dropped: usize,
}

impl TFGrid {
    pub fn total(&self) -> f64 {
        self.intensity.iter().flatten().sum()
    }

    /// Long-form CSV `t_bin,f_bin,intensity`, one row per cell.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t_bin,f_bin,intensity")?;
        for (ti, row) in self.intensity.iter().enumerate() {
            for (fi, v) in row.iter().enumerate() {
                writeln!(w, "{ti},{fi},{v}")?;
            }
        }
        Ok(())
    }
}

fn edges(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

fn cell(value: f64, lo: f64, hi: f64, n: usize) -> usize {
    (((value - lo) / (hi - lo) * n as f64).floor() as usize).min(n - 1)
}

/// Rasterizes tracks onto `n_time × n_freq` cells over `[0, fmax]` Hz.
///
/// The time axis spans from the earliest sample to one sample period past the
/// latest. Out-of-range frequencies are dropped and counted, never clamped.
pub fn tf_grid(tracks: &[TFTrack], n_time: usize, n_freq: usize, fmax: f64) -> Result<TFGrid> {
    if n_time == 0 || n_freq == 0 {
        return Err(Error::invalid("grid needs at least one time and one frequency cell"));
    }
    if !(fmax.is_finite() && fmax > 0.0) {
        return Err(Error::invalid(format!("fmax must be positive, got {fmax}")));
    }
    let t_lo = tracks.iter().filter_map(|t| t.times.first()).copied().fold(f64::INFINITY, f64::min);
    let t_hi = tracks
        .iter()
        .filter(|t| !t.is_empty())
        .map(|t| {
            let dt = if t.len() > 1 { t.times[1] - t.times[0] } else { 0.0 };
            t.times[t.len() - 1] + dt
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let (t_lo, t_hi) = if t_lo.is_finite() && t_hi > t_lo { (t_lo, t_hi) } else { (0.0, 1.0) };

    let mut intensity = vec![vec![0.0; n_freq]; n_time];
    let mut dropped = 0;
    for track in tracks {
        for ((&t, &a), &f) in track.times.iter().zip(&track.amplitudes).zip(&track.frequencies) {
            if !(f.is_finite() && (0.0..=fmax).contains(&f)) {
                dropped += 1;
                continue;
            }
            intensity[cell(t, t_lo, t_hi, n_time)][cell(f, 0.0, fmax, n_freq)] += a;
        }
    }
    Ok(TFGrid { time_edges: edges(t_lo, t_hi, n_time), freq_edges: edges(0.0, fmax, n_freq), intensity, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central(len: usize) -> std::ops::Range<usize> {
        len / 10..len - len / 10
    }

    #[test]
    fn pure_tone_track() {
        let fs = 1000.0;
        let x: Vec<f64> = (0..1000).map(|n| (2.0 * PI * 10.0 * n as f64 / fs).cos()).collect();
        let tr = instantaneous_attributes(&x, fs, 1).unwrap();
        for i in central(x.len()) {
            assert!((tr.amplitudes[i] - 1.0).abs() <= 0.01);
            assert!((tr.frequencies[i] - 10.0).abs() <= 0.1);
        }
    }

    #[test]
    fn constant_track() {
        let tr = instantaneous_attributes(&[-2.5; 100], 50.0, 1).unwrap();
        for i in central(100) {
            assert!((tr.amplitudes[i] - 2.5).abs() < 1e-12);
            assert!(tr.frequencies[i].abs() < 1e-12);
        }
    }

    #[test]
    fn short_or_odd_input_rejected() {
        assert!(instantaneous_attributes(&[1.0; 6], 1.0, 1).is_err());
        assert!(instantaneous_attributes(&[1.0; 9], 1.0, 1).is_err());
    }

    #[test]
    fn constant_frequency_fills_one_row() {
        let track = TFTrack {
            times: (0..50).map(|n| n as f64 * 0.01).collect(),
            amplitudes: vec![2.0; 50],
            frequencies: vec![12.5; 50],
            mode_label: 1,
        };
        let g = tf_grid(&[track], 10, 20, 50.0).unwrap();
        let rows: Vec<usize> =
            (0..20).filter(|&f| g.intensity.iter().any(|r| r[f] != 0.0)).collect();
        assert_eq!(rows, vec![5]);
        assert!((g.total() - 100.0).abs() < 1e-12);
        assert_eq!(g.dropped, 0);
    }

    #[test]
    fn empty_grid_is_zero() {
        let g = tf_grid(&[], 4, 4, 10.0).unwrap();
        assert_eq!(g.total(), 0.0);
        assert_eq!(g.intensity.len(), 4);
    }

    #[test]
    fn out_of_range_samples_dropped() {
        let track = TFTrack {
            times: vec![0.0, 0.1, 0.2, 0.3],
            amplitudes: vec![1.0, 2.0, 3.0, 4.0],
            frequencies: vec![-1.0, 5.0, 11.0, f64::NAN],
            mode_label: 1,
        };
        let g = tf_grid(&[track], 2, 2, 10.0).unwrap();
        assert_eq!(g.dropped, 3);
        assert_eq!(g.total(), 2.0);
        assert!(tf_grid(&[], 0, 3, 1.0).is_err());
        assert!(tf_grid(&[], 3, 3, 0.0).is_err());
    }
}
