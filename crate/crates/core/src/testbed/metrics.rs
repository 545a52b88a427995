use serde::Serialize;

use crate::decomposition::Mode;
use crate::error::{Error, Result};

use super::generators::Component;

/// Pearson correlation; 0 when either series has zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return 0.0;
    }
    (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0)
}

pub fn rmse(a: &[f64], b: &[f64]) -> f64 {
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    (sum / a.len() as f64).sqrt()
}

/// Error of one truth component against its assigned mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeError {
    pub truth: String,
    /// Label of the assigned mode; `None` when modes ran out (metrics then
    /// compare against zero).
    pub mode: Option<usize>,
    pub correlation: f64,
    pub rmse_full: f64,
    /// RMSE over the central 90% of the frame.
    pub rmse_central: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    /// In truth order.
    pub entries: Vec<ModeError>,
}

impl ErrorReport {
    pub fn for_truth(&self, name: &str) -> Option<&ModeError> {
        self.entries.iter().find(|e| e.truth == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Pairs truths with modes greedily by largest |Pearson correlation| and
/// measures each pair.
pub fn mode_errors(modes: &[Mode], truths: &[Component]) -> Result<ErrorReport> {
    if modes.is_empty() || truths.is_empty() {
        return Err(Error::invalid("mode_errors needs at least one mode and one truth"));
    }
    let len = truths[0].samples.len();
    if let Some(bad) = modes.iter().map(|m| m.samples.len()).chain(truths.iter().map(|t| t.samples.len())).find(|&l| l != len) {
        return Err(Error::invalid(format!("series lengths differ: {len} vs {bad}")));
    }

    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (ti, t) in truths.iter().enumerate() {
        for (mi, m) in modes.iter().enumerate() {
            pairs.push((pearson(&m.samples, &t.samples).abs(), ti, mi));
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut assigned: Vec<Option<usize>> = vec![None; truths.len()];
    let mut used = vec![false; modes.len()];
    for (_, ti, mi) in pairs {
        if assigned[ti].is_none() && !used[mi] {
            assigned[ti] = Some(mi);
            used[mi] = true;
        }
    }

    let cut = len / 20;
    let central = cut..len - cut;
    let zeros = vec![0.0; len];
    let entries = truths
        .iter()
        .zip(&assigned)
        .map(|(t, &mi)| {
            let est = mi.map_or(&zeros[..], |i| &modes[i].samples[..]);
            ModeError {
                truth: t.name.clone(),
                mode: mi.map(|i| modes[i].label),
                correlation: pearson(est, &t.samples),
                rmse_full: rmse(est, &t.samples),
                rmse_central: rmse(&est[central.clone()], &t.samples[central.clone()]),
            }
        })
        .collect();
    Ok(ErrorReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segmentation::Band;
    use std::f64::consts::PI;

    fn series(f: f64, len: usize) -> Vec<f64> {
        (0..len).map(|n| (2.0 * PI * f * n as f64 / len as f64).sin()).collect()
    }

    fn mode(samples: Vec<f64>, label: usize) -> Mode {
        Mode { samples, band: Band::from_bins(label..label + 1), label }
    }

    fn truth(name: &str, samples: Vec<f64>) -> Component {
        Component { name: name.into(), samples }
    }

    #[test]
    fn identical_series() {
        let a = series(3.0, 200);
        let b = series(11.0, 200);
        let r = mode_errors(
            &[mode(b.clone(), 1), mode(a.clone(), 2)],
            &[truth("a", a), truth("b", b)],
        )
        .unwrap();
        assert_eq!(r.entries[0].mode, Some(2));
        assert_eq!(r.entries[1].mode, Some(1));
        for e in &r.entries {
            assert_eq!(e.rmse_full, 0.0);
            assert!((e.correlation - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_offset() {
        let a = series(5.0, 400);
        let shifted: Vec<f64> = a.iter().map(|v| v + 0.3).collect();
        let r = mode_errors(&[mode(shifted, 1)], &[truth("a", a)]).unwrap();
        assert!((r.entries[0].rmse_central - 0.3).abs() < 1e-12);
        assert!((r.entries[0].correlation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn more_truths_than_modes() {
        let a = series(2.0, 100);
        let r = mode_errors(&[mode(a.clone(), 1)], &[truth("a", a.clone()), truth("b", series(9.0, 100))]).unwrap();
        assert_eq!(r.entries[1].mode, None);
        assert_eq!(r.entries[1].correlation, 0.0);
        assert!(r.to_json().contains("\"rmse_central\""));
    }

    #[test]
    fn length_mismatch() {
        assert!(mode_errors(&[mode(vec![0.0; 10], 1)], &[truth("a", vec![0.0; 12])]).is_err());
        assert!(mode_errors(&[], &[truth("a", vec![0.0; 12])]).is_err());
    }

    #[test]
    fn zero_variance_correlation() {
        assert_eq!(pearson(&[1.0; 5], &[1.0, 2.0, 3.0, 4.0, 5.0]), 0.0);
        assert!((pearson(&[1.0, 2.0, 3.0], &[-2.0, -4.0, -6.0]) + 1.0).abs() < 1e-12);
    }
}
