//! Fourier-spectrum segmentation.
//!
//! Three boundary rules over the half-spectrum magnitudes `m[0..=K/2]`:
//!
//! * [`boundaries_lowest_minima`]: the EFD rule. Control points are bin 0 plus the
//!   interior local maxima; the `N-1` largest are kept, each interior boundary sits
//!   at the lowest magnitude strictly between consecutive kept points, and the last
//!   boundary is the midpoint between the highest kept point and Nyquist.
//! * [`boundaries_midpoint_maxima`]: the original EWT rule, midpoints between the
//!   `N-1` largest interior maxima, last boundary at Nyquist.
//! * [`boundaries_local_minima`]: lowest minima between interior maxima, last
//!   boundary at Nyquist.
//!
//! Boundaries are real-valued positions in bin units. Ties always go to the lowest bin.

use std::cmp::Ordering;
use std::ops::Range;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A candidate peak of the half spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlPoint {
    pub bin: usize,
    pub magnitude: f64,
}

/// Ordered segment boundaries `0 = b_0 < b_1 < ... < b_N <= K/2` in bin units.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySet {
    boundaries: Vec<f64>,
    requested: usize,
    /// Bins of the kept control points, ascending.
    kept: Vec<usize>,
    /// Transform length `K`; used for Hz conversion.
    len: usize,
    sample_rate: f64,
}

impl BoundarySet {
    /// Builds a set from raw boundaries, collapsing duplicates.
    ///
    /// `len` is the transform length `K`; boundaries must start at 0, be
    /// nondecreasing, and end at or below `K/2`.
    pub fn new(mut boundaries: Vec<f64>, requested: usize, len: usize, sample_rate: f64) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::invalid("a boundary set needs at least two boundaries"));
        }
        if boundaries[0] != 0.0 {
            return Err(Error::invalid(format!("first boundary must be 0, got {}", boundaries[0])));
        }
        if boundaries.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::invalid("boundaries must be nondecreasing"));
        }
        let last = *boundaries.last().unwrap();
        if last > (len / 2) as f64 {
            return Err(Error::invalid(format!("last boundary {last} exceeds K/2 = {}", len / 2)));
        }
        boundaries.dedup();
        if boundaries.len() < 2 {
            return Err(Error::invalid("boundaries collapse to a single point"));
        }
        Ok(Self { boundaries, requested, kept: Vec::new(), len, sample_rate })
    }

    fn with_kept(mut self, kept: Vec<usize>) -> Self {
        self.kept = kept;
        self
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn boundaries_hz(&self) -> Vec<f64> {
        self.boundaries
            .iter()
            .map(|b| b * self.sample_rate / self.len as f64)
            .collect()
    }

    pub fn requested(&self) -> usize {
        self.requested
    }

    pub fn realized(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn kept_control_points(&self) -> &[usize] {
        &self.kept
    }

    pub fn transform_len(&self) -> usize {
        self.len
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn last(&self) -> f64 {
        *self.boundaries.last().unwrap()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("boundary set serializes")
    }
}

impl Serialize for BoundarySet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            boundaries_bins: &'a [f64],
            boundaries_hz: Vec<f64>,
            requested: usize,
            realized: usize,
        }
        Wire {
            boundaries_bins: &self.boundaries,
            boundaries_hz: self.boundaries_hz(),
            requested: self.requested,
            realized: self.realized(),
        }
        .serialize(serializer)
    }
}

/// One segment `[lo, hi)` and the integer DFT bins it owns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    pub bins: Range<usize>,
}

impl Band {
    pub fn from_bins(bins: Range<usize>) -> Self {
        Self { lo: bins.start as f64, hi: bins.end as f64, bins }
    }

    pub fn contains_bin(&self, bin: usize) -> bool {
        self.bins.contains(&bin)
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }
}

fn by_magnitude_then_bin(a: &ControlPoint, b: &ControlPoint) -> Ordering {
    b.magnitude
        .partial_cmp(&a.magnitude)
        .unwrap_or(Ordering::Equal)
        .then(a.bin.cmp(&b.bin))
}

fn interior_maxima(magnitudes: &[f64]) -> Vec<ControlPoint> {
    let n = magnitudes.len();
    let mut out = Vec::new();
    let mut k = 1;
    while k + 1 < n {
        if magnitudes[k] > magnitudes[k - 1] {
            // walk the plateau; it must drop again before the last bin
            let mut j = k;
            while j + 1 < n && magnitudes[j + 1] == magnitudes[k] {
                j += 1;
            }
            if j + 1 < n && magnitudes[j + 1] < magnitudes[k] {
                out.push(ControlPoint { bin: k, magnitude: magnitudes[k] });
            }
            k = j + 1;
        } else {
            k += 1;
        }
    }
    out
}

fn check_magnitudes(magnitudes: &[f64]) -> Result<()> {
    if magnitudes.len() < 3 {
        return Err(Error::invalid(format!(
            "need at least 3 half-spectrum magnitudes, got {}",
            magnitudes.len()
        )));
    }
    if let Some(i) = magnitudes.iter().position(|m| !m.is_finite() || *m < 0.0) {
        return Err(Error::invalid(format!("magnitude at bin {i} is not a finite nonnegative value")));
    }
    Ok(())
}

/// Bin 0 plus every interior strict local maximum (plateaus by their first bin),
/// largest magnitude first.
pub fn detect_control_points(magnitudes: &[f64]) -> Result<Vec<ControlPoint>> {
    check_magnitudes(magnitudes)?;
    let mut points = vec![ControlPoint { bin: 0, magnitude: magnitudes[0] }];
    points.extend(interior_maxima(magnitudes));
    points.sort_by(by_magnitude_then_bin);
    Ok(points)
}

fn check_segments(n_segments: usize) -> Result<()> {
    if n_segments < 1 {
        return Err(Error::invalid("number of segments must be at least 1"));
    }
    Ok(())
}

/// Keeps the `n_segments - 1` largest points (or all), ascending by bin.
fn keep_largest(mut points: Vec<ControlPoint>, n_segments: usize) -> Vec<usize> {
    points.sort_by(by_magnitude_then_bin);
    let mut kept: Vec<usize> = points.iter().take(n_segments - 1).map(|p| p.bin).collect();
    kept.sort_unstable();
    kept
}

/// Lowest magnitude strictly between two bins; ties to the lowest bin. An empty
/// interval gives the midpoint of the two flanks.
fn lowest_between(magnitudes: &[f64], lo: usize, hi: usize) -> f64 {
    if hi <= lo + 1 {
        return (lo + hi) as f64 / 2.0;
    }
    let mut best = lo + 1;
    for k in lo + 2..hi {
        if magnitudes[k] < magnitudes[best] {
            best = k;
        }
    }
    best as f64
}

fn minima_boundaries(magnitudes: &[f64], kept: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0];
    let mut prev = 0;
    for &w in kept {
        out.push(lowest_between(magnitudes, prev, w));
        prev = w;
    }
    out
}

fn full_band(magnitudes: &[f64], n_segments: usize, sample_rate: f64) -> Result<BoundarySet> {
    let half = magnitudes.len() - 1;
    BoundarySet::new(vec![0.0, half as f64], n_segments, 2 * half, sample_rate)
}

/// EFD boundaries: lowest minima between the kept control points (bin 0 eligible),
/// last boundary halfway between the highest kept point and Nyquist.
///
/// `sample_rate` only affects the Hz view of the result; the transform length is
/// taken as `2 * (magnitudes.len() - 1)`.
pub fn boundaries_lowest_minima(
    magnitudes: &[f64],
    n_segments: usize,
    sample_rate: f64,
) -> Result<BoundarySet> {
    check_segments(n_segments)?;
    let points = detect_control_points(magnitudes)?;
    if n_segments == 1 {
        return full_band(magnitudes, n_segments, sample_rate);
    }
    let half = magnitudes.len() - 1;
    let kept = keep_largest(points, n_segments);
    let mut bounds = minima_boundaries(magnitudes, &kept);
    let top = *kept.last().expect("bin 0 is always a control point");
    bounds.push((top as f64 + half as f64) / 2.0);
    Ok(BoundarySet::new(bounds, n_segments, 2 * half, sample_rate)?.with_kept(kept))
}

/// Original EWT boundaries: midpoints between consecutive kept interior maxima
/// (starting from 0), last boundary at Nyquist.
pub fn boundaries_midpoint_maxima(
    magnitudes: &[f64],
    n_segments: usize,
    sample_rate: f64,
) -> Result<BoundarySet> {
    check_segments(n_segments)?;
    check_magnitudes(magnitudes)?;
    if n_segments == 1 {
        return full_band(magnitudes, n_segments, sample_rate);
    }
    let half = magnitudes.len() - 1;
    let kept = keep_largest(interior_maxima(magnitudes), n_segments);
    let mut bounds = vec![0.0];
    let mut prev = 0;
    for &w in &kept {
        bounds.push((w + prev) as f64 / 2.0);
        prev = w;
    }
    bounds.push(half as f64);
    Ok(BoundarySet::new(bounds, n_segments, 2 * half, sample_rate)?.with_kept(kept))
}

/// Local-minima boundaries: as [`boundaries_lowest_minima`] but without the bin-0
/// control point and with the last boundary at Nyquist.
pub fn boundaries_local_minima(
    magnitudes: &[f64],
    n_segments: usize,
    sample_rate: f64,
) -> Result<BoundarySet> {
    check_segments(n_segments)?;
    check_magnitudes(magnitudes)?;
    if n_segments == 1 {
        return full_band(magnitudes, n_segments, sample_rate);
    }
    let half = magnitudes.len() - 1;
    let kept = keep_largest(interior_maxima(magnitudes), n_segments);
    let mut bounds = minima_boundaries(magnitudes, &kept);
    bounds.push(half as f64);
    Ok(BoundarySet::new(bounds, n_segments, 2 * half, sample_rate)?.with_kept(kept))
}

/// Integer-bin ownership: band `i` owns `b_{i-1} <= k < b_i`. Bins at or above
/// the last boundary belong to no band. Empty bands are dropped.
pub fn bands_from_boundaries(bs: &BoundarySet) -> Vec<Band> {
    bs.boundaries()
        .windows(2)
        .filter_map(|w| {
            let start = w[0].ceil() as usize;
            let end = w[1].ceil() as usize;
            (end > start).then(|| Band { lo: w[0], hi: w[1], bins: start..end })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: [f64; 9] = [0.0, 1.0, 5.0, 1.0, 1.0, 4.0, 1.0, 1.0, 3.0];

    fn bins(points: &[ControlPoint]) -> Vec<usize> {
        points.iter().map(|p| p.bin).collect()
    }

    #[test]
    fn control_points_rank_by_magnitude() {
        let p = detect_control_points(&[0.0, 1.0, 5.0, 1.0, 4.0, 1.0, 3.0]).unwrap();
        assert_eq!(bins(&p), vec![2, 4, 0]);
        let mags: Vec<f64> = p.iter().map(|c| c.magnitude).collect();
        assert_eq!(mags, vec![5.0, 4.0, 0.0]);
    }

    #[test]
    fn plateau_keeps_first_bin() {
        assert_eq!(bins(&detect_control_points(&[0.0, 3.0, 3.0, 1.0]).unwrap()), vec![1, 0]);
        // a plateau running into the last bin is not a maximum
        assert_eq!(bins(&detect_control_points(&[0.0, 3.0, 3.0]).unwrap()), vec![0]);
    }

    #[test]
    fn control_point_ties_prefer_lower_bin() {
        let p = detect_control_points(&[2.0, 0.0, 2.0, 0.0, 2.0, 0.0]).unwrap();
        assert_eq!(bins(&p), vec![0, 2, 4]);
    }

    #[test]
    fn too_short_magnitudes_rejected() {
        assert!(detect_control_points(&[1.0, 2.0]).is_err());
        assert!(boundaries_lowest_minima(&[1.0, 2.0], 2, 1.0).is_err());
    }

    #[test]
    fn lowest_minima_worked_example() {
        let bs = boundaries_lowest_minima(&SAMPLE, 3, 16.0).unwrap();
        assert_eq!(bs.boundaries(), &[0.0, 1.0, 3.0, 6.5]);
        assert_eq!(bs.kept_control_points(), &[2, 5]);
        assert_eq!(bs.realized(), 3);
    }

    #[test]
    fn one_segment_is_the_whole_half_spectrum() {
        for f in [boundaries_lowest_minima, boundaries_midpoint_maxima, boundaries_local_minima] {
            let bs = f(&SAMPLE, 1, 16.0).unwrap();
            assert_eq!(bs.boundaries(), &[0.0, 8.0]);
            assert_eq!(bs.realized(), 1);
        }
    }

    #[test]
    fn zero_segments_rejected() {
        assert!(boundaries_lowest_minima(&SAMPLE, 0, 1.0).is_err());
        assert!(boundaries_midpoint_maxima(&SAMPLE, 0, 1.0).is_err());
        assert!(boundaries_local_minima(&SAMPLE, 0, 1.0).is_err());
    }

    #[test]
    fn midpoint_maxima_worked_examples() {
        let bs = boundaries_midpoint_maxima(&SAMPLE, 3, 16.0).unwrap();
        assert_eq!(bs.boundaries(), &[0.0, 1.0, 3.5, 8.0]);
        let single = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0];
        let bs = boundaries_midpoint_maxima(&single, 2, 16.0).unwrap();
        assert_eq!(bs.boundaries(), &[0.0, 3.0, 8.0]);
    }

    #[test]
    fn local_minima_worked_example() {
        let bs = boundaries_local_minima(&SAMPLE, 3, 16.0).unwrap();
        assert_eq!(bs.boundaries(), &[0.0, 1.0, 3.0, 8.0]);
    }

    #[test]
    fn kept_bin_zero_collapses_first_boundary() {
        // bin 0 dominates; kept points are 0 and 4
        let mags = [9.0, 2.0, 1.0, 1.5, 3.0, 0.5, 0.2, 0.1, 0.0];
        let bs = boundaries_lowest_minima(&mags, 3, 16.0).unwrap();
        assert_eq!(bs.kept_control_points(), &[0, 4]);
        assert_eq!(bs.boundaries(), &[0.0, 2.0, 6.0]);
        assert_eq!(bs.requested(), 3);
        assert_eq!(bs.realized(), 2);
    }

    #[test]
    fn fewer_control_points_than_requested() {
        let mags = [1.0, 0.5, 2.0, 0.5, 0.1];
        let bs = boundaries_lowest_minima(&mags, 6, 8.0).unwrap();
        assert_eq!(bs.kept_control_points(), &[0, 2]);
        assert_eq!(bs.boundaries(), &[0.0, 1.0, 3.0]);
    }

    #[test]
    fn bands_follow_half_open_ownership() {
        let bs = BoundarySet::new(vec![0.0, 1.0, 3.0, 6.5], 3, 16, 16.0).unwrap();
        let bands = bands_from_boundaries(&bs);
        let owned: Vec<_> = bands.iter().map(|b| b.bins.clone()).collect();
        assert_eq!(owned, vec![0..1, 1..3, 3..7]);

        let whole = BoundarySet::new(vec![0.0, 8.0], 1, 16, 16.0).unwrap();
        assert_eq!(bands_from_boundaries(&whole)[0].bins, 0..8);
    }

    #[test]
    fn fractional_boundaries_can_leave_empty_bands() {
        let bs = BoundarySet::new(vec![0.0, 0.5, 0.8, 4.0], 3, 16, 16.0).unwrap();
        let bands = bands_from_boundaries(&bs);
        assert_eq!(bands.len(), 2);
        assert_eq!(bands[0].bins, 0..1);
        assert_eq!(bands[1].bins, 1..4);
    }

    #[test]
    fn json_has_bins_and_hz() {
        let bs = BoundarySet::new(vec![0.0, 1.0, 3.0, 6.5], 4, 16, 32.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&bs.to_json()).unwrap();
        assert_eq!(v["boundaries_bins"], serde_json::json!([0.0, 1.0, 3.0, 6.5]));
        assert_eq!(v["boundaries_hz"], serde_json::json!([0.0, 2.0, 6.0, 13.0]));
        assert_eq!(v["requested"], 4);
        assert_eq!(v["realized"], 3);
    }
}
