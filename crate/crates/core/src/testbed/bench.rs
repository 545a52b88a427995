use std::io::{self, Write};
use std::time::{Duration, Instant};

use crate::decomposition::Method;
use crate::efd::efd_decompose;
use crate::error::{Error, Result};
use crate::ewt::{ewt_decompose, EwtSegmentation};
use crate::fdm::fdm_decompose;
use crate::spectral::Signal;

use super::generators::{gen_example, synthetic_ecg, ExampleSpec};

/// Minimum wall time of one timed repetition; fast methods are batched up to it.
const TARGET_REP: Duration = Duration::from_millis(5);

#[derive(Debug, Clone)]
pub struct BenchCase {
    pub example: String,
    pub signal: Signal,
    pub efd_segments: usize,
    pub ewt_segments: usize,
    pub ewt_segmentation: EwtSegmentation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub example: String,
    pub method: Method,
    /// Median seconds per single decomposition.
    pub median_seconds: f64,
    pub runs: usize,
}

/// The five standard cases: examples 1 to 4 with default specs, then the ECG
/// trace (the synthetic stand-in when `ecg` is `None`).
pub fn standard_cases(examples: &[u8], ecg: Option<Signal>) -> Result<Vec<BenchCase>> {
    const EFD_SEGMENTS: [usize; 4] = [4, 5, 3, 4];
    const EWT_SEGMENTS: [usize; 4] = [3, 4, 2, 4];
    let mut cases = Vec::new();
    for &id in examples {
        let signal = gen_example(&ExampleSpec::new(id)?)?.signal;
        let i = id as usize - 1;
        cases.push(BenchCase {
            example: id.to_string(),
            signal,
            efd_segments: EFD_SEGMENTS[i],
            ewt_segments: EWT_SEGMENTS[i],
            ewt_segmentation: if id == 4 { EwtSegmentation::LocalMinima } else { EwtSegmentation::MidpointMaxima },
        });
    }
    cases.push(BenchCase {
        example: "ecg".into(),
        signal: ecg.unwrap_or_else(synthetic_ecg),
        efd_segments: 11,
        ewt_segments: 10,
        ewt_segmentation: EwtSegmentation::MidpointMaxima,
    });
    Ok(cases)
}

fn run_once(case: &BenchCase, method: Method) -> Result<()> {
    let r = match method {
        Method::Efd => efd_decompose(&case.signal, case.efd_segments)?,
        Method::Ewt => ewt_decompose(&case.signal, case.ewt_segments, case.ewt_segmentation, None)?,
        Method::Fdm => fdm_decompose(&case.signal)?,
    };
    std::hint::black_box(r);
    Ok(())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Median wall time per call for EFD, EWT and FDM on every case, single-threaded.
///
/// Each repetition times a batch of calls sized so the batch lasts at least
/// 5 ms, and reports the per-call average; the median is over `reps` batches.
/// Methods take turns within every repetition so slow drifts in machine load
/// hit all three alike.
pub fn benchmark(cases: &[BenchCase], reps: usize) -> Result<Vec<TimingRow>> {
    if reps < 3 {
        return Err(Error::invalid(format!("need at least 3 repetitions, got {reps}")));
    }
    let mut rows = Vec::new();
    for case in cases {
        let mut batches = Vec::with_capacity(Method::ALL.len());
        for method in Method::ALL {
            let start = Instant::now();
            run_once(case, method)?;
            let single = start.elapsed().max(Duration::from_nanos(1));
            batches.push((TARGET_REP.as_secs_f64() / single.as_secs_f64()).ceil().max(1.0) as usize);
        }
        let mut times = vec![Vec::with_capacity(reps); Method::ALL.len()];
        for _ in 0..reps {
            for (i, method) in Method::ALL.into_iter().enumerate() {
                let start = Instant::now();
                for _ in 0..batches[i] {
                    run_once(case, method)?;
                }
                times[i].push(start.elapsed().as_secs_f64() / batches[i] as f64);
            }
        }
        for (method, t) in Method::ALL.into_iter().zip(times) {
            rows.push(TimingRow { example: case.example.clone(), method, median_seconds: median(t), runs: reps });
        }
    }
    Ok(rows)
}

/// CSV `example,method,median_seconds,runs`.
pub fn write_timings_csv<W: Write>(rows: &[TimingRow], mut w: W) -> io::Result<()> {
    writeln!(w, "example,method,median_seconds,runs")?;
    for r in rows {
        writeln!(w, "{},{},{:.9},{}", r.example, r.method, r.median_seconds, r.runs)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn too_few_reps() {
        assert!(benchmark(&[], 2).is_err());
    }

    #[test]
    fn rows_per_case_and_method() {
        let x: Vec<f64> = (0..64).map(|n| (n as f64 * 0.7).sin()).collect();
        let case = BenchCase {
            example: "t".into(),
            signal: Signal::new(x, 64.0).unwrap(),
            efd_segments: 2,
            ewt_segments: 2,
            ewt_segmentation: EwtSegmentation::MidpointMaxima,
        };
        let rows = benchmark(&[case], 3).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.runs == 3 && r.median_seconds > 0.0));
        let mut out = Vec::new();
        write_timings_csv(&rows, &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("example,method,median_seconds,runs\nt,efd,"));
    }

    #[test]
    fn five_standard_cases() {
        let cases = standard_cases(&[1, 2, 3, 4], None).unwrap();
        assert_eq!(cases.len(), 5);
        assert_eq!(cases[4].signal.len(), 1000);
        assert_eq!(cases[3].ewt_segmentation, EwtSegmentation::LocalMinima);
    }
}
