//! Synthetic test signals, noise, sample loading, error metrics and timing.

mod bench;
mod generators;
mod io;
mod metrics;
mod noise;

pub use bench::{benchmark, standard_cases, write_timings_csv, BenchCase, TimingRow};
pub use generators::{
    gen_example, synthetic_ecg, Component, ExampleSpec, GeneratedExample, VibrationParams, ECG_LEN,
    ECG_SAMPLE_RATE,
};
pub use io::load_samples;
pub use metrics::{mode_errors, pearson, rmse, ErrorReport, ModeError};
pub use noise::{add_awgn, awgn, snr_db, DEFAULT_SEED};
