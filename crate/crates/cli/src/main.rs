//! `efd`: generate test signals, decompose them with EFD/EWT/FDM, and time the methods.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use efd_core::{EwtSegmentation, Method};

#[derive(Debug, Parser)]
#[command(name = "efd", version, about = "Empirical Fourier decomposition toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write one of the four synthetic examples as CSV (t,signal,comp1,...).
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        example: u8,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        noise: NoiseArgs,
    },
    /// Segment the spectrum and write the boundaries as JSON.
    Boundaries {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a signal and write its modes as CSV (t,mode1,...).
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        out: PathBuf,
        /// JSON band report: boundaries for EFD/EWT, FIBF bins for FDM.
        #[arg(long)]
        bands_out: Option<PathBuf>,
        /// EWT only: filter gains per bin as CSV.
        #[arg(long)]
        filters_out: Option<PathBuf>,
    },
    /// Hilbert amplitude/frequency tracks of every mode, optionally rasterized.
    Tfr {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        method: MethodArgs,
        /// Tracks CSV (t,amplitude,frequency_hz,mode).
        #[arg(long)]
        out: PathBuf,
        /// Grid CSV (t_bin,f_bin,intensity).
        #[arg(long)]
        grid_out: Option<PathBuf>,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        time_bins: u32,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        freq_bins: u32,
        /// Upper frequency of the grid in Hz; defaults to fs/2.
        #[arg(long)]
        fmax: Option<f64>,
    },
    /// Compare the modes of a synthetic example with its true components (JSON).
    Errors {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        example: u8,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Median wall time of EFD, EWT and FDM on the standard cases (CSV).
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1u8, 2, 3, 4],
              value_parser = clap::value_parser!(u8).range(1..=4))]
        examples: Vec<u8>,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(3..))]
        reps: u32,
        /// ECG excerpt, one sample per line; a synthetic trace is used otherwise.
        #[arg(long)]
        ecg: Option<PathBuf>,
        #[arg(long, default_value_t = efd_core::testbed::ECG_SAMPLE_RATE)]
        ecg_fs: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct NoiseArgs {
    /// Noise seed (example 4).
    #[arg(long, default_value_t = efd_core::testbed::DEFAULT_SEED)]
    seed: u64,
    /// Noise level in dB for example 4, or "none".
    #[arg(long, default_value = "20", value_parser = parse_snr)]
    snr: Snr,
}

/// Noise level in dB; `None` means no noise.
#[derive(Debug, Clone, Copy)]
struct Snr(Option<f64>);

#[derive(Debug, Clone, Args)]
struct InputArgs {
    /// Sample file: one value per line, or CSV with a `signal`/`value` column.
    #[arg(long = "in", conflicts_with = "example", required_unless_present = "example", requires = "fs")]
    input: Option<PathBuf>,
    /// Sample rate of `--in` in Hz.
    #[arg(long)]
    fs: Option<f64>,
    /// Use a synthetic example instead of a file.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    example: Option<u8>,
    /// Drop the last sample of an odd-length file instead of failing.
    #[arg(long)]
    allow_truncate: bool,
    #[command(flatten)]
    noise: NoiseArgs,
}

#[derive(Debug, Clone, Args)]
struct MethodArgs {
    #[arg(long, default_value = "efd")]
    method: Method,
    /// Requested number of segments (EFD and EWT).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    segments: Option<u32>,
    /// EWT segmentation: midpoint or local.
    #[arg(long, default_value = "midpoint")]
    segmentation: EwtSegmentation,
    /// EWT transition ratio; defaults to 0.9 of the admissible bound.
    #[arg(long)]
    gamma: Option<f64>,
}

fn parse_snr(s: &str) -> Result<Snr, String> {
    if s.eq_ignore_ascii_case("none") {
        return Ok(Snr(None));
    }
    s.parse::<f64>().map(|v| Snr(Some(v))).map_err(|_| format!("expected a number of dB or 'none', got '{s}'"))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match commands::run(cli.command, &argv[1..]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
