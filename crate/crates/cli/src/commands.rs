use std::io::Write;

use efd_core::ewt::{decompose_with_bank, frame_reconstruct};
use efd_core::fdm::band_report_json;
use efd_core::testbed::{
    benchmark, gen_example, load_samples, mode_errors, standard_cases, write_timings_csv,
    ExampleSpec, GeneratedExample,
};
use efd_core::tfr::write_tracks_csv;
use efd_core::{
    boundaries_local_minima, boundaries_lowest_minima, boundaries_midpoint_maxima,
    build_filter_bank, efd_decompose, fdm_decompose, forward_transform, half_magnitudes,
    instantaneous_attributes, tf_grid, BoundarySet, DecompositionResult, EwtFilterBank,
    EwtSegmentation, Method, Signal,
};

use crate::output::{write_csv, write_json, CliError, Meta};
use crate::{Command, InputArgs, MethodArgs, NoiseArgs};

pub fn run(command: Command, argv: &[String]) -> Result<(), CliError> {
    match command {
        Command::Gen { example, out, noise } => {
            let generated = generate(example, &noise)?;
            let meta = Meta::new(argv, noise.seed);
            write_csv(&out, &meta, |w| generated.write_csv(w))?;
            println!(
                "example {example}: {} samples at {} Hz, {} components -> {}",
                generated.signal.len(),
                generated.signal.sample_rate(),
                generated.components.len(),
                out.display()
            );
            Ok(())
        }
        Command::Boundaries { input, method, out } => {
            let signal = load_input(&input)?;
            let bs = segment(&signal, &method)?;
            let meta = Meta::new(argv, input.noise.seed);
            let value = serde_json::to_value(&bs).map_err(std::io::Error::from)?;
            match out {
                Some(path) => write_json(&path, &meta, value)?,
                None => println!("{}", bs.to_json()),
            }
            Ok(())
        }
        Command::Decompose { input, method, out, bands_out, filters_out } => {
            if filters_out.is_some() && method.method != Method::Ewt {
                return Err(CliError::Usage("--filters-out applies to --method ewt only".into()));
            }
            let signal = load_input(&input)?;
            let meta = Meta::new(argv, input.noise.seed);
            let run = decompose(&signal, &method)?;
            write_csv(&out, &meta, |w| run.result.write_modes_csv(w))?;
            if let Some(path) = bands_out {
                let report = match method.method {
                    Method::Fdm => serde_json::from_str(&band_report_json(&run.result))
                        .map_err(std::io::Error::from)?,
                    _ => serde_json::to_value(&run.result.boundaries).map_err(std::io::Error::from)?,
                };
                write_json(&path, &meta, report)?;
            }
            if let (Some(path), Some(bank)) = (filters_out, &run.bank) {
                write_csv(&path, &meta, |w| bank.write_csv(w))?;
            }
            print_summary(&run, &method);
            Ok(())
        }
        Command::Tfr { input, method, out, grid_out, time_bins, freq_bins, fmax } => {
            let signal = load_input(&input)?;
            let meta = Meta::new(argv, input.noise.seed);
            let run = decompose(&signal, &method)?;
            let fs = signal.sample_rate();
            let tracks = run
                .result
                .modes
                .iter()
                .map(|m| instantaneous_attributes(&m.samples, fs, m.label))
                .collect::<efd_core::Result<Vec<_>>>()?;
            write_csv(&out, &meta, |w| write_tracks_csv(&tracks, w))?;
            if let Some(path) = grid_out {
                let fmax = fmax.unwrap_or(fs / 2.0);
                let grid = tf_grid(&tracks, time_bins as usize, freq_bins as usize, fmax)?;
                write_csv(&path, &meta, |w| grid.write_csv(w))?;
                if grid.dropped > 0 {
                    eprintln!("warning: {} samples fell outside the grid", grid.dropped);
                }
            }
            println!("{} tracks of {} samples -> {}", tracks.len(), signal.len(), out.display());
            Ok(())
        }
        Command::Errors { example, noise, method, out } => {
            let generated = generate(example, &noise)?;
            let run = decompose(&generated.signal, &method)?;
            let report = mode_errors(&run.result.modes, &generated.truths())?;
            match out {
                Some(path) => {
                    let value = serde_json::from_str(&report.to_json()).map_err(std::io::Error::from)?;
                    write_json(&path, &Meta::new(argv, noise.seed), value)?;
                }
                None => println!("{}", report.to_json()),
            }
            for e in &report.entries {
                let mode = e.mode.map_or_else(|| "-".to_string(), |m| m.to_string());
                eprintln!("{:>6} mode {:>2}  r={:.4}  rmse={:.4}  central={:.4}", e.truth, mode, e.correlation, e.rmse_full, e.rmse_central);
            }
            Ok(())
        }
        Command::Bench { examples, reps, ecg, ecg_fs, out } => {
            let ecg = ecg.map(|p| load_samples(p, ecg_fs, true)).transpose()?;
            let rows = benchmark(&standard_cases(&examples, ecg)?, reps as usize)?;
            match out {
                Some(path) => write_csv(&path, &Meta::new(argv, 0), |w| write_timings_csv(&rows, w))?,
                None => write_timings_csv(&rows, std::io::stdout().lock())?,
            }
            Ok(())
        }
    }
}

fn generate(example: u8, noise: &NoiseArgs) -> Result<GeneratedExample, CliError> {
    let mut spec = ExampleSpec::new(example)?;
    spec.seed = noise.seed;
    spec.snr_db = noise.snr.0;
    Ok(gen_example(&spec)?)
}

fn load_input(input: &InputArgs) -> Result<Signal, CliError> {
    match (&input.input, input.example) {
        (Some(path), _) => {
            let fs = input.fs.ok_or_else(|| CliError::Usage("--in needs --fs".into()))?;
            load_samples(path, fs, input.allow_truncate).map_err(|e| match e {
                efd_core::Error::Io(io) => {
                    CliError::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display())))
                }
                e => e.into(),
            })
        }
        (None, Some(id)) => Ok(generate(id, &input.noise)?.signal),
        (None, None) => Err(CliError::Usage("one of --in or --example is required".into())),
    }
}

fn segments(method: &MethodArgs) -> Result<usize, CliError> {
    method
        .segments
        .map(|n| n as usize)
        .ok_or_else(|| CliError::Usage(format!("--segments is required for --method {}", method.method)))
}

fn segment(signal: &Signal, method: &MethodArgs) -> Result<BoundarySet, CliError> {
    let n = match method.method {
        Method::Fdm => return Ok(fdm_decompose(signal)?.boundaries),
        _ => segments(method)?,
    };
    signal.require_even()?;
    let magnitudes = half_magnitudes(&forward_transform(signal));
    let fs = signal.sample_rate();
    let bs = match (method.method, method.segmentation) {
        (Method::Efd, _) => boundaries_lowest_minima(&magnitudes, n, fs)?,
        (_, EwtSegmentation::MidpointMaxima) => boundaries_midpoint_maxima(&magnitudes, n, fs)?,
        (_, EwtSegmentation::LocalMinima) => boundaries_local_minima(&magnitudes, n, fs)?,
    };
    Ok(bs)
}

struct Run {
    result: DecompositionResult,
    bank: Option<EwtFilterBank>,
    residual: f64,
}

fn decompose(signal: &Signal, method: &MethodArgs) -> Result<Run, CliError> {
    if method.gamma.is_some() && method.method != Method::Ewt {
        return Err(CliError::Usage("--gamma applies to --method ewt only".into()));
    }
    match method.method {
        Method::Efd => {
            let result = efd_decompose(signal, segments(method)?)?;
            let residual = result.reconstruction_residual(signal);
            Ok(Run { result, bank: None, residual })
        }
        Method::Ewt => {
            let bs = segment(signal, method)?;
            let bank = build_filter_bank(&bs, method.gamma)?;
            let spectrum = forward_transform(signal);
            let result = decompose_with_bank(&spectrum, &bank)?;
            let back = frame_reconstruct(&spectrum, &bank);
            let residual = efd_core::decomposition::relative_max_error(&back, signal.samples());
            Ok(Run { result, bank: Some(bank), residual })
        }
        Method::Fdm => {
            if method.segments.is_some() {
                eprintln!("note: --segments is ignored by fdm");
            }
            let result = fdm_decompose(signal)?;
            let residual = result.reconstruction_residual(signal);
            Ok(Run { result, bank: None, residual })
        }
    }
}

fn print_summary(run: &Run, method: &MethodArgs) {
    let r = &run.result;
    let requested = match method.method {
        Method::Fdm => "-".to_string(),
        _ => r.boundaries.requested().to_string(),
    };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "method={} segments requested={} realized={} modes={} residual={:.3e}",
        r.method,
        requested,
        r.boundaries.realized(),
        r.modes.len(),
        run.residual
    );
    let hz: Vec<String> = r.boundaries.boundaries_hz().iter().map(|b| format!("{b:.4}")).collect();
    let _ = writeln!(out, "boundaries_hz=[{}]", hz.join(", "));
}
