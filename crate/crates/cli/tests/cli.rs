use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use efd_core::{efd_decompose, Signal};
use tempfile::TempDir;

fn efd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_efd")).args(args).output().expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Data rows of a CSV written by the CLI, skipping the `#` line and the header.
fn rows(path: &Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# efd "));
    lines.next().unwrap();
    lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

#[test]
fn gen_then_decompose_round_trip() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("ex1.csv");
    let modes = dir.path().join("modes.csv");
    let bands = dir.path().join("bands.json");

    let out = efd(&["gen", "--example", "1", "--out", path_str(&input)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = efd(&[
        "decompose", "--in", path_str(&input), "--fs", "1000", "--method", "efd",
        "--segments", "4", "--out", path_str(&modes), "--bands-out", path_str(&bands),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("realized=3 modes=3"), "{summary}");
    let residual: f64 =
        summary.split("residual=").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(residual < 1e-10, "residual {residual}");

    let signal: Vec<f64> = rows(&input).iter().map(|r| r[1]).collect();
    let expected = efd_decompose(&Signal::new(signal, 1000.0).unwrap(), 4).unwrap();
    let modes = rows(&modes);
    assert_eq!(modes.len(), 1000);
    for (n, row) in modes.iter().enumerate() {
        assert_eq!(row.len(), 4);
        for (m, v) in expected.modes.iter().zip(&row[1..]) {
            assert_eq!(m.samples[n], *v);
        }
    }

    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&bands).unwrap()).unwrap();
    assert_eq!(json["realized"], 3);
    assert_eq!(json["meta"]["seed"], 1234);
}

#[test]
fn ewt_and_fdm_run_on_examples() {
    let dir = TempDir::new().unwrap();
    let modes = dir.path().join("m.csv");
    let filters = dir.path().join("f.csv");
    let out = efd(&[
        "decompose", "--example", "4", "--method", "ewt", "--segments", "4", "--segmentation",
        "local", "--out", path_str(&modes), "--filters-out", path_str(&filters),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read_to_string(&filters).unwrap().lines().count() > 2);

    let bands = dir.path().join("b.json");
    let out = efd(&[
        "decompose", "--example", "3", "--method", "fdm", "--out", path_str(&modes),
        "--bands-out", path_str(&bands),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&bands).unwrap()).unwrap();
    assert_eq!(json["bands"][0]["start_bin"], 1);
}

#[test]
fn zero_segments_is_a_usage_error() {
    let out = efd(&["decompose", "--example", "1", "--segments", "0", "--out", "unused.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_segments_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = efd(&["decompose", "--example", "1", "--out", path_str(&dir.path().join("m.csv"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_gamma_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let out = efd(&[
        "decompose", "--example", "1", "--method", "ewt", "--segments", "3", "--gamma", "5",
        "--out", path_str(&dir.path().join("m.csv")),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn missing_file_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.txt");
    let out = efd(&[
        "decompose", "--in", path_str(&missing), "--fs", "100", "--segments", "3", "--out",
        path_str(&dir.path().join("m.csv")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.txt"));
}

#[test]
fn odd_length_needs_allow_truncate() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("odd.txt");
    let samples: Vec<String> = (0..9).map(|n| (n as f64 * 0.9).sin().to_string()).collect();
    fs::write(&input, samples.join("\n")).unwrap();
    let modes = dir.path().join("m.csv");
    let args = ["decompose", "--in", path_str(&input), "--fs", "10", "--segments", "2", "--out", path_str(&modes)];
    assert_eq!(efd(&args).status.code(), Some(3));
    let mut truncating = args.to_vec();
    truncating.push("--allow-truncate");
    assert!(efd(&truncating).status.success());
    assert_eq!(rows(&modes).len(), 8);
}

#[test]
fn noisy_example_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let read = |name: &str, seed: &str| {
        let p = dir.path().join(name);
        assert!(efd(&["gen", "--example", "4", "--seed", seed, "--out", path_str(&p)]).status.success());
        fs::read_to_string(p).unwrap().lines().skip(1).collect::<Vec<_>>().join("\n")
    };
    let a = read("a.csv", "7");
    let b = read("b.csv", "7");
    let c = read("c.csv", "8");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn tfr_writes_tracks_and_grid() {
    let dir = TempDir::new().unwrap();
    let tracks = dir.path().join("t.csv");
    let grid = dir.path().join("g.csv");
    let out = efd(&[
        "tfr", "--example", "3", "--segments", "3", "--out", path_str(&tracks), "--grid-out",
        path_str(&grid), "--time-bins", "10", "--freq-bins", "20", "--fmax", "50",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&tracks).unwrap();
    assert_eq!(text.lines().nth(1), Some("t,amplitude,frequency_hz,mode"));
    assert_eq!(fs::read_to_string(&grid).unwrap().lines().nth(1), Some("t_bin,f_bin,intensity"));
}

#[test]
fn errors_report_is_json_with_meta() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let out = efd(&["errors", "--example", "3", "--segments", "3", "--out", path_str(&report)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(json["meta"]["version"].is_string());
    assert_eq!(json["entries"].as_array().unwrap().len(), 2);
}
