use std::path::PathBuf;
use std::process::Command;

use solvable_dirac::cli::{run, EXIT_NO_BOUND_STATE, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("solvable-dirac").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites the file.
fn check_golden(name: &str, args: &[&str], expected_code: i32) {
    let (code, out, err) = invoke(args);
    assert_eq!(code, expected_code, "{name}: stderr = {err}");
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(out == want, "{name} differs from {}\n--- got ---\n{out}", path.display());
}

#[test]
fn golden_spectrum_coulomb_json() {
    check_golden(
        "spectrum_coulomb.json",
        &["spectrum", "--model", "coulomb", "--m", "1", "--b", "0.5", "--n-max", "1", "--l-max", "0", "--format", "json"],
        EXIT_OK,
    );
}

#[test]
fn golden_spectrum_oscillator_csv() {
    check_golden(
        "spectrum_oscillator.csv",
        &["spectrum", "--model", "oscillator", "--omega", "2", "--n-max", "2", "--l-max", "1", "--format", "csv"],
        EXIT_OK,
    );
}

#[test]
fn golden_spectrum_morse_json() {
    check_golden("spectrum_morse.json", &["spectrum", "--model", "morse", "--n-max", "2"], EXIT_OK);
}

#[test]
fn golden_verify_coulomb_json() {
    check_golden("verify_coulomb.json", &["verify", "--model", "coulomb"], EXIT_OK);
}

#[test]
fn golden_verify_rosen_morse_csv() {
    check_golden("verify_rosen_morse.csv", &["verify", "--model", "rosen-morse", "--format", "csv"], EXIT_OK);
}

#[test]
fn golden_export_table() {
    check_golden("export_table.json", &["export-table"], EXIT_OK);
}

#[test]
fn spectrum_examples() {
    let (code, out, _) = invoke(&["spectrum", "--model", "coulomb", "--m", "1", "--b", "0.5", "--n-max", "1"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["eps"].as_f64().unwrap(), 0.6);
    assert!((rows[1]["eps"].as_f64().unwrap() - 3.75 / 4.25).abs() < 1e-15);

    let (code, out, _) = invoke(&["spectrum", "--model", "oscillator", "--m", "1", "--omega", "2", "--n-max", "0", "--l-max", "0"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["rows"][0]["eps"].as_f64().unwrap(), 2.0);
}

fn g_column(csv: &str) -> Vec<f64> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "G").unwrap();
    lines.map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn wavefunction_examples() {
    let (code, out, _) = invoke(&["wavefunction", "--model", "oscillator", "--n", "0", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let g = g_column(&out);
    assert!(g[1..g.len() - 1].iter().all(|&v| v > 0.0));

    let (code, out, _) = invoke(&["wavefunction", "--model", "coulomb", "--n", "1", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let g = g_column(&out);
    assert_eq!(solvable_dirac::models::count_nodes(&g), 1);
    let changes = g.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    assert_eq!(changes, 1);
}

#[test]
fn morse_wavefunction_reports_missing_lower_component() {
    let (code, out, _) = invoke(&["wavefunction", "--model", "morse", "--points", "400"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(doc["rows"].as_array().unwrap().iter().all(|r| r["F"].is_null()));
    let meta = doc["meta"].to_string();
    assert!(meta.contains("unavailable"), "{meta}");
}

#[test]
fn malformed_value_is_a_usage_error() {
    let (code, _, err) = invoke(&["spectrum", "--model", "coulomb", "--b", "abc"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Usage"), "{err}");
    let (code, _, err) = invoke(&["spectrum", "--model", "coulomb", "--b", "-0.5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("must be positive"), "{err}");
}

#[test]
fn inapplicable_or_conflicting_flags_are_rejected() {
    assert_eq!(invoke(&["spectrum", "--model", "coulomb", "--omega", "1"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["spectrum", "--model", "oscillator", "--a", "1", "--omega", "1"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["spectrum", "--model", "morse", "--A", "1", "--C", "2"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["spectrum"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["spectrum", "--model", "morse", "--l-max", "1"]).0, EXIT_USAGE);
}

#[test]
fn missing_bound_state_exit_code() {
    let (code, _, err) = invoke(&["spectrum", "--model", "coulomb", "--e2", "3"]);
    assert_eq!(code, EXIT_NO_BOUND_STATE, "{err}");
}

#[test]
fn corrupted_tolerance_fails_verification() {
    let (code, out, _) = invoke(&["verify", "--model", "coulomb", "--oracle-tol", "1e-15"]);
    assert_eq!(code, EXIT_VERIFY_FAILED);
    assert!(out.contains("oracle-agreement (n=0, l=0)"), "{out}");
}

#[test]
fn verify_reports_mapping_validation() {
    let (code, out, _) = invoke(&["verify", "--model", "rosen-morse"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let section = &doc["meta"]["mapping_validation"];
    assert_eq!(section["status"], "validated", "{section}");
    assert!(section["max_relative_deviation"].as_f64().unwrap() <= 1e-4);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"model": "coulomb", "b": 0.2, "n_max": 0, "format": "csv"}"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    let (code, from_file, _) = invoke(&["spectrum", "--config", cfg]);
    assert_eq!(code, EXIT_OK);
    assert!(from_file.lines().any(|l| l.starts_with("0,0,")), "{from_file}");
    let (_, direct, _) = invoke(&["spectrum", "--model", "coulomb", "--b", "0.2", "--n-max", "0", "--format", "csv"]);
    assert_eq!(from_file, direct);

    let (code, overridden, _) = invoke(&["spectrum", "--config", cfg, "--b", "0.5"]);
    assert_eq!(code, EXIT_OK);
    assert!(overridden.lines().any(|l| l.starts_with("0,0,-1,0.6,")), "{overridden}");
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"model": "coulomb", "colour": 1}"#).unwrap();
    assert_eq!(invoke(&["spectrum", "--config", cfg.to_str().unwrap()]).0, EXIT_USAGE);
    let missing = dir.path().join("missing.json");
    assert_eq!(invoke(&["spectrum", "--config", missing.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.csv");
    let args = ["spectrum", "--model", "eckart", "--n-max", "2", "--format", "csv"];
    let (_, stdout, _) = invoke(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let (code, rest, _) = invoke(&with_file);
    assert_eq!(code, EXIT_OK);
    assert!(rest.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["spectrum", "--model", "rosen-morse", "--n-max", "2"][..],
        &["verify", "--model", "oscillator", "--omega", "2", "--format", "csv"][..],
    ] {
        let first = invoke(args);
        let second = invoke(args);
        assert_eq!(first, second);
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_solvable-dirac");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    let ok = status(&["spectrum", "--model", "coulomb"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("\"rows\""));
    assert_eq!(status(&["spectrum", "--model", "coulomb", "--b", "x"]).status.code(), Some(2));
    assert_eq!(status(&["spectrum", "--model", "coulomb", "--e2", "3"]).status.code(), Some(3));
    assert_eq!(status(&["--help"]).status.code(), Some(0));
}
