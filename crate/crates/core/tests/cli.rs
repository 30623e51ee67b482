//! End-to-end runs of the command-line front end.

use pdmdual_core::cli::{run, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use pdmdual_core::models::{CoulombLike, NonlinearOscillator, QuantumNumbers};
use serde_json::Value;
use std::process::Command;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("pdmdual").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, err) = invoke(&full);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    (header, lines.map(|l| l.split(',').map(str::to_string).collect()).collect())
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn spectrum_values_come_from_the_models() {
    let (code, out, _) = invoke(&["spectrum", "--model", "nlo", "--d", "2", "--lambda", "0.1", "--beta", "1", "--l", "0"]);
    assert_eq!(code, EXIT_OK);
    let (header, rows) = csv_rows(&out);
    let model = NonlinearOscillator::new(2, 0.1, 1.0).unwrap();
    let (n_r, e) = (column(&header, "n_r"), column(&header, "energy"));
    assert!(!rows.is_empty());
    for row in rows {
        let state = QuantumNumbers::integral(row[n_r].parse().unwrap(), 0);
        assert_eq!(row[e].parse::<f64>().unwrap(), model.energy(&state));
    }
}

#[test]
fn csv_reals_carry_seventeen_digits() {
    let (_, out, _) = invoke(&["spectrum", "--model", "coulomb", "--D", "3", "--Q", "1", "--L", "0", "--n-max", "2"]);
    let (header, rows) = csv_rows(&out);
    let e = column(&header, "energy");
    for row in rows {
        let mantissa = row[e].split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{}", row[e]);
    }
}

#[test]
fn bound_states_match_the_predicate() {
    let doc = json(&["bound-states", "--model", "clike", "--D", "3", "--lambda", "0.2", "--Q", "1"]);
    let model = CoulombLike::new(3.0, 0.2, 1.0).unwrap();
    let expected = model.bound_states().unwrap();
    assert_eq!(doc["count"].as_u64().unwrap() as usize, expected.len());
    assert_eq!(doc["rows"].as_array().unwrap().len(), expected.len());
}

#[test]
fn duality_example() {
    let doc = json(&["duality", "--model", "nlo", "--d", "4", "--l", "0", "--lambda", "-0.1", "--beta", "1"]);
    assert_eq!(doc["schema"], 1);
    let row = &doc["rows"][0];
    assert_eq!(row["D"].as_f64().unwrap(), 3.0);
    assert_eq!(row["L"].as_f64().unwrap(), 0.0);
    assert!((row["Q"].as_f64().unwrap() - 1.0).abs() < 1e-14);
    assert!((row["energy"].as_f64().unwrap() + 0.1625).abs() < 1e-14);
    assert!(row["deviation"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn oscillator_ground_state_samples() {
    let (code, out, _) =
        invoke(&["wavefunction", "--model", "osc", "--d", "3", "--omega", "1.3", "--l", "0", "--x-max", "4", "--points", "41"]);
    assert_eq!(code, EXIT_OK);
    let (header, rows) = csv_rows(&out);
    let (x, psi) = (column(&header, "x"), column(&header, "psi_weighted"));
    assert_eq!(rows.len(), 41);
    for row in rows {
        let r: f64 = row[x].parse().unwrap();
        let v: f64 = row[psi].parse().unwrap();
        assert!((v - (-0.65 * r * r).exp()).abs() <= 1e-14, "r = {r}");
    }
}

#[test]
fn flat_function_vanishes_at_the_origin() {
    let (_, out, _) =
        invoke(&["wavefunction", "--model", "nlo", "--d", "3", "--lambda", "0.1", "--beta", "1", "--l", "0", "--points", "11"]);
    let (header, rows) = csv_rows(&out);
    let first = &rows[0];
    assert_eq!(first[column(&header, "x")].parse::<f64>().unwrap(), 0.0);
    assert!(first[column(&header, "psi_weighted")].parse::<f64>().unwrap().is_finite());
    assert_eq!(first[column(&header, "psi_tilde")].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn verify_passes_and_fails_honestly() {
    let base = ["verify", "--model", "pdm-coulomb", "--ordering", "mm", "--D", "3", "--lambda", "-0.1", "--Q", "1"];
    let (code, out, _) = invoke(&base);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().skip(1).all(|l| l.ends_with("true")));
    let mut coarse = base.to_vec();
    coarse.extend(["--grids", "16,32,64"]);
    let (code, _, err) = invoke(&coarse);
    assert_eq!(code, EXIT_VERIFY);
    assert!(!err.is_empty());
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["spectrum", "--model", "nlo", "--d", "2", "--lambda", "0.1", "--beta", "1", "--Q", "1"][..],
        &["spectrum", "--model", "nlo", "--d", "2", "--lambda", "0.1"][..],
        &["spectrum", "--model", "nlo", "--d", "2", "--lambda", "0.1", "--beta", "-1"][..],
        &["spectrum", "--model", "coulomb", "--D", "3", "--Q", "1", "--ordering", "bd"][..],
        &["spectrum", "--bogus"][..],
        &["wavefunction", "--model", "nlo", "--d", "2", "--lambda", "-0.1", "--beta", "1", "--x-max", "5"][..],
    ] {
        let (code, _, err) = invoke(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let out = dir.path().join("spectrum.csv");
    std::fs::write(&config, r#"{"command": "spectrum", "model": "clike", "D": 3, "lambda": -0.1, "Q": 1, "L": 0}"#).unwrap();
    let (code, stdout, err) =
        invoke(&["spectrum", "--config", config.to_str().unwrap(), "--lambda", "0.2", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(stdout.is_empty());
    let (header, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    let model = CoulombLike::new(3.0, 0.2, 1.0).unwrap();
    let e = column(&header, "energy");
    assert_eq!(rows[0][e].parse::<f64>().unwrap(), model.energy(&QuantumNumbers::integral(0, 0)));

    std::fs::write(&config, r#"{"command": "spectrum", "model": "clike", "D": 3, "lambda": -0.1, "Q": 1, "colour": 1}"#)
        .unwrap();
    let (code, _, _) = invoke(&["spectrum", "--config", config.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    std::fs::write(&config, r#"{"command": "verify", "model": "clike", "D": 3, "lambda": -0.1, "Q": 1}"#).unwrap();
    let (code, _, _) = invoke(&["spectrum", "--config", config.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn binary_output_is_reproducible() {
    let exe = env!("CARGO_BIN_EXE_pdmdual");
    let args = ["verify", "--model", "nlo", "--d", "2", "--lambda", "0.2", "--beta", "1", "--l", "1", "--k", "2", "--format", "json"];
    let a = Command::new(exe).args(args).output().unwrap();
    let b = Command::new(exe).args(args).output().unwrap();
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(exe).args(["spectrum", "--model", "nlo"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
