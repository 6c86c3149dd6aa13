//! End-to-end tests of the `fracsemi` binary: flag parsing, exit codes,
//! output formats, determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fracsemi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracsemi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn kernel_closed_prints_poisson_value() {
    let out = fracsemi(&["kernel", "--s", "0.5", "--N", "1", "--t", "1", "--r", "0", "--method", "closed"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!((value - std::f64::consts::FRAC_1_PI).abs() <= 1e-12);
}

#[test]
fn kernel_sweep_emits_csv_schema() {
    let out = fracsemi(&[
        "kernel", "--s", "0.5", "--t", "1,2", "--r", "0,1", "--method", "closed",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,r,s,N,method,value");
    assert_eq!(lines.clone().count(), 4);
    assert!(!text.contains('\r'));
    // numeric fields carry 17 significant digits and parse back exactly
    let first = lines.next().unwrap();
    let value_field = first.split(',').nth(5).unwrap();
    let digits = value_field
        .split('e')
        .next()
        .unwrap()
        .chars()
        .filter(|c| c.is_ascii_digit())
        .count();
    assert_eq!(digits, 17);
    let value: f64 = value_field.parse().unwrap();
    assert!((value - std::f64::consts::FRAC_1_PI).abs() <= 1e-15);
}

#[test]
fn kernel_rejects_out_of_range_exponent() {
    let out = fracsemi(&["kernel", "--s", "1.5", "--t", "1", "--r", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--s"));
}

#[test]
fn kernel_rejects_closed_method_away_from_half() {
    let out = fracsemi(&["kernel", "--s", "0.3", "--t", "1", "--r", "0", "--method", "closed"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--method"));
}

#[test]
fn kernel_surfaces_quadrature_budget_as_failure() {
    // an absurd oscillation frequency exceeds the evaluation budget
    let out = fracsemi(&[
        "kernel", "--s", "0.5", "--t", "1", "--r", "1e9", "--method", "fourier",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("did not converge"), "{}", stderr(&out));
}

#[test]
fn solve_rejects_malformed_exponent() {
    let out = fracsemi(&[
        "solve", "--a", "-1", "--b", "1", "--n", "16", "--s", "1.5", "--lambda", "0", "--f", "one",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--s"));
}

#[test]
fn solve_emits_grid_and_solution() {
    let dir = tempfile::tempdir().unwrap();
    let path: PathBuf = dir.path().join("u.csv");
    let out = fracsemi(&[
        "solve", "--a", "-1", "--b", "1", "--n", "64", "--s", "0.5", "--lambda", "0",
        "--f", "one", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,u");
    assert_eq!(lines.len(), 65);
    // torsion solution stays inside [0, 1] and is largest near the center
    let mid: f64 = lines[33].split(',').nth(1).unwrap().parse().unwrap();
    let edge: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!(mid > edge && mid <= 1.0 && edge >= 0.0);
}

#[test]
fn spectrum_lists_ascending_eigenvalues() {
    let out = fracsemi(&["spectrum", "--omega", "-1,1", "--n", "64", "--s", "0.5", "--k", "5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 5);
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    assert!((values[0] - 1.1578).abs() / 1.1578 < 0.05);
}

#[test]
fn convergence_table_has_monotone_gaps() {
    let out = fracsemi(&["convergence", "--s-list", "0.9,0.99,0.999"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let gaps: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(gaps.len(), 3);
    assert!(gaps[2] < gaps[1] && gaps[1] < gaps[0]);
}

#[test]
fn verify_all_passes_and_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("r1.json");
    let p2 = dir.path().join("r2.json");
    let base = [
        "verify", "all", "--omega", "-1,1", "--n", "128", "--s", "0.5",
        "--t-list", "0.1,1", "--samples", "25", "--seed", "42",
    ];
    for p in [&p1, &p2] {
        let mut args: Vec<&str> = base.to_vec();
        args.push("--out");
        args.push(p.to_str().unwrap());
        let out = fracsemi(&args);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let b1 = std::fs::read(&p1).unwrap();
    let b2 = std::fs::read(&p2).unwrap();
    assert_eq!(b1, b2, "same config must give byte-identical reports");

    let report: serde_json::Value = serde_json::from_slice(&b1).unwrap();
    assert_eq!(report["config"]["seed"], 42);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    for c in checks {
        assert_eq!(c["pass"], true, "{} failed", c["name"]);
        assert!(c["fitted_constants"].is_object());
        assert!(c["max_violation"].is_number());
        assert!(c["tolerance"].is_number());
        assert!(c["samples"].is_number());
        assert!(c["seed"].is_number());
    }
}

#[test]
fn verify_single_check_by_name() {
    let out = fracsemi(&[
        "verify", "extension_constants", "--omega", "-1,1", "--n", "16", "--s", "0.5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "extension_constants");
}

#[test]
fn verify_unknown_check_is_usage_error() {
    let out = fracsemi(&["verify", "no_such_check", "--n", "16"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no_such_check"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"s": 0.5, "t": "1", "r": "0", "method": "closed"}"#,
    )
    .unwrap();
    let out = fracsemi(&["kernel", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v1: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v1 - std::f64::consts::FRAC_1_PI).abs() <= 1e-12);

    // the flag overrides the file value
    let out = fracsemi(&["kernel", "--config", cfg.to_str().unwrap(), "--t", "2"]);
    let v2: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v2 - 0.5 * std::f64::consts::FRAC_1_PI).abs() <= 1e-12);
}

#[test]
fn config_file_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"sigma": 1.0}"#).unwrap();
    let out = fracsemi(&["kernel", "--config", cfg.to_str().unwrap(), "--s", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--config"));
}

#[test]
fn thread_count_does_not_change_the_report() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_fracsemi"))
            .env("FRACSEMI_THREADS", threads)
            .args([
                "verify", "all", "--omega", "-1,1", "--n", "64", "--s", "0.5",
                "--t-list", "0.5", "--samples", "10",
            ])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        stdout(&out)
    };
    assert_eq!(run("1"), run("4"));
}
