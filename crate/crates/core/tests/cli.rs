use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dyncert(args: &[&str], cache_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dyncert"));
    cmd.args(args).env_remove("DYNCERT_CACHE_DIR");
    if let Some(dir) = cache_env {
        cmd.env("DYNCERT_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).expect("valid JSON")
}

fn error_kind(out: &Output) -> String {
    let v = json(&out.stderr);
    assert!(v["error"]["message"].is_string());
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn help_exits_zero() {
    let out = dyncert(&["--help"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("make-figures"));
}

#[test]
fn usage_errors_exit_two_with_json() {
    let out = dyncert(&["score", "--no-such-flag"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "usage");

    let out = dyncert(&["bounds", "--model", "kerr"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "invalid_parameter");

    let out = dyncert(&["score", "--model", "harmonic", "--tau", "2"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "unsupported_tau");

    let out = dyncert(
        &[
            "wigner", "--model", "pendulum", "--alpha", "-0.02", "--nmax", "6",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "domain");
}

#[test]
fn numerical_failures_map_to_three() {
    use dyncert::cli::exit_code;
    use dyncert::Error;
    let e = Error::Convergence {
        what: "test".into(),
        residual: 1.0,
    };
    assert_eq!(exit_code(&e), 3);
    assert_eq!(exit_code(&Error::InvalidParameter("x".into())), 2);
}

#[test]
fn score_reports_six_level_optimum() {
    let out = dyncert(
        &["score", "--model", "harmonic", "--nmax", "6", "--tau", "1"],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    assert!((v["p3_max"].as_f64().unwrap() - 0.6866).abs() < 1e-3);
    assert_eq!(v["indices"].as_array().unwrap().len(), 7);
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# kerr run\nmodel = kerr\nalpha = 0.01\ntau = 1\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = json(&dyncert(&["--config", cfg, "score"], None).stdout);
    assert_eq!(from_file["alpha"].as_f64(), Some(0.01));

    let flagged = json(&dyncert(&["--config", cfg, "score", "--alpha", "0.02"], None).stdout);
    assert_eq!(flagged["alpha"].as_f64(), Some(0.02));
    assert!(flagged["p3_max"] != from_file["p3_max"]);

    let out = dyncert(&["score", "--model", "harmonic", "--nmax", "3"], None);
    assert_eq!(json(&out.stdout)["tau"].as_f64(), Some(1.0));
}

#[test]
fn cache_directory_from_env_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--cache", "score", "--model", "morse", "--lambda", "6"];
    let plain = dyncert(&args[1..], None);
    let first = dyncert(&args, Some(dir.path()));
    let cached: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(cached.len(), 1);
    let second = dyncert(&args, Some(dir.path()));
    assert_eq!(plain.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn simulate_is_reproducible_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let audit = dir.path().join("rounds.csv");
    let base = [
        "simulate", "--model", "harmonic", "--state", "psi6", "--rounds", "5000", "--seed", "9",
    ];
    let mut one = vec!["--workers", "1"];
    one.extend(base);
    let mut four = vec!["--workers", "4"];
    four.extend(base);
    four.extend(["--audit", audit.to_str().unwrap(), "--audit-rounds", "20"]);
    let a = dyncert(&one, None);
    let b = dyncert(&four, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows = std::fs::read_to_string(&audit).unwrap();
    assert_eq!(rows.lines().count(), 21);
}

#[test]
fn score_record_feeds_back_as_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let record = dir.path().join("best.json");
    let out = dyncert(
        &[
            "--out",
            record.to_str().unwrap(),
            "score",
            "--model",
            "harmonic",
            "--nmax",
            "6",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let spec = format!("file:{}", record.display());
    let out = dyncert(
        &[
            "simulate", "--model", "harmonic", "--state", &spec, "--rounds", "20000", "--seed", "1",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out.stdout);
    let (p, se) = (v["p3_hat"].as_f64().unwrap(), v["stderr"].as_f64().unwrap());
    assert!((p - 0.6866).abs() < 5.0 * se, "{p} ± {se}");
}

#[test]
fn scan_and_bounds_outputs() {
    let out = dyncert(
        &[
            "score",
            "--model",
            "well",
            "--scan",
            "--tau-min",
            "0.1",
            "--tau-max",
            "0.5",
            "--points",
            "4",
        ],
        None,
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "tau,p3_max,levels,error");
    assert_eq!(lines.len(), 6);

    let v = json(
        &dyncert(
            &[
                "bounds", "--model", "morse", "--lambda", "10", "--points", "11",
            ],
            None,
        )
        .stdout,
    );
    assert!((v["max_dt_plus"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(
        v["samples"].as_array().unwrap().last().unwrap()["dt_minus"],
        "inf"
    );
}

#[test]
fn wigner_and_figures_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w");
    let out = dyncert(
        &[
            "--out",
            w.to_str().unwrap(),
            "wigner",
            "--model",
            "harmonic",
            "--q-points",
            "41",
            "--p-points",
            "41",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    for f in ["wigner.csv", "wigner.json", "marginals.csv"] {
        assert!(w.join(f).is_file(), "{f}");
    }
    let v = json(&out.stdout);
    assert!(v["min_value"].as_f64().unwrap() < 0.0);

    let figs = dir.path().join("figs");
    let out = dyncert(
        &[
            "--out",
            figs.to_str().unwrap(),
            "make-figures",
            "--nmax",
            "40",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let listed = json(&out.stdout)["files"].as_array().unwrap().len();
    assert_eq!(listed, 16);
    assert!(figs.join("kerr_scenarios_n4.csv").is_file());
}
