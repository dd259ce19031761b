use std::process::{Command, Output};

use serde_json::Value;

fn mhr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn stripped(out: &Output) -> Value {
    let mut v = report(out);
    mhr_core::run::strip_timing(&mut v);
    v
}

#[test]
fn verify_passes_with_exit_zero() {
    let out = mhr(&["verify", "--n", "2..3", "--trials", "2", "--seed", "7"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    assert_eq!(r["schema_version"], "mhr-report/1");
    assert_eq!(r["command"], "verify");
    assert_eq!(r["summary"]["failed"], 0);
    assert!(r["summary"]["total"].as_u64().unwrap() > 0);
}

#[test]
fn violation_exits_one() {
    let out = mhr(&[
        "verify",
        "--n",
        "2",
        "--p",
        "0",
        "--q",
        "0",
        "--trials",
        "1",
        "--sign-convention",
        "alternate",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["summary"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn invalid_inputs_exit_two() {
    assert_eq!(mhr(&["verify", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(mhr(&["verify", "--n", "nine"]).status.code(), Some(2));
    assert_eq!(mhr(&["probe-cone", "--n", "2"]).status.code(), Some(2));
    let mismatch = mhr(&[
        "mixed-volume",
        "--bodies",
        r#"[{"kind":"box","widths":[1,1]}]"#,
        "--multiplicities",
        "3",
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
    let negative = mhr(&[
        "mixed-volume",
        "--bodies",
        r#"[{"kind":"box","widths":[1,1]},{"kind":"box","widths":[1,2]}]"#,
        "--multiplicities",
        "3,-1",
    ]);
    assert_eq!(negative.status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"master_seed": 5, "n_range": {"min": 2, "max": 2}, "trial_count": 1}"#,
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let from_file = report(&mhr(&["verify", "--config", cfg]));
    assert_eq!(from_file["config"]["master_seed"], 5);
    assert_eq!(from_file["config"]["trial_count"], 1);
    let overridden = report(&mhr(&[
        "verify", "--config", cfg, "--seed", "11", "--trials", "2",
    ]));
    assert_eq!(overridden["config"]["master_seed"], 11);
    assert_eq!(overridden["config"]["trial_count"], 2);
    assert_eq!(overridden["config"]["n_range"]["max"], 2);

    std::fs::write(&path, r#"{"unknown_key": 1}"#).unwrap();
    assert_eq!(mhr(&["verify", "--config", cfg]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_identical_modulo_timing() {
    let args = ["verify", "--n", "2..3", "--trials", "2", "--seed", "99"];
    assert_eq!(stripped(&mhr(&args)), stripped(&mhr(&args)));
    let probe = [
        "probe-cone",
        "--n",
        "3",
        "--trials",
        "2",
        "--attempts",
        "5",
        "--limit-trials",
        "5",
    ];
    assert_eq!(stripped(&mhr(&probe)), stripped(&mhr(&probe)));
}

#[test]
fn mixed_volume_query_reports_value() {
    let out = mhr(&[
        "mixed-volume",
        "--n",
        "2",
        "--trials",
        "2",
        "--bodies",
        r#"[{"kind":"box","widths":[1,1]},{"kind":"box","widths":[1,1]}]"#,
        "--multiplicities",
        "1,1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("mixed-volume"));
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectra.csv");
    let out = mhr(&[
        "verify",
        "--n",
        "2",
        "--trials",
        "1",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.contains(','));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    let width = header.split(',').count();
    assert!(rows.iter().all(|r| r.split(',').count() == width));
}

#[test]
fn decompose_prints_components() {
    let out = mhr(&[
        "decompose",
        "--n",
        "3",
        "--p",
        "1",
        "--q",
        "1",
        "--seed",
        "3",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(report(&out)["command"], "decompose");
}
