use std::fs;
use std::process::{Command, Output};

use nkpc::cli::load_config;
use nkpc::Error;
use serde_json::Value;

fn nkpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nkpc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const BASELINE: &str = r#"{"beta": 0.99, "kappa": 0.1275, "rho": 0.8, "sigma_eps": 1.0, "epsilon": 6.0, "q": 1.0, "mode": "ramsey"}"#;

#[test]
fn table2_exits_zero() {
    let o = nkpc(&["table2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for value in ["0.43", "-0.13", "0.65", "1.03", "4.51", "-6.00", "1.78"] {
        assert!(out.contains(value), "missing {value} in\n{out}");
    }
    assert!(!out.contains("FAIL"));
}

#[test]
fn baseline_config_file_is_valid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("baseline.json");
    fs::write(&path, BASELINE).unwrap();
    let cfg = load_config(&path).unwrap();
    assert_eq!(cfg.params, nkpc::ModelParams::table2());
    assert_eq!(cfg.horizon, 40);
}

#[test]
fn invalid_config_lists_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"beta": 1.2, "epsilon": 1.0, "mode": "ramsey"}"#).unwrap();
    match load_config(&path) {
        Err(Error::InvalidParams(v)) => {
            assert!(v.iter().any(|m| m.contains("beta must lie in (0,1)")));
            assert!(v.iter().any(|m| m.contains("epsilon must exceed 1")));
        }
        other => panic!("{other:?}"),
    }
    let o = nkpc(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error[invalid_params]: "));
    assert!(err.contains("beta") && err.contains("epsilon"));
}

#[test]
fn missing_config_and_bad_json_exit_one() {
    let o = nkpc(&["solve", "--config", "/nonexistent/config.json"]);
    assert_eq!(o.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{ not json").unwrap();
    let o = nkpc(&["irf", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn zero_horizon_exits_one() {
    let o = nkpc(&["irf", "--mode", "ramsey", "--horizon", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("horizon"));
}

#[test]
fn solve_record_feeds_irf() {
    let dir = tempfile::tempdir().unwrap();
    for mode in ["ramsey", "discretion"] {
        let o = nkpc(&["solve", "--mode", mode, "--horizon", "12"]);
        assert_eq!(o.status.code(), Some(0));
        let record = stdout(&o);
        let v: Value = serde_json::from_str(&record).unwrap();
        assert!(v["lambda"].is_number());
        let path = dir.path().join(format!("{mode}.json"));
        fs::write(&path, &record).unwrap();
        let o = nkpc(&["irf", "--config", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let csv = stdout(&o);
        assert_eq!(csv.lines().count(), 13);
        assert!(csv.starts_with("t,pi,x,z\n"));
    }

    // a predetermined record re-ingests with its anchored x0
    let o = nkpc(&[
        "solve",
        "--mode",
        "predetermined",
        "--fpi",
        "4.51",
        "--fz",
        "-6.83",
        "--x0",
        "-3.9",
    ]);
    let path = dir.path().join("pre.json");
    fs::write(&path, stdout(&o)).unwrap();
    let cfg = load_config(&path).unwrap();
    assert_eq!(cfg.x0, Some(-3.9));
    assert_eq!(cfg.rule.unwrap().f_pi, 4.51);
}

#[test]
fn seeded_irf_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let o = nkpc(&[
            "irf",
            "--mode",
            "ramsey",
            "--seed",
            "7",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), path.to_str().unwrap());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let expected = stdout(&nkpc(&["irf", "--mode", "ramsey"]));
    assert_ne!(fs::read_to_string(&a).unwrap(), expected);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    fs::write(&path, BASELINE).unwrap();
    let o = nkpc(&[
        "solve",
        "--config",
        path.to_str().unwrap(),
        "--mode",
        "discretion",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mode"], "discretion");
    assert_eq!(v["fpi"], -6.0);
    assert!((v["g"].as_f64().unwrap() - 1.03).abs() < 0.005);
}

#[test]
fn stress_and_sweep_emit_csv() {
    let o = nkpc(&[
        "stress",
        "--mode",
        "discretion",
        "--radius",
        "0.01",
        "--grid-steps",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("dbeta,dkappa,drho,diverged,divergence_horizon\n"));
    assert_eq!(csv.lines().count(), 28);

    let o = nkpc(&[
        "sweep", "--mode", "ramsey", "--axis", "q", "--from", "0.1", "--to", "1", "--steps", "10",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o)
        .starts_with("q,eigenvalue,f_pi,classification,bifurcation,in_reduced_form_set\n"));

    let o = nkpc(&[
        "sweep", "--mode", "ramsey", "--axis", "fpi", "--from", "0", "--to", "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classify_forward_rule() {
    let o = nkpc(&["classify", "--mode", "forward", "--fpi", "-6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["feedback"], "positive_feedback");
    assert_eq!(v["determinacy"], "determinate");
    assert_eq!(v["convention"], "forward_looking");
}
