use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_profdecomp"));
    c.env_remove("PROFDECOMP_OUT");
    c
}

fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().unwrap()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

const FAMILY: &str = r#"{"n_list": [6, 8], "triples": [{"alpha_expr": "n", "profile": "bump"}],
    "remainder": {"epsilon": 0.02, "k0": 0, "k1": 4, "seed": 1}}"#;

#[test]
fn constants_for_the_plane() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["constants", "--out", "c"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&tmp.path().join("c"));
    let c = &r["outputs"]["constants"];
    assert!((c["beta"].as_f64().unwrap() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!((c["omega"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!(c["c_synth"].as_f64().unwrap() > 0.0 && c["c_moser"].as_f64().unwrap() > 0.0);
    assert!(r["convention"].as_str().unwrap().starts_with("plancherel=normalized"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("fam.json"), FAMILY).unwrap();
    std::fs::write(tmp.path().join("cfg.json"), r#"{"manifest": "fam.json"}"#).unwrap();
    for d in ["a", "b"] {
        let out = run(&["synth", "--config", "cfg.json", "--out", d], tmp.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["report.json", "truth.csv", "members.csv"] {
        let a = std::fs::read_to_string(tmp.path().join("a").join(f)).unwrap();
        let b = std::fs::read_to_string(tmp.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs");
    }
    // a different seed changes the remainder and the hash
    run(&["synth", "--config", "cfg.json", "--out", "c", "--seed", "2"], tmp.path());
    let (a, c) = (report(&tmp.path().join("a")), report(&tmp.path().join("c")));
    assert_ne!(a["run_hash"], c["run_hash"]);
    assert_ne!(a["config_hash"], c["config_hash"]);
}

#[test]
fn overwrite_needs_force() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run(&["constants", "--out", "o"], tmp.path()).status.code(), Some(0));
    let again = run(&["constants", "--out", "o"], tmp.path());
    assert_eq!(again.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&again.stderr).contains("--force"));
    assert_eq!(run(&["constants", "--out", "o", "--force"], tmp.path()).status.code(), Some(0));
}

#[test]
fn config_errors_exit_one_and_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("neg.json"), r#"{"orlicz_tol": -1e-6}"#).unwrap();
    let out = run(&["constants", "--config", "neg.json", "--out", "x"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("orlicz_tol"));
    std::fs::write(tmp.path().join("cmd.json"), r#"{"command": "plot"}"#).unwrap();
    let out = run(&["constants", "--config", "cmd.json", "--out", "x"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("decompose") && err.contains("verify"), "{err}");
    let out = run(&["verify", "nope", "--out", "x"], tmp.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("moser-limit"));
}

#[test]
fn non_convergence_exits_two_with_partial_report() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("nc.json"),
        r#"{"manifest": {"n_list": [6], "triples": [{"alpha_expr": "n", "profile": "bump"}]},
            "decompose": {"quad": {"max_panels": 2}}}"#,
    )
    .unwrap();
    let out = run(&["synth", "--config", "nc.json", "--out", "nc"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let r = report(&tmp.path().join("nc"));
    assert_eq!(r["status"], "non-convergence");
    assert!(r["error"].as_str().unwrap().contains("did not converge"));
}

#[test]
fn decompose_writes_stable_file_set() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("fam.json"), FAMILY).unwrap();
    std::fs::write(tmp.path().join("cfg.json"), r#"{"manifest": "fam.json", "decompose": {"scales": {"r_w": 8}}}"#)
        .unwrap();
    let out = run(&["decompose", "--config", "cfg.json", "--out", "d"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let d = tmp.path().join("d");
    let r = report(&d);
    let hash = r["config_hash"].as_str().unwrap();
    for f in ["scales.csv", "ledger.csv", "stages.csv"] {
        let text = std::fs::read_to_string(d.join(f)).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# plancherel=normalized"));
        assert_eq!(lines.next().unwrap(), format!("# config_hash={hash}"));
    }
    let dec = &r["outputs"]["decomposition"];
    assert_eq!(dec["scales"].as_array().unwrap().len(), 1);
    assert!(dec["ledger"][1]["relative"].as_f64().unwrap() < 0.05);
}

#[test]
fn moser_limit_preset_and_env_root() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["verify", "moser-limit"])
        .env("PROFDECOMP_OUT", tmp.path().join("root"))
        .current_dir(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dirs: Vec<_> = std::fs::read_dir(tmp.path().join("root")).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(dirs.len(), 1);
    assert!(dirs[0].file_name().unwrap().to_str().unwrap().starts_with("verify-moser-limit-"));
    let csv = std::fs::read_to_string(dirs[0].join("moser_limit.csv")).unwrap();
    let norms: Vec<f64> = csv
        .lines()
        .skip(3)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let limit = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    assert_eq!(norms.len(), 4);
    assert!(norms.windows(2).all(|w| (w[1] - limit).abs() < (w[0] - limit).abs()));
    assert!((norms[3] - limit).abs() / limit < 0.1);
}
