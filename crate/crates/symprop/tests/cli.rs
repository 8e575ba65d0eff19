use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use symprop::formats::RISK_COLUMNS;

fn symprop(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symprop"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("SYMPROP_OUT_DIR")
        .output()
        .unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn pml_closed_form_example() {
    let tmp = tempfile::tempdir().unwrap();
    let out = symprop(tmp.path(), &["pml", "--profile", "[0,2,0]", "--k", "2", "--exact", "--resolution", "200"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let pml = json(&tmp.path().join("pml.json"));
    let probs: Vec<f64> = serde_json::from_value(pml["distribution"].clone()).unwrap();
    assert!(probs.iter().all(|p| (p - 0.5).abs() < 1e-9), "{probs:?}");
}

#[test]
fn risk_exact_writes_versioned_rows_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = symprop(tmp.path(), &["risk", "exact", "--estimator", "identity", "--property", "entropy", "--dist", "[0.2,0.8]", "--n", "4"]);
    assert!(out.status.success());
    let csv = fs::read_to_string(tmp.path().join("risk.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), RISK_COLUMNS.join(","));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), RISK_COLUMNS.len());
    assert_eq!(row[6], "0.0");
    assert_eq!(row[9], "exact_enum");

    let jsonl = fs::read_to_string(tmp.path().join("risk.jsonl")).unwrap();
    let rec: Value = serde_json::from_str(jsonl.lines().next().unwrap()).unwrap();
    assert_eq!(rec["schema_version"], 1);
    for col in RISK_COLUMNS {
        assert!(rec.get(col).is_some(), "missing {col}");
    }

    let m = json(&tmp.path().join("manifest.json"));
    assert_eq!(m["status"], "complete");
    assert_eq!(m["command"], "risk-exact");
    assert!(m["error"].is_null());
    let names: Vec<&str> = m["artifacts"].as_array().unwrap().iter().map(|a| a["path"].as_str().unwrap()).collect();
    assert!(names.contains(&"risk.csv") && names.contains(&"risk.jsonl"));
    for a in m["artifacts"].as_array().unwrap() {
        assert_eq!(a["sha256"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn invalid_arguments_exit_with_config_code() {
    let tmp = tempfile::tempdir().unwrap();
    let out = symprop(tmp.path(), &["fano", "--delta", "1", "--p-min", "2", "--M", "3", "--mi", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "config");
    assert_eq!(json(&tmp.path().join("manifest.json"))["status"], "failed");

    let out = symprop(tmp.path(), &["pml", "--profile", "[1,2,0,0]", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = symprop(tmp.path(), &["risk", "exact", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_enumeration_exits_with_budget_code() {
    let tmp = tempfile::tempdir().unwrap();
    let dist = format!("[{}]", vec!["0.05"; 20].join(","));
    let out = symprop(tmp.path(), &["risk", "exact", "--estimator", "empirical", "--property", "entropy", "--dist", &dist, "--n", "500"]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "budget_exceeded");
    let m = json(&tmp.path().join("manifest.json"));
    assert_eq!(m["status"], "failed");
    assert_eq!(m["error"]["exit_code"], 3);
}

#[test]
fn tampered_manifest_replay_exits_with_assertion_code() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("a");
    let out = symprop(&first, &["profile", "enumerate", "--n", "4", "--k", "3"]);
    assert!(out.status.success());
    let path = first.join("manifest.json");
    let mut m = json(&path);
    m["artifacts"][0]["sha256"] = Value::String("0".repeat(64));
    fs::write(&path, serde_json::to_string_pretty(&m).unwrap()).unwrap();

    let out = symprop(&tmp.path().join("b"), &["replay", "--manifest", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stderr_json(&out)["error"], "assertion");
}

#[test]
fn edited_config_is_rejected_on_replay() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("a");
    assert!(symprop(&first, &["profile", "enumerate", "--n", "3", "--k", "2"]).status.success());
    let path = first.join("manifest.json");
    let mut m = json(&path);
    m["config"] = Value::String(m["config"].as_str().unwrap().replace("n = 3", "n = 4"));
    fs::write(&path, serde_json::to_string_pretty(&m).unwrap()).unwrap();
    let out = symprop(&tmp.path().join("b"), &["replay", "--manifest", path.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn printed_config_runs_to_the_same_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["risk", "mc", "--estimator", "empirical", "--property", "power_sum(2)", "--dist", "[0.3,0.7]", "--n", "20", "--reps", "200", "--seed", "3"];
    let mut printed = vec!["--print-config"];
    printed.extend_from_slice(&args);
    let out = symprop(tmp.path(), &printed);
    assert!(out.status.success());
    let config = tmp.path().join("exp.toml");
    fs::write(&config, &out.stdout).unwrap();
    assert!(!tmp.path().join("manifest.json").exists());

    let direct = tmp.path().join("direct");
    let via_file = tmp.path().join("file");
    assert!(symprop(&direct, &args).status.success());
    assert!(symprop(&via_file, &["run", "--config", config.to_str().unwrap()]).status.success());
    assert_eq!(fs::read(direct.join("risk.csv")).unwrap(), fs::read(via_file.join("risk.csv")).unwrap());
    let m = json(&via_file.join("manifest.json"));
    assert_eq!(m["config"].as_str().unwrap(), fs::read_to_string(&config).unwrap());
}

#[test]
fn unknown_config_keys_and_versions_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let bad_key = tmp.path().join("bad_key.toml");
    fs::write(&bad_key, "schema_version = 1\nseed = 0\n[experiment]\ncommand = \"profile-enumerate\"\nn = 3\nk = 2\nextra = 1\n").unwrap();
    let bad_version = tmp.path().join("bad_version.toml");
    fs::write(&bad_version, "schema_version = 99\nseed = 0\n[experiment]\ncommand = \"profile-enumerate\"\nn = 3\nk = 2\n").unwrap();
    for cfg in [bad_key, bad_version] {
        let out = symprop(&tmp.path().join("out"), &["run", "--config", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2));
    }
}

#[test]
fn fano_verify_on_constant_estimator_is_satisfied() {
    let tmp = tempfile::tempdir().unwrap();
    let out = symprop(tmp.path(), &["fano", "--verify", "--n", "4", "--k", "4", "--M", "3", "--estimator", "constant-p0"]);
    assert!(out.status.success());
    let lemma = json(&tmp.path().join("lemma.json"));
    for key in ["p_min", "mi", "delta", "lhs_risk", "fano_bound", "satisfied"] {
        assert!(lemma.get(key).is_some(), "missing {key}");
    }
    assert_eq!(lemma["satisfied"], true);
    assert!(lemma["lhs_risk"].as_f64().unwrap() >= lemma["fano_bound"].as_f64().unwrap());
}

#[test]
fn packing_verification_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = symprop(tmp.path(), &["packing", "--k", "6", "--n", "1000", "--c", "0.1", "--trials", "2000"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let packing = json(&tmp.path().join("packing.json"));
    assert_eq!(packing["k"], 6);
    assert_eq!(packing["codewords"].as_array().unwrap().len(), 8);
    assert!(tmp.path().join("verification.json").exists());
}

#[test]
fn sample_and_extract_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let s = tmp.path().join("s");
    assert!(symprop(&s, &["sample", "--dist", "[0.1,0.2,0.7]", "--n", "50", "--seed", "4"]).status.success());
    let csv = fs::read_to_string(s.join("samples.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "symbol");
    assert_eq!(csv.lines().count(), 51);
    assert!(csv.lines().skip(1).all(|l| matches!(l, "1" | "2" | "3")), "{csv}");

    let p = tmp.path().join("p");
    let samples = s.join("samples.csv");
    assert!(symprop(&p, &["profile", "extract", "--samples", samples.to_str().unwrap(), "--k", "3"]).status.success());
    let profile = json(&p.join("profile.json"));
    assert_eq!(profile["n"], 50);
    let counts: Vec<u64> = serde_json::from_value(profile["counts"].clone()).unwrap();
    assert_eq!(counts.iter().sum::<u64>(), 3);
}
