use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use ihomog::{corpus, InstanceFile};

fn ihomog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ihomog")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

fn write_corpus(dir: &Path, name: &str) -> String {
    let p = dir.join(format!("{name}.json"));
    fs::write(&p, corpus::source(name).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_flat_passes() {
    let dir = tempfile::tempdir().unwrap();
    let flat = write_corpus(dir.path(), "flat_e2");
    let o = ihomog(&["check", &flat]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["verdict"], "pass");
    let o = ihomog(&["check", "--input", &flat, "--generators"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout_json(&o)["checks"].as_array().unwrap().iter().any(|c| c["name"] == "group_invariance"));
}

#[test]
fn check_corrupted_sphere_names_invariance() {
    let o = ihomog(&["check", "corpus:corrupted_sphere_s2"]);
    assert_eq!(o.status.code(), Some(1));
    let rep = stdout_json(&o);
    assert_eq!(rep["verdict"], "fail");
    let failed: Vec<&Value> = rep["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], "inf_invariance_R");
}

#[test]
fn build_sphere_is_so3() {
    let o = ihomog(&["build", "-i", "corpus:sphere_s2"]);
    assert_eq!(o.status.code(), Some(0));
    let rep = stdout_json(&o);
    assert_eq!(rep["killing_inertia"], serde_json::json!([0, 3, 0]));
    assert_eq!(rep["jacobi"], "pass");
}

#[test]
fn build_flat_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e2.json");
    let o = ihomog(&["build", "corpus:flat_e2", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(out).unwrap(), include_str!("golden/flat_e2_build.json"));
}

#[test]
fn build_jacobi_failure_exits_one() {
    let o = ihomog(&["build", "corpus:corrupted_bianchi1_r3"]);
    assert_eq!(o.status.code(), Some(1));
    let rep = stdout_json(&o);
    assert_eq!(rep["jacobi"], "fail");
    assert_eq!(rep["jacobi_witness"]["indices"], serde_json::json!([0, 1, 2]));
}

#[test]
fn text_format() {
    let o = ihomog(&["check", "corpus:flat_e2", "--format", "text"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("bianchi_2") && l.ends_with("pass")));
    assert!(text.ends_with("verdict: pass\n"));
}

#[test]
fn reports_are_deterministic() {
    for args in [&["check", "corpus:sphere_s3", "--generators"][..], &["realize", "corpus:sphere_s2"][..]] {
        assert_eq!(ihomog(args).stdout, ihomog(args).stdout);
    }
}

#[test]
fn reduce_torsion_writes_reduced_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reduced.json");
    let o = ihomog(&["reduce-torsion", "corpus:liegroup_so3_minus_connection", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let note = stdout_json(&o);
    assert_eq!(note["applied"], "remove_torsion");
    assert_eq!(note["curvature_correction"].as_array().unwrap().len(), 3);
    let reduced = ihomog::instance::parse_instance(&out).unwrap();
    let want = corpus::load("liegroup_so3_reduced").unwrap();
    assert_eq!((reduced.r0, reduced.lambda, reduced.t0), (want.r0, want.lambda, want.t0));

    let o = ihomog(&["reduce-torsion", "corpus:liegroup_so3_minus_connection"]);
    let both = stdout_json(&o);
    let inline: InstanceFile = serde_json::from_value(both["reduced_instance"].clone()).unwrap();
    assert!(inline.t0.is_empty());
    assert_eq!(both["note"]["applied"], "remove_torsion");
}

#[test]
fn reduce_non_invariant_torsion_fails() {
    let o = ihomog(&["reduce-torsion", "corpus:corrupted_flat_e2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout_json(&o)["error"].as_str().unwrap().contains("invariant"));
}

#[test]
fn realize_reports_points() {
    let o = ihomog(&["realize", "--input", "corpus:sphere_s2", "--fd-step", "1e-4", "--tol", "1e-6", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let rep = stdout_json(&o);
    let checks = rep["checks"].as_array().unwrap();
    assert_eq!(checks[0]["name"], "curvature_fd");
    assert_eq!(checks[0]["points"].as_array().unwrap().len(), 7);
    assert!(checks[0]["points"][0]["deviation"].as_f64().unwrap() <= 1e-6);
    assert_eq!(rep["config"]["seed"], 7);
}

#[test]
fn realize_abelian_is_unsupported() {
    let o = ihomog(&["realize", "corpus:flat_r2"]);
    assert_eq!(o.status.code(), Some(1));
    let rep = stdout_json(&o);
    assert_eq!(rep["supported"], false);
    assert!(rep["reason"].as_str().unwrap().contains("center"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"dimension\": 2,\n  \"R0\": [{\"i\": 1, \"j\": 1, \"matrix\": [[0,0],[0,0]]}]\n}\n").unwrap();
    let o = ihomog(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("i<j required"), "{err}");
    assert!(err.contains("line 3"), "{err}");

    fs::write(&bad, r#"{"dimension": 2, "R0": [{"i": 0, "j": 1, "matrix": [[0,"3/0"],[0,0]]}]}"#).unwrap();
    let o = ihomog(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("zero denominator"));

    assert_eq!(ihomog(&["check", "corpus:nope"]).status.code(), Some(2));
    assert_eq!(ihomog(&["check", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(ihomog(&["realize", "corpus:sphere_s2", "--fd-step", "-1"]).status.code(), Some(2));
    assert_eq!(ihomog(&["frobnicate"]).status.code(), Some(2));
}
