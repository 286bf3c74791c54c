use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn case<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["cases"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no case {name}"))
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn matrix_lemma_at_one_is_exact() {
    let out = run(&["verify", "matrix-lemma", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let c = case(&r, "matrix-lemma/t=1");
    assert_eq!(c["status"], "pass");
    assert_eq!(c["residual"], "exact-zero");
    assert_eq!(r["wall_time_ms"], Value::Null);
}

#[test]
fn geodesic_axioms_pass_with_zero_residual() {
    let out = run(&["verify", "axioms", "--model", "geodesic", "--samples", "1000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["config"]["seed"], 7);
    for c in r["cases"].as_array().unwrap() {
        assert_eq!(c["status"], "pass");
        assert_eq!(c["residual"], "exact-zero");
    }
}

#[test]
fn central_extension_demo_shows_witness() {
    let out = run(&["demo", "central-extension", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let c = case(&r, "central-extension/sl3/action-matrix");
    assert_eq!(c["status"], "pass");
    assert_eq!(c["witness"], "diag(-1, -1, 1)");
}

#[test]
fn negative_control_model_exits_one_with_witness() {
    let out = run(&["verify", "axioms", "--model", "broken-sl2", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let c = case(&r, "axioms/broken-sl2/battery");
    assert_eq!(c["status"], "fail");
    assert!(c["witness"].as_str().unwrap().contains("RS2"));
    assert_eq!(r["summary"]["failed"], 1);
}

#[test]
fn malformed_rational_is_a_config_error() {
    let out = run(&["verify", "matrix-lemma", "--t-values", "1,1/0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("t_values"), "{err}");
}

#[test]
fn unknown_suite_and_model_are_config_errors() {
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "axioms", "--model", "sl7"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "cocone", "--diagram", "B2"]).status.code(), Some(2));
}

#[test]
fn config_file_is_read_and_flags_win() {
    let path = scratch("flags-win.json");
    std::fs::write(&path, "{\n  \"model\": \"geodesic\",\n  \"seed\": 3,\n  \"samples\": 10\n}\n").unwrap();
    let out = run(&["verify", "axioms", "--config", path.to_str().unwrap(), "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["config"]["model"], "geodesic");
    assert_eq!(r["config"]["seed"], 11);
    assert_eq!(r["config"]["samples"], 10);
}

#[test]
fn config_file_with_unknown_key_reports_line() {
    let path = scratch("unknown-key.json");
    std::fs::write(&path, "{\n  \"seed\": 1,\n  \"colour\": \"red\"\n}\n").unwrap();
    let out = run(&["verify", "axioms", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("colour"), "{err}");
}

#[test]
fn empty_config_file_gives_defaults() {
    let path = scratch("empty.json");
    std::fs::write(&path, "").unwrap();
    let out = run(&["verify", "so2-residuals", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["config"]["model"], "sl2");
    assert_eq!(r["config"]["seed"], 0);
    assert_eq!(r["config"]["samples"], 1000);
    assert_eq!(r["config"]["precision_bits"], 128);
    assert_eq!(r["config"]["abs_tol"], "1e-9");
}

#[test]
fn reports_are_byte_identical_and_out_matches_stdout() {
    let args = ["verify", "commutator", "--samples", "20", "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let path = scratch("commutator.json");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let c = run(&with_out);
    assert_eq!(c.status.code(), Some(0));
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn timing_flag_fills_wall_time() {
    let out = run(&["verify", "matrix-lemma", "--t", "2", "--timing"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["wall_time_ms"].is_u64());
}

#[test]
fn factor_command() {
    let out = run(&["factor", "--matrix", "1,1;0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["expression"], "h1.(o.(h2.(o.(h3.o))))");

    let out = run(&["factor", "--matrix", "0,0,1;1,0,0;0,1,0"]);
    assert_eq!(out.status.code(), Some(0));

    assert_eq!(run(&["factor", "--matrix", "2,0;0,1"]).status.code(), Some(1));
    assert_eq!(run(&["factor", "--matrix", "1,x;0,1"]).status.code(), Some(2));
}

#[test]
fn act_command() {
    let out = run(&["act", "--model", "sl2", "--word", "2,1;1,1", "--point", "o"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["image"], "[[5, 3], [3, 2]]");

    let out = run(&["act", "--model", "geodesic", "--word", "1|o", "--point", "2"]);
    assert_eq!(json(&out)["image"], "4");

    assert_eq!(
        run(&["act", "--model", "sl2", "--word", "1,2;2,1", "--point", "o"]).status.code(),
        Some(2)
    );
}
