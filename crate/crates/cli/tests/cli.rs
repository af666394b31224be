use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsym")).args(args).output().expect("binary runs")
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let out = run(&all);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), json)
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("subsym-cli-{}-{name}", std::process::id()))
}

#[test]
fn analyze_cyclic() {
    let (code, r) = structured(&["analyze", data("cyclic.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["symmetry"]["order"], 3);
    assert_eq!(r["symmetry"]["elements"], serde_json::json!(["id", "(a b c)", "(a c b)"]));
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn analyze_quaternion() {
    let (code, r) = structured(&["analyze", data("quaternion.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["symmetry"]["order"], 8);
    assert_eq!(r["symmetry"]["fingerprint"], "{1:1, 2:1, 4:6}");
}

#[test]
fn analyze_periodic_exits_with_precondition_code() {
    let (code, r) = structured(&["analyze", data("periodic.json").to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(r["aperiodicity"]["status"], "periodic");
}

#[test]
fn bad_inputs_exit_with_input_code() {
    assert_eq!(run(&["analyze", "/nonexistent/file.json"]).status.code(), Some(2));
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"alphabet":["a","b"],"shape":[2],"rule":{"a":["a","b"],"b":["a","b"]}}"#).unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bijection"));
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
}

#[test]
fn structured_output_is_deterministic() {
    let file = data("square_thue_morse.json");
    let args = ["verify", file.to_str().unwrap(), "--format", "structured"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_oracles() {
    let (code, r) = structured(&["verify", data("thue_morse.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let oracles = r["oracles"].as_array().unwrap();
    assert!(oracles.iter().all(|o| o["outcome"] == "agreed"));
    let (code, r) = structured(&["verify", data("quaternion.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let bry = r["oracles"].as_array().unwrap().iter().find(|o| o["name"].as_str().unwrap().starts_with("reversors")).unwrap();
    assert_eq!(bry["outcome"], "skipped");
}

#[test]
fn verify_random_instances() {
    let (code, r) = structured(&["verify", "--random", "5", "--seed", "3"]);
    assert_eq!(code, 0);
    assert!(r["oracles"].as_array().unwrap().iter().all(|o| o["outcome"] != "mismatch"));
}

#[test]
fn construct_shell_writes_a_file() {
    let path = scratch("shell.json");
    let (code, r) = structured(&["construct", "--kind", "shell", "--d", "2", "--P", "c4", "--G", "quaternion", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["substitution"]["shape"], serde_json::json!([10, 10]));
    assert_eq!(r["extended"]["quotient"].as_array().unwrap().len(), 4);
    assert_eq!(r["certificate"]["verified"], true);
    let (code, again) = structured(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(again["extended"]["quotient"], r["extended"]["quotient"]);
}

#[test]
fn construct_cayley_and_tower() {
    let (code, r) = structured(&["construct", "--kind", "cayley1d", "--G", "c3"]);
    assert_eq!(code, 0);
    assert_eq!(r["substitution"]["alphabet"].as_array().unwrap().len(), 3);
    let (code, r) = structured(&["construct", "--kind", "cyclic-tower", "--n", "3", "--k", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r["certificate"]["max_reversor_order"], 9);
}

#[test]
fn construct_rejects_bad_dimension() {
    let (code, r) = structured(&["construct", "--kind", "nonid", "--d", "6", "--G", "c2"]);
    assert_eq!(code, 2);
    assert!(r["failure"]["message"].as_str().unwrap().contains("bad dimension"));
}

#[test]
fn power_and_blocks() {
    let tm = data("thue_morse.json");
    let out = run(&["power", tm.to_str().unwrap(), "--letter", "a", "--level", "3"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "abbabaab");
    let out = run(&["power", tm.to_str().unwrap(), "--at", "1", "--level", "1"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "(a b)");
    let (code, r) = structured(&["blocks", tm.to_str().unwrap(), "--size", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["blocks"], serde_json::json!(["aa", "ab", "ba", "bb"]));
}
