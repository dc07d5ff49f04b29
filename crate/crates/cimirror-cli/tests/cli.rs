use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cimirror")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn series_quintic_f() {
    let v = json(&["series", "--n", "4", "--degrees", "5", "--order", "2"]);
    assert_eq!(v["command"], "series");
    assert_eq!(v["results"][0]["f"], serde_json::json!(["1", "120", "113400"]));
    assert_eq!(v["results"][0]["zstar"].as_array().unwrap().len(), 5);
}

#[test]
fn series_explicit_weights() {
    let v = json(&[
        "series",
        "--n",
        "2",
        "--degrees",
        "1",
        "--order",
        "1",
        "--weights",
        "explicit",
        "--lambdas",
        "0,1/2,3",
        "--mus",
        "5",
    ]);
    assert_eq!(v["config"]["weights"], serde_json::json!(["0", "1/2", "3", "5"]));
    let bad = run(&["series", "--n", "2", "--degrees", "1", "--weights", "explicit", "--lambdas", "0,1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn regime_errors_exit_two() {
    let out = run(&["series", "--n", "4", "--degrees", "5,5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("degree regime out of range"));
    let out = run(&["instanton", "--n", "3", "--degrees", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not a Calabi-Yau threefold"));
}

#[test]
fn quintic_instantons() {
    let v = json(&["instanton", "--n", "4", "--degrees", "5", "--max-d", "3"]);
    let n = &v["results"][0]["instanton_numbers"];
    assert_eq!(n["1"], "2875");
    assert_eq!(n["2"], "609250");
    assert_eq!(n["3"], "317206375");
    assert_eq!(v["verdict"], "pass");
    let csv = run(&["instanton", "--n", "4", "--degrees", "5", "--max-d", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&csv.stdout), "d,n_d,integral\n1,2875,true\n2,609250,true\n");
}

#[test]
fn verify_commands_pass() {
    for args in [
        &["verify", "p2", "--max-d", "4"][..],
        &["verify", "pf", "--n", "3", "--degrees", "3", "--order", "4"],
        &["verify", "recursion", "--n", "2", "--degrees", "1", "--order", "2", "--exact"],
        &["verify", "recursion", "--n", "3", "--degrees", "4", "--order", "2"],
        &["verify", "mirror", "--n", "3", "--degrees", "4", "--order", "2"],
        &["verify", "initial", "--n", "3", "--degrees", "4", "--order", "2"],
        &["verify", "classp", "--n", "3", "--degrees", "4", "--order", "2", "--exact"],
        &["verify", "sqc", "--n", "3", "--degrees", "3"],
        &["verify", "equivariant", "--n", "2", "--samples", "5"],
    ] {
        let v = json(args);
        assert_eq!(v["verdict"], "pass", "{args:?}");
    }
}

#[test]
fn csv_only_for_tables() {
    let out = run(&["verify", "p2", "--max-d", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["p2", "--max-d", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "d,k,N\n1,0,1\n2,0,1\n3,0,12\n");
}

#[test]
fn output_is_deterministic_apart_from_timing() {
    let args = ["verify", "mirror", "--n", "3", "--degrees", "4", "--order", "2", "--seed", "7"];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = strip(json(&args));
    let b = strip(json(&args));
    assert_eq!(a, b);
    assert_eq!(a["seed"], 7);
}
