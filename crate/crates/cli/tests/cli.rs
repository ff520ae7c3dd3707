use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strucspace"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (Value, Option<i32>) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (v, out.status.code())
}

fn top_keys(v: &Value) -> Vec<&str> {
    v.as_object().unwrap().keys().map(String::as_str).collect()
}

#[test]
fn inspect_lists_submodules_with_class_flags() {
    let (v, code) = json(&[
        "inspect", "--ring", "6", "--orders", "6", "--format", "json",
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(top_keys(&v), ["tool_version", "instance", "submodules"]);
    let subs = v["submodules"].as_array().unwrap();
    assert_eq!(subs.len(), 4);
    for s in subs {
        assert_eq!(s["classes"].as_object().unwrap().len(), 14);
        assert_eq!(s["classes"]["proper"], Value::Bool(s["size"] != 6));
    }
    let primes: Vec<&str> = subs
        .iter()
        .filter(|s| s["classes"]["prime"] == Value::Bool(true))
        .map(|s| s["label"].as_str().unwrap())
        .collect();
    assert_eq!(primes.len(), 2);
    assert!(primes.contains(&"⟨2⟩") && primes.contains(&"⟨3⟩"));
}

#[test]
fn space_dot_is_the_specialization_digraph() {
    let out = run(&[
        "space", "--ring", "2", "--orders", "2,2", "--class", "prime", "--format", "dot",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph specialization {"));
    assert!(dot.trim_end().ends_with('}'));
    let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(edges.len(), 3);
    assert!(edges
        .iter()
        .all(|e| e.trim_start().starts_with("\"⟨⟩\" ->")));
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
}

#[test]
fn space_json_reports_separation() {
    let (v, code) = json(&[
        "space", "--ring", "6", "--orders", "6", "--class", "prime", "--format", "json",
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(top_keys(&v), ["tool_version", "instance", "space"]);
    assert_eq!(v["space"]["separation"]["t0"], Value::Bool(true));
    assert_eq!(v["space"]["separation"]["t1"], Value::Bool(true));
    assert_eq!(v["space"]["connected"], Value::Bool(false));
}

#[test]
fn verify_emits_results_and_exit_code_tracks_fails() {
    let (v, code) = json(&[
        "verify", "--ring", "6", "--orders", "6", "--class", "prime", "--format", "json",
    ]);
    assert_eq!(
        top_keys(&v),
        ["tool_version", "instance", "summary", "results"]
    );
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(code, Some(0));

    let (v, code) = json(&[
        "verify", "--ring", "8", "--orders", "8", "--class", "minimal", "--format", "json",
    ]);
    assert!(v["summary"]["fail"].as_u64().unwrap() > 0);
    assert_eq!(code, Some(1));
}

#[test]
fn hom_reports_induced_map_checks() {
    let (v, code) = json(&[
        "hom", "--ring", "4", "--src", "4", "--dst", "2", "--images", "1", "--class", "proper",
        "--format", "json",
    ]);
    assert_eq!(code, Some(0));
    let ids: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["statement_id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"prop-conmap.3-dense"));
    let (v, _) = json(&[
        "hom", "--ring", "2", "--src", "2", "--dst", "2", "--images", "0", "--class", "proper",
        "--format", "json",
    ]);
    let contraction = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["statement_id"] == "prop-conmap.contraction")
        .unwrap();
    assert_eq!(contraction["verdict"], "pass");
    assert_eq!(contraction["note"], "contraction fails");
}

#[test]
fn input_errors_exit_two_with_one_line() {
    for args in [
        &["inspect", "--ring", "4", "--orders", "3"][..],
        &["space", "--ring", "6", "--orders", "6", "--class", "bogus"][..],
        &["inspect", "--ring", "256", "--orders", "256,2"][..],
        &[
            "verify",
            "--ring",
            "16",
            "--orders",
            "16,16",
            "--max-submodules",
            "10",
        ][..],
        &[
            "hom", "--ring", "4", "--src", "2", "--dst", "4", "--images", "1",
        ][..],
        &["inspect", "--ring", "x", "--orders", "2"][..],
        &["frobnicate"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("strucspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z6.json");
    let out = run(&[
        "inspect",
        "--ring",
        "6",
        "--orders",
        "6",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["submodules"].as_array().unwrap().len(), 4);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "corpus",
        "--max-modulus",
        "6",
        "--families",
        "10",
        "--seed",
        "9",
        "--format",
        "json",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
