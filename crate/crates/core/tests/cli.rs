use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_broken-stick"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json on stdout")
}

fn assert_schema(name: &str, doc: &Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(name);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    if let Err(errors) = compiled.validate(doc) {
        let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
        panic!("{name} rejected output: {msgs:?}\n{doc:#}");
    };
}

#[test]
fn exact_json_reports_quarter_for_triangle() {
    let out = run(&["exact", "--n", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["final_probability"], "1/4");
    assert_eq!(doc["final_probability_approx"], 0.25);
    assert!(doc.get("per_k").is_none());
    assert_schema("exact.schema.json", &doc);
}

#[test]
fn exact_per_k_rows() {
    let out = run(&["exact", "--n", "4", "--per-k", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_schema("exact.schema.json", &doc);
    let rows = doc["per_k"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["k"], 2);
    assert_eq!(rows[1]["symbolic"], "5/384");
    assert_eq!(rows[1]["closed_form"], "5/384");

    let text = stdout(&run(&["exact", "--n", "4", "--per-k"]));
    assert!(text.contains("5/384"), "{text}");
}

#[test]
fn exact_rejects_small_n() {
    let out = run(&["exact", "--n", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let msg = stderr(&out);
    assert_eq!(msg.lines().count(), 1, "{msg}");
    assert!(msg.contains("n ≥ 2"), "{msg}");
    assert!(out.stdout.is_empty());
}

#[test]
fn exact_csv_columns() {
    let out = stdout(&run(&["exact", "--n", "3", "--format", "csv"]));
    assert_eq!(
        out,
        "n,ordered_probability,ordered_probability_approx,final_probability,final_probability_approx,symbolic_equals_closed\n\
         3,1/12,0.0833333333333333,1/2,0.5,true\n"
    );
    let out = stdout(&run(&["exact", "--n", "3", "--per-k", "--format", "csv"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,k,symbolic,closed_form,approx,symbolic_equals_closed");
    assert_eq!(lines[1], "3,1,1/24,1/24,0.0416666666666667,true");
    assert_eq!(lines.len(), 3);
}

#[test]
fn mc_report_near_quarter() {
    let out = run(&[
        "mc", "--n", "2", "--trials", "1000000", "--seed", "42", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_schema("mc.schema.json", &doc);
    assert_eq!(doc["seed"], 42);
    assert_eq!(doc["workers"], 1);
    let est = doc["estimate"].as_f64().unwrap();
    assert!((est - 0.25).abs() <= 4.0 * (0.25f64 * 0.75 / 1e6).sqrt(), "{est}");
    let per_k = doc["per_k"].as_array().unwrap();
    assert_eq!(per_k.len(), 1);
    assert_eq!(per_k[0]["count"], doc["feasible_count"]);
    assert_eq!(doc["k_range_violations"], 0);
    assert_eq!(doc["predicate_disagreements"], 0);
}

#[test]
fn mc_output_is_reproducible() {
    for format in ["json", "csv", "text"] {
        let args = [
            "mc",
            "--n",
            "5",
            "--trials",
            "200000",
            "--seed",
            "11",
            "--workers",
            "3",
            "--format",
            format,
        ];
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn mc_rejects_bad_config() {
    for args in [
        vec!["mc", "--n", "3", "--trials", "0"],
        vec!["mc", "--n", "1"],
        vec!["mc", "--n", "3", "--trials", "2", "--workers", "3"],
        vec!["mc", "--n", "3", "--workers", "0"],
        vec!["mc", "--n", "-3"],
        vec!["mc"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!stderr(&out).is_empty());
    }
}

#[test]
fn mc_per_k_csv() {
    let out = stdout(&run(&[
        "mc", "--n", "4", "--trials", "1000", "--per-k", "--format", "csv",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "n,k,count,frequency_approx,exact_probability,exact_probability_approx"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("4,2,"));
    assert!(lines[2].ends_with(",5/16,0.3125"));
}

#[test]
fn verify_passes_on_default_range() {
    let out = run(&[
        "verify", "--n-min", "2", "--n-max", "6", "--trials", "1000000", "--seed", "7", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let doc = json(&out);
    assert_schema("verify.schema.json", &doc);
    assert_eq!(doc["overall_pass"], true);
    assert_eq!(doc["n_range"], serde_json::json!([2, 6]));
    let finals: Vec<&str> = doc["per_n"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["exact_final"].as_str().unwrap())
        .collect();
    assert_eq!(finals, ["1/4", "1/2", "11/16", "13/16", "57/64"]);
}

#[test]
fn verify_single_trial_exit_reflects_result() {
    let out = run(&[
        "verify", "--n-min", "2", "--n-max", "2", "--trials", "1", "--format", "json",
    ]);
    let doc = json(&out);
    assert_schema("verify.schema.json", &doc);
    let expected = if doc["overall_pass"] == true { 0 } else { 2 };
    assert_eq!(out.status.code(), Some(expected));
}

#[test]
fn verify_rejects_inverted_range() {
    let out = run(&["verify", "--n-min", "5", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("n_min"));
}

#[test]
fn verify_csv_columns() {
    let out = stdout(&run(&[
        "verify", "--n-min", "3", "--n-max", "4", "--trials", "10000", "--format", "csv",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "n,exact_final,exact_final_approx,mc_estimate,mc_stderr,symbolic_equals_closed,sum_rule_holds,mc_within_tolerance"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("3,1/2,0.5,"));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verify"));
}
