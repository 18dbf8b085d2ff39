//! Black-box tests of the command-line binary: output shapes, exit codes,
//! and determinism across worker counts.

use serde_json::Value;
use std::io::Write;
use std::process::{Command, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_centersig");

fn run_with_env(args: &[&str], stdin: &str, envs: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Command::new(BIN);
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary spawns");
    child
        .stdin
        .take()
        .expect("stdin handle")
        .write_all(stdin.as_bytes())
        .expect("stdin accepts input");
    let out = child.wait_with_output().expect("binary exits");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
    run_with_env(args, stdin, &[])
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("stdout is JSON")
}

#[test]
fn classify_reports_the_first_order_focus() {
    let (code, stdout, _) = run(&["classify"], r#"{"schema":1,"a":["1"]}"#);
    assert_eq!(code, 0);
    let v = json(&stdout);
    assert_eq!(v["verdict"], "focus");
    assert_eq!(v["order"], 1);
    assert_eq!(v["c_n"]["exact"], "2π");
}

#[test]
fn classify_reports_a_center() {
    let (code, stdout, _) = run(&["classify", "--cutoff", "6"], r#"{"schema":1,"a":["sin"]}"#);
    assert_eq!(code, 0);
    let v = json(&stdout);
    assert_eq!(v["verdict"], "center");
    assert_eq!(v["cutoff"], 6);
}

#[test]
fn universal_verdict_with_no_witnesses() {
    let (code, stdout, _) = run(&["universal", "--cutoff", "6"], r#"{"schema":1,"a":["sin"]}"#);
    assert_eq!(code, 0);
    let v = json(&stdout);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["witnesses"].as_array().map(Vec::len), Some(0));
}

#[test]
fn iint_lists_requested_words() {
    let input = r#"{"schema":1,"a":["sin","cos"],"words":[[1,2],[2,1],[1]]}"#;
    let (code, stdout, _) = run(&["iint"], input);
    assert_eq!(code, 0);
    let v = json(&stdout);
    let rows = v.as_array().expect("array of rows");
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["word"], json("[1]"));
    assert_eq!(rows[0]["value"]["exact"], "0");
    assert_eq!(rows[1]["word"], json("[1,2]"));
    assert_eq!(rows[1]["value"]["exact"], "-π");
}

#[test]
fn signature_is_deterministic_across_worker_counts() {
    let input = r#"{"schema":1,"a":["sin","cos","sin 2x"]}"#;
    let single = run_with_env(
        &["signature", "--cutoff", "5"],
        input,
        &[("CENTER_SIG_THREADS", "1")],
    );
    let multi = run_with_env(
        &["signature", "--cutoff", "5"],
        input,
        &[("CENTER_SIG_THREADS", "4")],
    );
    assert_eq!(single.0, 0);
    assert_eq!(multi.0, 0);
    assert_eq!(single.1, multi.1, "stdout must not depend on the worker count");
}

#[test]
fn group_inverse_then_concat_is_trivial() {
    let input = r#"{"schema":1,"a":["sin","cos"]}"#;
    let (code, inv_json, _) = run(&["group", "inverse"], input);
    assert_eq!(code, 0);

    // Feed the inverse back as the second concat operand via a temp file.
    let dir = std::env::temp_dir().join("centersig-cli-test");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let a_path = dir.join("a.json");
    let inv_path = dir.join("a_inv.json");
    std::fs::write(&a_path, input).expect("write a");
    std::fs::write(&inv_path, &inv_json).expect("write inverse");

    let (code, concat_json, _) = run(
        &["group", "concat", a_path.to_str().unwrap(), inv_path.to_str().unwrap()],
        "",
    );
    assert_eq!(code, 0);

    let prod_path = dir.join("prod.json");
    let zero_path = dir.join("zero.json");
    std::fs::write(&prod_path, &concat_json).expect("write product");
    std::fs::write(&zero_path, r#"{"schema":1,"a":[]}"#).expect("write zero");
    let (code, stdout, _) = run(
        &[
            "group",
            "equivalent",
            "--cutoff",
            "4",
            prod_path.to_str().unwrap(),
            zero_path.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(code, 0);
    let v = json(&stdout);
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn gen_center_output_classifies_as_center() {
    let (code, problem, _) = run(&["gen-center", "--cutoff", "6"], r#"{"schema":1,"u":["sin"]}"#);
    assert_eq!(code, 0);
    let (code, stdout, _) = run(&["classify", "--cutoff", "6", "--exact"], &problem);
    assert_eq!(code, 0);
    assert_eq!(json(&stdout)["verdict"], "center");
}

#[test]
fn gen_center_from_target_series_round_trips() {
    let (code, problem, _) = run(&["gen-center"], r#"{"schema":1,"f":{"d":["3"]}}"#);
    assert_eq!(code, 0);
    let (code, stdout, _) = run(&["classify", "--cutoff", "4"], &problem);
    assert_eq!(code, 0);
    let v = json(&stdout);
    assert_eq!(v["verdict"], "focus");
    assert_eq!(v["order"], 1);
    assert_eq!(v["c_n"]["exact"], "3");
}

#[test]
fn oracle_emits_csv_rows() {
    let (code, stdout, _) = run(&["oracle", "--csv"], r#"{"schema":1,"a":["sin"]}"#);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("r,re,im"));
    let first = lines.next().expect("at least one data row");
    assert_eq!(first.split(',').count(), 3);
}

#[test]
fn quadratic_reports_components_and_verdicts() {
    let input = r#"{"schema":1,"lambda":["3/10","1","1/5","1/10","1"]}"#;
    let (code, stdout, _) = run(&["quadratic"], input);
    assert_eq!(code, 0);
    let v = json(&stdout);
    assert_eq!(v["components"], json(r#"["lotka-volterra"]"#));
    assert_eq!(v["polar"]["verdict"], "center");
    assert_eq!(v["abel"]["verdict"], "center");
    assert_eq!(v["abel_universal"], false);
    assert!(v["abel_witnesses"].as_array().map_or(false, |w| !w.is_empty()));
}

#[test]
fn selftest_passes() {
    let (code, stdout, _) = run(&["selftest"], "");
    assert_eq!(code, 0);
    let v = json(&stdout);
    assert_eq!(v["ok"], true);
}

#[test]
fn malformed_input_exits_2() {
    // Not JSON at all.
    let (code, _, stderr) = run(&["classify"], "not json");
    assert_eq!(code, 2, "stderr: {stderr}");
    // Unknown field.
    let (code, _, _) = run(&["classify"], r#"{"schema":1,"a":["sin"],"extra":1}"#);
    assert_eq!(code, 2);
    // Wrong schema version.
    let (code, _, _) = run(&["classify"], r#"{"schema":99,"a":["sin"]}"#);
    assert_eq!(code, 2);
    // Unparseable shorthand.
    let (code, _, _) = run(&["classify"], r#"{"schema":1,"a":["sinh"]}"#);
    assert_eq!(code, 2);
    // Wrong lambda count.
    let (code, _, _) = run(&["quadratic"], r#"{"schema":1,"lambda":["1","2"]}"#);
    assert_eq!(code, 2);
    // Cutoff outside the supported range.
    let (code, _, _) = run(&["classify", "--cutoff", "17"], r#"{"schema":1,"a":["sin"]}"#);
    assert_eq!(code, 2);
    // CSV on a non-tabular subcommand.
    let (code, _, _) = run(&["classify", "--csv"], r#"{"schema":1,"a":["sin"]}"#);
    assert_eq!(code, 2);
}

#[test]
fn exact_flag_rejects_sampled_input_with_3() {
    let values: Vec<String> = (0..64).map(|i| format!("[{},0.0]", (i as f64) * 0.001)).collect();
    let input = format!(
        r#"{{"schema":1,"a":[{{"kind":"sampled","values":[{}]}}]}}"#,
        values.join(",")
    );
    let (code, _, stderr) = run(&["classify", "--exact"], &input);
    assert_eq!(code, 3, "stderr: {stderr}");
    // The same input without the flag is accepted.
    let (code, _, _) = run(&["classify"], &input);
    assert_eq!(code, 0);
}
