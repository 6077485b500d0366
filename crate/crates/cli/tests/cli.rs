//! End-to-end tests of the binary: exit-code contract, artifact round
//! trips, and report shapes.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn mumtool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mumtool"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn mumtool_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mumtool"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn write_temp(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn catalog_block_hadamards_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    for id in ["h4", "h5", "h6"] {
        let artifact = mumtool(&["catalog", id]);
        assert_eq!(artifact.status.code(), Some(0));
        let path = write_temp(
            dir.path(),
            &format!("{id}.json"),
            &String::from_utf8_lossy(&artifact.stdout),
        );
        let verify = mumtool(&["verify", "block-hadamard", &path]);
        assert_eq!(verify.status.code(), Some(0), "{id}");
        let report = stdout_json(&verify);
        assert_eq!(report["passed"], serde_json::json!(true));
        assert_eq!(report["report"]["canonical"], serde_json::json!(true));
    }
}

#[test]
fn catalog_unknown_identifier_is_exit_2() {
    let output = mumtool(&["catalog", "does-not-exist"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn catalog_artifacts_parse_and_reverify_from_stdin() {
    // mub(4) -> verify mub, hw(2) -> verify oub, cd-special -> verify qhad
    let mub = mumtool(&["catalog", "mub(4)"]);
    assert_eq!(mub.status.code(), Some(0));
    let verify = mumtool_with_stdin(
        &["verify", "mub", "-"],
        &String::from_utf8_lossy(&mub.stdout),
    );
    assert_eq!(verify.status.code(), Some(0));

    let hw = mumtool(&["catalog", "hw(2)"]);
    let verify = mumtool_with_stdin(
        &["verify", "oub", "-"],
        &String::from_utf8_lossy(&hw.stdout),
    );
    assert_eq!(verify.status.code(), Some(0));

    let cd = mumtool(&["catalog", "cd-special(0.6,0.8,0.28,0.96)"]);
    let verify = mumtool_with_stdin(
        &["verify", "qhad", "-"],
        &String::from_utf8_lossy(&cd.stdout),
    );
    assert_eq!(verify.status.code(), Some(0));
}

#[test]
fn tower_artifact_has_expected_shape_and_round_trips() {
    let output = mumtool(&["catalog", "tower(2,3)"]);
    assert_eq!(output.status.code(), Some(0));
    let value = stdout_json(&output);
    let ops = value["operators"].as_array().unwrap();
    assert_eq!(ops.len(), 3);
    assert_eq!(ops[0]["rows"], serde_json::json!(8));
    // parse-level round trip: re-serialize losslessly
    let text = String::from_utf8_lossy(&output.stdout);
    let back: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(back, value);
}

#[test]
fn tower_respects_the_cap_flag() {
    let output = mumtool(&["catalog", "tower(4,4)", "--cap", "100"]);
    assert_eq!(output.status.code(), Some(2));
    let output = mumtool(&["catalog", "tower(4,4)", "--cap", "256"]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn verify_failure_and_malformed_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ones = write_temp(
        dir.path(),
        "ones.json",
        r#"{"rows":2,"cols":2,"entries":[[1,0,0,0],[1,0,0,0],[1,0,0,0],[1,0,0,0]]}"#,
    );
    let output = mumtool(&["verify", "qhad", &ones]);
    assert_eq!(output.status.code(), Some(1));
    let report = stdout_json(&output);
    assert_eq!(report["passed"], serde_json::json!(false));

    let truncated = write_temp(dir.path(), "trunc.json", r#"{"d": 4, "n": 2"#);
    let output = mumtool(&["verify", "mum", &truncated]);
    assert_eq!(output.status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    let output = mumtool(&["verify", "mum", &missing.to_string_lossy()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn pipeline_reports_counterexample_for_the_catalog_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let artifact = mumtool(&["catalog", "kuznetsov5"]);
    let path = write_temp(
        dir.path(),
        "k5.json",
        &String::from_utf8_lossy(&artifact.stdout),
    );
    let output = mumtool(&["pipeline", &path]);
    assert_eq!(output.status.code(), Some(0));
    let value = stdout_json(&output);
    assert_eq!(value["passed"], serde_json::json!(true));
    let sdc = &value["report"]["sdc"];
    assert_eq!(sdc["d"], serde_json::json!(5));
    assert_eq!(sdc["conjecture_counterexample"], serde_json::json!(true));
    assert!(value["report"]["noncommuting_witness"].is_object());
}

#[test]
fn pipeline_accepts_user_supplied_longer_sequences() {
    // a length-7 perfect sequence with quaternion-group middles and a
    // half-integer tail; not in the catalog, enters purely as user data
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        dir.path(),
        "len7.json",
        r#"{"terms":[[1,0,0,0],[-1,0,0,0],[0,1,0,0],[0,1,0,0],[-1,0,0,0],[1,0,0,0],[0.5,0.5,0.5,0.5]]}"#,
    );
    let output = mumtool(&["pipeline", &path]);
    assert_eq!(output.status.code(), Some(0));
    let value = stdout_json(&output);
    let report = &value["report"];
    assert_eq!(report["sequence_length"], serde_json::json!(7));
    assert_eq!(report["sdc"]["d"], serde_json::json!(7));
    assert_eq!(report["sdc"]["is_valid_protocol"], serde_json::json!(true));
    assert_eq!(
        report["sdc"]["conjecture_counterexample"],
        serde_json::json!(true)
    );
}

#[test]
fn pipeline_names_the_failing_stage() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(dir.path(), "bad.json", r#"{"terms":[[1,0,0,0],[1,0,0,0]]}"#);
    let output = mumtool(&["pipeline", &path]);
    assert_eq!(output.status.code(), Some(1));
    let value = stdout_json(&output);
    assert_eq!(
        value["report"]["failed_stage"],
        serde_json::json!("sequence-validation")
    );
    // malformed JSON is exit 2, not a stage failure
    let garbled = write_temp(dir.path(), "garbled.json", "{not json");
    let output = mumtool(&["pipeline", &garbled]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn sdc_reports_on_pair_files_and_simulates_messages() {
    let dir = tempfile::tempdir().unwrap();
    // a MUB-derived pair: valid protocol, no counterexample
    let mub_pair = mum_core::catalog::standard_mub_mum_pair(4).unwrap();
    let mub_path = write_temp(
        dir.path(),
        "mub4.json",
        &serde_json::to_string(&mub_pair).unwrap(),
    );
    let output = mumtool(&["sdc", &mub_path]);
    assert_eq!(output.status.code(), Some(0));
    let value = stdout_json(&output);
    assert_eq!(
        value["report"]["is_valid_protocol"],
        serde_json::json!(true)
    );
    assert_eq!(
        value["report"]["conjecture_counterexample"],
        serde_json::json!(false)
    );

    // the 4-outcome block pair: counterexample, and message decoding works
    let h4_pair = mum_core::mum::from_block_hadamard(
        &mum_core::catalog::h4(),
        mum_core::linalg::Tolerance::DEFAULT,
    )
    .unwrap();
    let h4_path = write_temp(
        dir.path(),
        "h4pair.json",
        &serde_json::to_string(&h4_pair).unwrap(),
    );
    let output = mumtool(&["sdc", &h4_path]);
    assert_eq!(output.status.code(), Some(0));
    let value = stdout_json(&output);
    assert_eq!(
        value["report"]["conjecture_counterexample"],
        serde_json::json!(true)
    );

    let output = mumtool(&["sdc", &h4_path, "--message", "2,3"]);
    assert_eq!(output.status.code(), Some(0));
    let value = stdout_json(&output);
    assert_eq!(value["report"]["decoded"], serde_json::json!([2, 3]));
    assert!(value["report"]["probability"].as_f64().unwrap() > 1.0 - 1e-9);

    // out-of-range message is malformed usage
    let output = mumtool(&["sdc", &h4_path, "--message", "9,1"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let artifact = mumtool(&["catalog", "h4"]);
    let path = write_temp(
        dir.path(),
        "h4.json",
        &String::from_utf8_lossy(&artifact.stdout),
    );
    let first = mumtool(&["verify", "block-hadamard", &path]);
    let second = mumtool(&["verify", "block-hadamard", &path]);
    assert_eq!(first.status.code(), second.status.code());
    assert_eq!(first.stdout, second.stdout);
    let v1 = stdout_json(&first);
    let v2 = stdout_json(&second);
    let m1 = v1["report"]["max_violation"].as_f64().unwrap();
    let m2 = v2["report"]["max_violation"].as_f64().unwrap();
    assert!((m1 - m2).abs() <= 1e-13);
}

#[test]
fn flags_are_validated() {
    let output = mumtool(&["catalog", "h4", "--tol", "0.5"]);
    assert_eq!(output.status.code(), Some(2));
    let output = mumtool(&["catalog", "h4", "--cap", "2"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let artifact = mumtool(&["catalog", "h5", "--out", &target.to_string_lossy()]);
    assert_eq!(artifact.status.code(), Some(0));
    let text = std::fs::read_to_string(&target).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["d"], serde_json::json!(5));
    assert_eq!(value["k"], serde_json::json!(2));
}

#[test]
fn text_format_renders_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let artifact = mumtool(&["catalog", "h4"]);
    let path = write_temp(
        dir.path(),
        "h4.json",
        &String::from_utf8_lossy(&artifact.stdout),
    );
    let output = mumtool(&["verify", "block-hadamard", &path, "--format", "text"]);
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("verdict: pass"));
    assert!(text.contains("max violation"));
}
