use std::process::{Command, Output};

use qtransport::network::build_triangle;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtransport")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn triangle_transport_matches_golden() {
    let o = run(&["export", "transport", "--builder", "triangle", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/triangle2_transport.txt"));
}

#[test]
fn frp_table_matches_golden() {
    let o = run(&["check", "frp", "--r", "4", "--p", "5", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/frp_4_5.txt"));
}

#[test]
fn file_input_agrees_with_builder() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tri.json");
    std::fs::write(&path, build_triangle(2).unwrap().to_json_string()).unwrap();
    let from_file = run(&["export", "transport", "--input", path.to_str().unwrap(), "--json"]);
    let built = run(&["export", "transport", "--builder", "triangle", "--json"]);
    assert_eq!(from_file.status.code(), Some(0));
    let a: Value = serde_json::from_slice(&from_file.stdout).unwrap();
    let b: Value = serde_json::from_slice(&built.stdout).unwrap();
    assert_eq!(a["entries"], b["entries"]);
    assert_eq!(a["sinks"], b["sinks"]);
}

#[test]
fn json_output_is_deterministic_without_timing() {
    let args = ["check", "all", "--builder", "bottleneck", "--kmax", "2", "--json", "--no-timing"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.len() > 10);
    assert!(reports.iter().all(|r| r["passed"] == true && r["timing_ms"] == 0.0));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.txt");
    let o = run(&["export", "levels", "--builder", "ladder", "--kmax", "0", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    // K = 0 yields T0 only.
    assert!(text.contains("\nT0\n"));
    assert!(!text.contains("\nT1\n"));
}

#[test]
fn composite_passes_in_groupoid_mode() {
    let o = run(&["check", "all", "--builder", "composite", "--parts", "1,1,2,1", "--groupoid", "--no-timing"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn failing_check_exits_one() {
    // the ladder violates the groupoid condition
    let o = run(&["check", "groupoid", "--builder", "ladder", "--no-timing"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL groupoid"));
}

#[test]
fn usage_and_file_errors_exit_two() {
    assert_eq!(run(&["check", "rtt", "--builder", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["check", "rtt"]).status.code(), Some(2));
    assert_eq!(run(&["check", "rtt", "--input", "/definitely/missing.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["check", "rtt", "--input", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["check", "blocks", "--builder", "triangle", "--split", "1,2"]).status.code(), Some(2));
}

#[test]
fn truncation_exits_three() {
    let o = run(&["check", "affine", "--builder", "triangle", "--kmax", "3", "--order", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("truncation"));
}
