//! End-to-end CLI tests: exit codes, JSON-lines validity, determinism, and
//! config handling.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matchkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn matchkit")
}

fn report_lines(path: &Path) -> Vec<serde_json::Value> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .map(|l| serde_json::from_str(l).expect("every report line is valid JSON"))
        .collect()
}

#[test]
fn selftest_passes_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.jsonl");
    let output = run(&["--out", out.to_str().unwrap(), "selftest"]);
    assert_eq!(output.status.code(), Some(0));
    let lines = report_lines(&out);
    assert!(!lines.is_empty());
    for line in &lines {
        assert_eq!(line["status"], "pass");
        assert_eq!(line["check"], "selftest");
        assert!(line["tool_version"].is_string());
    }
}

#[test]
fn census_violation_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("census.jsonl");
    let output = run(&[
        "--out",
        out.to_str().unwrap(),
        "graph",
        "census",
        "--r",
        "3",
        "--v",
        "14",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let lines = report_lines(&out);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["status"], "fail");
    let witnesses = lines[0]["witness"]["witnesses"].as_array().unwrap();
    assert_eq!(witnesses.len(), 1, "exactly one violating class");
    assert!(witnesses[0]["graph"].as_str().unwrap().starts_with("nside=7 r=3"));
}

#[test]
fn inconclusive_only_exits_three() {
    // budget 0 cannot fit the non-constant coefficient traces
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("conj2.jsonl");
    let output = run(&[
        "--out",
        out.to_str().unwrap(),
        "check-conj2",
        "--i",
        "2",
        "--p-window",
        "2..9",
        "--budget",
        "0",
        "--holdout",
        "2",
    ]);
    assert_eq!(output.status.code(), Some(3));
    let lines = report_lines(&out);
    assert!(lines.iter().any(|l| l["status"] == "inconclusive"));
    assert!(lines.iter().all(|l| l["status"] != "fail"));
}

#[test]
fn usage_errors_exit_two() {
    // unknown flag
    let out = run(&["selftest", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    // bad parameter range
    let out = run(&["graph", "census", "--v", "7", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
    // bad mode
    let out = run(&["graph", "census", "--v", "6", "--mode", "both"]);
    assert_eq!(out.status.code(), Some(2));
}

fn scrub_elapsed(mut v: serde_json::Value) -> serde_json::Value {
    v["elapsed_ms"] = serde_json::Value::from(0u64);
    v
}

#[test]
fn identical_runs_produce_identical_reports_modulo_elapsed() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.jsonl");
    let out_b = dir.path().join("b.jsonl");
    for (out, _) in [(&out_a, 0), (&out_b, 1)] {
        let output = run(&[
            "--out",
            out.to_str().unwrap(),
            "graph",
            "census",
            "--r",
            "3",
            "--v",
            "10",
            "--mode",
            "sample",
            "--count",
            "40",
            "--seed",
            "123",
        ]);
        assert_eq!(output.status.code(), Some(0));
    }
    let a: Vec<_> = report_lines(&out_a).into_iter().map(scrub_elapsed).collect();
    let b: Vec<_> = report_lines(&out_b).into_iter().map(scrub_elapsed).collect();
    assert_eq!(a, b);
}

#[test]
fn config_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("conf");
    std::fs::write(&conf, "h_max=2\nr = 3\n").unwrap();
    let out = dir.path().join("p.jsonl");
    let output = run(&[
        "--config",
        conf.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "pernici",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let lines = report_lines(&out);
    assert_eq!(lines[0]["params"]["h_max"], "2");
    assert_eq!(lines[0]["params"]["r"], "3");

    // explicit flag wins over config
    let out2 = dir.path().join("p2.jsonl");
    let output = run(&[
        "--config",
        conf.to_str().unwrap(),
        "--out",
        out2.to_str().unwrap(),
        "pernici",
        "--h-max",
        "1",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let lines = report_lines(&out2);
    assert_eq!(lines[0]["params"]["h_max"], "1");
}

#[test]
fn duplicate_config_key_warns_and_last_wins() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("conf");
    std::fs::write(&conf, "h_max=9\nh_max=2\n").unwrap();
    let out = dir.path().join("p.jsonl");
    let output = run(&[
        "--config",
        conf.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "pernici",
        "--r",
        "3",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("duplicate key"), "stderr: {stderr}");
    assert_eq!(report_lines(&out)[0]["params"]["h_max"], "2");
}

#[test]
fn config_parse_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("conf");
    std::fs::write(&conf, "this is not a pair\n").unwrap();
    let output = run(&["--config", conf.to_str().unwrap(), "selftest"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 1"), "stderr: {stderr}");
}

#[test]
fn solve_f_emit_prints_canonical_polynomials() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.jsonl");
    let output = run(&["--out", out.to_str().unwrap(), "solve-f", "--p", "3", "--emit"]);
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("F_2 = 1/2*d1 + u2"), "stdout: {stdout}");
    assert!(stdout.contains("F_3 = 1/2*d1^2 + d1*u2 + d2 + u3"));
    assert_eq!(report_lines(&out)[0]["status"], "pass");
}

#[test]
fn chapman_subcommand_small_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ch.jsonl");
    let output = run(&[
        "--out",
        out.to_str().unwrap(),
        "chapman",
        "--g-max",
        "4",
        "--symbolic-g-max",
        "3",
        "--seed",
        "5",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let lines = report_lines(&out);
    // rational: (2,0),(3,0),(3,1),(4,0),(4,1),(4,2); symbolic: (2,0),(3,0),(3,1)
    assert_eq!(lines.len(), 9);
    assert!(lines.iter().all(|l| l["status"] == "pass"));
}

#[test]
fn threads_flag_keeps_results_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.jsonl");
    let out_b = dir.path().join("b.jsonl");
    for (out, threads) in [(&out_a, "1"), (&out_b, "2")] {
        let output = run(&[
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
            "graph",
            "census",
            "--r",
            "3",
            "--v",
            "12",
            "--mode",
            "exhaustive",
        ]);
        assert_eq!(output.status.code(), Some(0));
    }
    let a: Vec<_> = report_lines(&out_a).into_iter().map(scrub_elapsed).collect();
    let b: Vec<_> = report_lines(&out_b).into_iter().map(scrub_elapsed).collect();
    assert_eq!(a, b);
}
