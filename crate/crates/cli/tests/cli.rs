use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

fn tnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tnc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const CYCLIC: &str = r#"{
    "field": {"p": 2, "m": 1},
    "nodes": ["s", "a", "b", "t"],
    "edges": [
        {"tail": "s", "head": "a"}, {"tail": "a", "head": "b"},
        {"tail": "b", "head": "a"}, {"tail": "b", "head": "t"}
    ],
    "sources": [{"node": "s"}],
    "sinks": [{"node": "t", "demands": [[0, 0]]}]
}"#;

/// Two sources into one sink through a shared link: the sink cannot
/// separate them.
const BOTTLENECK: &str = r#"{
    "field": {"p": 2, "m": 2},
    "nodes": ["s1", "s2", "a", "t"],
    "edges": [
        {"tail": "s1", "head": "a"}, {"tail": "s2", "head": "a"},
        {"tail": "a", "head": "t"}, {"tail": "a", "head": "t", "index": 1}
    ],
    "sources": [{"node": "s1"}, {"node": "s2"}],
    "sinks": [{"node": "t", "outputs": 2, "demands": [[0, 0], [1, 0]]}],
    "leks": {"default": 1}
}"#;

#[test]
fn feasibility_reports_f() {
    let out = tnc(&["feasibility", fixture("example1").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["f"], "D^25");
    assert_eq!(r["f_coefficients"].as_array().unwrap().len(), 26);
    assert_eq!(r["f_at_one"], serde_json::json!([1]));
    let dets: Vec<&str> = r["sinks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["det"].as_str().unwrap())
        .collect();
    assert_eq!(dets, ["D^5", "D^5", "D^6", "D^5", "D^4"]);
}

#[test]
fn feasibility_finds_plan() {
    let out = tnc(&[
        "feasibility",
        "--find-plan",
        "--n-min",
        "5",
        fixture("example1").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let plan = &report(&out)["plan"];
    assert_eq!(plan["n"], 7);
    assert_eq!(plan["field"]["m"], 3);
    assert_eq!(plan["alpha_primitive"], true);
    assert_eq!(plan["roots"], serde_json::json!([]));
}

#[test]
fn infeasible_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "bottleneck.json", BOTTLENECK);
    let out = tnc(&["feasibility", &path]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["feasible"], false);
    assert_eq!(code(&tnc(&["transform", &path])), 1);
}

#[test]
fn align_verify_only_example2() {
    let out = tnc(&["align", "--verify-only", fixture("example2").to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["ranks"], serde_json::json!([7, 7, 7]));
    assert_eq!(r["category"], "full");
    assert_eq!(r["trials"]["exact"], true);
    assert_eq!(r["throughput"], serde_json::json!(["4/7", "3/7", "3/7"]));
    assert_eq!(r["channel_uses"], 9);
}

#[test]
fn align_search_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = tnc(&[
        "align",
        "--budget",
        "50",
        "--seed",
        "3",
        fixture("example2").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["passes"], true);
    // The emitted problem file carries the kernels that were found.
    let path = write_temp(&dir, "found.json", &r["problem"].to_string());
    let again = tnc(&["align", "--verify-only", &path]);
    assert_eq!(code(&again), 0);
    assert_eq!(report(&again)["ranks"], serde_json::json!([7, 7, 7]));
}

#[test]
fn align_empty_budget_fails() {
    let out = tnc(&["align", "--budget", "0", fixture("example2").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(report(&out)["error"].as_str().unwrap().starts_with("NotFound"));
}

#[test]
fn cyclic_network_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "cyclic.json", CYCLIC);
    for cmd in ["validate", "mincut", "transfer", "feasibility"] {
        let out = tnc(&[cmd, &path]);
        assert_eq!(code(&out), 2, "{cmd}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("CycleDetected"), "{cmd}");
    }
}

#[test]
fn parse_errors_give_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "broken.json", "{\n  \"field\": {\"p\": 2,}\n}");
    let out = tnc(&["validate", &path]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("ParseError") && err.contains("line 2"), "{err}");
}

#[test]
fn schema_errors_are_all_listed() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"field": {"p": 2}, "nodes": ["s", 3], "edges": [{"head": "t"}], "sources": [], "sinks": "t"}"#;
    let path = write_temp(&dir, "schema.json", text);
    let out = tnc(&["validate", &path]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    for p in ["nodes[1]", "edges[0].tail", "sinks"] {
        assert!(err.contains(p), "{p} missing from {err}");
    }
}

#[test]
fn missing_file_and_bad_flags() {
    assert_eq!(code(&tnc(&["validate", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&tnc(&["validate"])), 2);
    assert_eq!(code(&tnc(&["frobnicate"])), 2);
}

#[test]
fn validate_and_mincut() {
    let path = fixture("example2");
    let out = tnc(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["kernels"], "invariant");
    assert_eq!(r["unit_delay"], true);
    let out = tnc(&["mincut", path.to_str().unwrap()]);
    assert_eq!(
        report(&out)["min_cut"],
        serde_json::json!([[1, 2, 1], [1, 1, 2], [2, 1, 1]])
    );
    let out = tnc(&["validate", fixture("example1").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["transfer"]["d_max"], 4);
}

#[test]
fn dump_normalized_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "3"] {
        let dumped = tnc(&["validate", "--dump-normalized", "--random-net", "--seed", seed]);
        assert_eq!(code(&dumped), 0);
        let path = write_temp(
            &dir,
            &format!("norm{seed}.json"),
            &String::from_utf8_lossy(&dumped.stdout),
        );
        let check = tnc(&["validate", &path]);
        assert_eq!(code(&check), 0);
        assert_eq!(report(&check)["unit_delay"], true);
        let before = report(&tnc(&["transfer", "--random-net", "--seed", seed]));
        let after = report(&tnc(&["transfer", &path]));
        assert_eq!(before["raw"], after["raw"]);
        assert_eq!(before["d_max"], after["d_max"]);
    }
}

#[test]
fn simulate_and_transform_pass() {
    let out = tnc(&["simulate", "--random-net", "--seed", "4", "--slots", "12"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["matches_transfer"], true);
    let out = tnc(&["transform", fixture("example1").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["plan"]["n"], 7);
    assert_eq!(r["pipeline_matches"], true);
    assert_eq!(r["generations"].as_array().unwrap().len(), 35);
    let out = tnc(&["transform", "--n", "7", fixture("example2").to_str().unwrap()]);
    assert_eq!(report(&out)["pipeline_matches"], true);
}

#[test]
fn output_is_deterministic() {
    let ex2 = fixture("example2");
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| tnc(&["align", "--seed", "9", "--budget", "20", ex2.to_str().unwrap()]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
    let a = tnc(&["simulate", "--random-net", "--seed", "5"]).stdout;
    let b = tnc(&["simulate", "--random-net", "--seed", "5"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn every_report_reparses_and_pretty_matches() {
    let ex1 = fixture("example1");
    let compact = report(&tnc(&["feasibility", ex1.to_str().unwrap()]));
    let pretty = report(&tnc(&["feasibility", "--pretty", ex1.to_str().unwrap()]));
    assert_eq!(compact, pretty);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = tnc(&[
        "mincut",
        fixture("example2").to_str().unwrap(),
        "-o",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert!(v["min_cut"].is_array());
}
