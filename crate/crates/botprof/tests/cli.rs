//! Black-box tests of the `botprof` binary: exit codes, file handling, the
//! network override environment variable, and batch grading.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use botprof::report::BehaviorProfile;
use botprof::sim::{simulate, Policy, SimulationParams};
use botprof::trace::write_trace;

fn botprof(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_botprof"));
    cmd.args(args);
    cmd
}

fn run(args: &[&str]) -> Output {
    botprof(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn write_sample_trace(path: &Path) {
    let trace = simulate(&SimulationParams::new(42, 120, Policy::Heuristic)).unwrap();
    fs::write(path, write_trace(&trace)).unwrap();
}

fn assets(name: &str) -> String {
    format!("{}/assets/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn simulate_writes_a_deterministic_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let res = run(&[
            "simulate", "--policy", "greedy", "--ticks", "500", "--seed", "42",
            "--out", out.to_str().unwrap(),
        ]);
        assert!(res.status.success());
    }
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());
    // data rows = total lines minus header block, key/value block, blank
    // line, and the CSV header
    let text = String::from_utf8(bytes).unwrap();
    let data_rows = text.lines().skip_while(|l| !l.starts_with("tick,")).count() - 1;
    assert!(data_rows >= 1 && data_rows <= 500, "{data_rows}");
}

#[test]
fn simulate_without_out_is_a_usage_error() {
    let res = run(&["simulate", "--policy", "greedy"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(stderr(&res).contains("--out"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let res = run(&["frobnicate"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn profile_emits_the_report_schema_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    write_sample_trace(&trace);
    let res = run(&["profile", trace.to_str().unwrap(), "--format", "json"]);
    assert!(res.status.success());
    let profile: BehaviorProfile = serde_json::from_str(&stdout(&res)).expect("report schema");
    assert_eq!(profile.cps.len(), 6);
}

#[test]
fn profile_of_a_corrupted_trace_prints_the_violations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    let mut trace = simulate(&SimulationParams::new(1, 30, Policy::Random)).unwrap();
    trace.ticks[3].opponent_pos[0] = (999, 999);
    fs::write(&path, write_trace(&trace)).unwrap();

    let res = run(&["profile", path.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    let err = stderr(&res);
    assert!(err.contains("tick 3"), "{err}");
    assert!(err.contains("opponent"), "{err}");
}

#[test]
fn profile_from_sigma_fixture_mentions_brave() {
    let res = run(&["profile", "--sigma-fixture", &assets("example-bot-sigma.json")]);
    assert!(res.status.success());
    assert!(stdout(&res).contains("brave"));
}

#[test]
fn grade_of_the_reference_against_itself_is_seven() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("human.json");
    fs::write(&profile, botprof::HUMAN_EXPERT_PROFILE_JSON).unwrap();
    let res = run(&["grade", profile.to_str().unwrap(), "--format", "json"]);
    assert!(res.status.success());
    let grade: serde_json::Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(grade["fg"], 7.0);
}

#[test]
fn grade_fixture_attitude_similarity_matches_the_hand_oracle() {
    let res = run(&[
        "grade", "--sigma-fixture", &assets("example-bot-sigma.json"), "--format", "json",
    ]);
    assert!(res.status.success());
    let grade: serde_json::Value = serde_json::from_str(&stdout(&res)).unwrap();
    let attitude = &grade["per_cp"][0];
    assert_eq!(attitude["name"], "Attitude");
    let s = attitude["similarity"].as_f64().unwrap();
    assert!((s - 0.9023).abs() <= 0.001, "{s}");
}

#[test]
fn grade_with_a_missing_reference_file_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    write_sample_trace(&trace);
    let res = run(&[
        "grade", trace.to_str().unwrap(), "--reference", "/nonexistent/ref.json",
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(stderr(&res).contains("/nonexistent/ref.json"));
}

#[test]
fn grade_batch_lists_files_lexicographically() {
    let dir = tempfile::tempdir().unwrap();
    for (name, seed) in [("zeta.csv", 3u64), ("alpha.csv", 4), ("mid.csv", 5)] {
        let trace = simulate(&SimulationParams::new(seed, 60, Policy::Evasive)).unwrap();
        fs::write(dir.path().join(name), write_trace(&trace)).unwrap();
    }
    let res = run(&["grade", "--batch", dir.path().to_str().unwrap()]);
    assert!(res.status.success());
    let out = stdout(&res);
    let order: Vec<&str> = out.lines().filter_map(|l| l.split_whitespace().next()).collect();
    assert_eq!(order, ["alpha.csv", "mid.csv", "zeta.csv"]);
}

#[test]
fn validate_accepts_a_good_trace_and_network() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    write_sample_trace(&trace);
    let res = run(&[
        "validate", "--trace", trace.to_str().unwrap(),
        "--network", &assets("default-network.json"),
    ]);
    assert!(res.status.success());
    assert_eq!(stdout(&res).trim(), "OK");
}

#[test]
fn validate_rejects_a_broken_network_config() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    // rule mentions a label its variable does not define
    fs::write(
        &net,
        r#"{
            "variables": [
                {"name": "V", "domain": [0, 10], "terms": [
                    {"label": "LOW", "points": [0, 0, 5, 10]},
                    {"label": "HIGH", "points": [5, 10, 10, 10]}
                ]}
            ],
            "cps": [
                {"name": "X", "labels": ["A"],
                 "antecedents": [{"metric": "energy", "variable": "V"}],
                 "rules": [{"when": ["BOGUS"], "then": "A"}]}
            ]
        }"#,
    )
    .unwrap();
    let res = run(&["validate", "--network", net.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(stderr(&res).contains("BOGUS"));
}

#[test]
fn validate_without_flags_is_a_usage_error() {
    let res = run(&["validate"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn network_env_var_overrides_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    write_sample_trace(&trace);
    let res = botprof(&["profile", trace.to_str().unwrap()])
        .env("BOTPROF_NETWORK", "/nonexistent/net.json")
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(1));
    assert!(stderr(&res).contains("/nonexistent/net.json"));

    // pointing the variable at a copy of the default config works
    let net = dir.path().join("net.json");
    fs::write(&net, botprof::DEFAULT_NETWORK_JSON).unwrap();
    let res = botprof(&["profile", trace.to_str().unwrap()])
        .env("BOTPROF_NETWORK", net.to_str().unwrap())
        .output()
        .unwrap();
    assert!(res.status.success());
}
