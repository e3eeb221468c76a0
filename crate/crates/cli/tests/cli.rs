//! End-to-end checks of the command handlers: every advertised subcommand
//! parses and produces output with the documented shape.

use a22_cli::{run, Cli};
use clap::Parser;

fn run_args(args: &[&str]) -> String {
    let mut full = vec!["a22"];
    full.extend_from_slice(args);
    let cli = Cli::try_parse_from(full).expect("arguments parse");
    run(cli).expect("command succeeds")
}

#[test]
fn chars_enumerate_emits_the_censuses() {
    let json: serde_json::Value = serde_json::from_str(&run_args(&[
        "chars",
        "enumerate",
        "--kind",
        "goepel-quads",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(json["count"], 15);
    assert_eq!(json["members"].as_array().unwrap().len(), 15);
    let text = run_args(&["chars", "enumerate", "--kind", "even-chars"]);
    assert!(text.contains("total: 10"));
    let syz: serde_json::Value = serde_json::from_str(&run_args(&[
        "chars",
        "enumerate",
        "--kind",
        "syzygous-triples",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(syz["count"], 60);
}

#[test]
fn group_verify_prints_order_and_sign_table() {
    let out = run_args(&["group", "verify"]);
    assert!(out.contains("group order: 720"));
    assert!(out.contains("pairs 45"));
    assert!(out.contains("goepel quadruples 15"));
    // exchange involution signs: -1 exactly at positions 5, 6, 9, 10
    assert!(out.contains("x_5  <- -1 * x_10"));
    assert!(out.contains("x_7  <- +1 * x_7"));
}

#[test]
fn variety_points_json_schema() {
    let json: serde_json::Value = serde_json::from_str(&run_args(&[
        "variety", "points", "--domain", "q", "--format", "json",
    ]))
    .unwrap();
    let list = json.as_array().unwrap();
    assert_eq!(list.len(), 15);
    for rec in list {
        assert_eq!(rec["coords"].as_array().unwrap().len(), 10);
        assert_eq!(rec["zero_set"].as_array().unwrap().len(), 6);
    }
    let f2: serde_json::Value = serde_json::from_str(&run_args(&[
        "variety", "points", "--domain", "f2", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(f2.as_array().unwrap().len(), 31);
}

#[test]
fn graph_build_writes_json_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("graph.json");
    let dot = dir.path().join("graph.dot");
    let msg = run_args(&[
        "graph",
        "build",
        "--domain",
        "q",
        "--out",
        out.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert!(msg.contains("145 vertices"));
    let graph: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(graph["vertices"].as_array().unwrap().len(), 145);
    assert!(!graph["edges"].as_array().unwrap().is_empty());
    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert!(dot_text.starts_with("digraph"));
}

#[test]
fn runge_bound_json() {
    let json: serde_json::Value =
        serde_json::from_str(&run_args(&["runge", "bound", "--format", "json"])).unwrap();
    let bound = json["height_bound"].as_f64().unwrap();
    assert!(bound <= 8.6);
    let with2: serde_json::Value = serde_json::from_str(&run_args(&[
        "runge",
        "bound",
        "--s-contains-2",
        "--format",
        "json",
    ]))
    .unwrap();
    assert!(with2["height_bound"].as_f64().unwrap() <= 4.0);
}

#[test]
fn runge_sample_certifies() {
    let json: serde_json::Value = serde_json::from_str(&run_args(&[
        "runge", "sample", "--count", "10", "--seed", "7",
    ]))
    .unwrap();
    assert_eq!(json["certified"], true);
    assert_eq!(json["small_set_verdicts"], 10);
}

#[test]
fn baker_constants_and_bound() {
    let json: serde_json::Value = serde_json::from_str(&run_args(&[
        "baker", "constants", "--d", "18", "--s", "9", "--regime", "arch",
    ]))
    .unwrap();
    let c1 = json["c1"].as_f64().unwrap();
    assert!(c1 > 1e35 && c1 <= 8e35);
    let bound: serde_json::Value = serde_json::from_str(&run_args(&[
        "baker", "bound", "--d", "18", "--s", "9", "--hk", "1", "--rs", "1", "--ps", "1",
        "--audit",
    ]))
    .unwrap();
    assert!(bound["value"].as_f64().unwrap() <= 1e66);
    assert_eq!(bound["headline_audit"]["certified"], true);
}

#[test]
fn search_run_writes_results_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results.json");
    let cert = dir.path().join("cert.json");
    let msg = run_args(&[
        "search",
        "run",
        "--height",
        "4",
        "--out",
        out.to_str().unwrap(),
        "--cert",
        cert.to_str().unwrap(),
    ]);
    assert!(msg.contains("0 points"));
    let results: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(results.as_array().unwrap().len(), 0);
    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(cert["free_tuples_enumerated"], 248832);
    assert_eq!(cert["accepted"], 0);

    // the sign-only alphabet with zeros recovers the deepest points
    let out2 = dir.path().join("r2.json");
    let cert2 = dir.path().join("c2.json");
    run_args(&[
        "search",
        "run",
        "--height",
        "4",
        "--allow-zeros",
        "--alphabet",
        "pm1",
        "--out",
        out2.to_str().unwrap(),
        "--cert",
        cert2.to_str().unwrap(),
    ]);
    let results2: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out2).unwrap()).unwrap();
    assert_eq!(results2.as_array().unwrap().len(), 15);
}

#[test]
fn theta_verify_suites() {
    let json: serde_json::Value = serde_json::from_str(&run_args(&[
        "theta", "verify", "--suite", "all", "--samples", "5", "--seed", "11", "--tol",
        "1e-12",
    ]))
    .unwrap();
    assert!(json["equations_max_residual"].as_f64().unwrap() < 1e-9);
    assert!(json["modularity_max_spread"].as_f64().unwrap() < 1e-8);
    assert!(json["splitting_max_error"].as_f64().unwrap() < 1e-9);
    assert!(json["rosenhain_max_dual_path_error"].as_f64().unwrap() < 1e-8);
    assert_eq!(json["smallset_verdicts"], 5);

    let single: serde_json::Value = serde_json::from_str(&run_args(&[
        "theta",
        "verify",
        "--suite",
        "equations",
        "--samples",
        "3",
    ]))
    .unwrap();
    assert!(single.get("modularity_max_spread").is_none());
}
