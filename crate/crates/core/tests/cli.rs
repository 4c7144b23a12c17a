//! End-to-end runs of the `qwalk` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> (String, String) {
    let out = qwalk(args);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(out.status.success(), "{args:?} failed: {stderr}");
    (String::from_utf8(out.stdout).unwrap(), stderr)
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn summary_field(summary: &str, key: &str) -> String {
    summary
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing from {summary}"))
        .to_string()
}

#[test]
fn walk_zero_steps_is_the_initial_distribution() {
    let (out, _) = ok(&["walk", "--graph", "hypercube", "--iterations", "0"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][1], "1.000000");
    let (out, _) = ok(&[
        "walk",
        "--graph",
        "complete",
        "--size",
        "4",
        "--iterations",
        "0",
        "--init",
        "uniform",
    ]);
    assert!(csv_rows(&out)[1][1..].iter().all(|p| p == "0.250000"));
}

#[test]
fn walk_one_step_spreads_to_four_neighbours() {
    let (out, _) = ok(&["walk", "--graph", "hypercube", "--size", "4", "--iterations", "1"]);
    let rows = csv_rows(&out);
    let header = &rows[0];
    for label in ["0001", "0010", "0100", "1000"] {
        let col = header.iter().position(|h| h == label).unwrap();
        assert_eq!(rows[2][col], "0.250000");
    }
}

#[test]
fn walk_has_steps_plus_one_rows() {
    for steps in [0, 2, 5] {
        let (out, _) = ok(&["walk", "--graph", "bipartite", "--iterations", &steps.to_string()]);
        assert_eq!(out.lines().count(), steps + 2);
        let (json, _) = ok(&[
            "walk",
            "--graph",
            "bipartite",
            "--iterations",
            &steps.to_string(),
            "--format",
            "json",
        ]);
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["distributions"].as_array().unwrap().len(), steps + 1);
    }
}

#[test]
fn hitting_time_reference_configurations() {
    for (graph, marked, hit, peak) in [
        ("hypercube", "1011", "3", 0.932),
        ("lattice", "1011", "3", 0.931),
        ("bipartite", "011", "2", 0.945),
        ("complete", "1011,1111", "2", 0.945),
    ] {
        let (out, summary) = ok(&["hitting-time", "--graph", graph, "--marked", marked]);
        assert_eq!(
            out.lines().next().unwrap(),
            "iteration,marked_probability,top_state,top_probability"
        );
        assert_eq!(summary_field(&summary, "hitting_time"), hit);
        let p: f64 = summary_field(&summary, "peak_probability").parse().unwrap();
        assert!((p - peak).abs() <= 0.03, "{graph}: {p}");
        assert!(summary.contains("theoretical_iterations="));
    }
}

#[test]
fn hitting_time_json_has_documented_fields() {
    let (out, _) = ok(&[
        "hitting-time",
        "--graph",
        "bipartite",
        "--marked",
        "011",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    for key in ["graph", "marked", "t", "trace", "hitting_time", "epsilon"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["hitting_time"], 2);
}

#[test]
fn search_counts_match_the_reference_within_sampling_error() {
    let (out, _) = ok(&[
        "search",
        "--graph",
        "hypercube",
        "--marked",
        "1011",
        "--iterations",
        "3",
        "--format",
        "json",
        "--seed",
        "1",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let hits = v["counts"]["1011"].as_f64().unwrap();
    let sigma = (1024.0 * 0.932 * 0.068f64).sqrt();
    assert!((hits - 0.932 * 1024.0).abs() <= 3.0 * sigma + 0.03 * 1024.0, "{hits}");
    let exact = v["trace"][3].as_f64().unwrap();
    let sigma = (1024.0 * exact * (1.0 - exact)).sqrt();
    assert!((hits - exact * 1024.0).abs() <= 3.0 * sigma);
}

#[test]
fn search_json_and_text_report_the_same_counts() {
    let args = ["search", "--graph", "complete", "--marked", "1011,1111", "--seed", "4"];
    let (text, _) = ok(&args);
    let (json, _) = ok(&[&args[..], &["--format", "json"]].concat());
    let v: Value = serde_json::from_str(&json).unwrap();
    let counts = v["counts"].as_object().unwrap();
    let mut seen = 0;
    for line in text.lines().filter(|l| l.contains(" | ")) {
        let label = line.split(" | ").next().unwrap();
        let rest: Vec<&str> = line.rsplit(' ').collect();
        let count: u64 = rest[1].parse().unwrap();
        assert_eq!(counts[label].as_u64().unwrap(), count);
        seen += 1;
    }
    assert_eq!(seen, counts.len());
}

#[test]
fn histogram_bars_are_proportional() {
    let (text, _) = ok(&[
        "search",
        "--graph",
        "bipartite",
        "--marked",
        "011",
        "--shots",
        "4000",
        "--seed",
        "8",
    ]);
    for line in text.lines().filter(|l| l.contains(" | ")) {
        let bar = line.split(" | ").nth(1).unwrap();
        let hashes = bar.chars().take_while(|&c| c == '#').count() as f64;
        let freq: f64 = line.rsplit('(').next().unwrap().trim_end_matches(')').parse().unwrap();
        assert!((hashes - freq * 50.0).abs() <= 1.0, "{line}");
    }
}

#[test]
fn search_repeats_with_the_same_seed() {
    let args = [
        "search", "--graph", "lattice", "--marked", "1011", "--seed", "3", "--format", "csv",
    ];
    assert_eq!(ok(&args).0, ok(&args).0);
    let other = [
        "search", "--graph", "lattice", "--marked", "1011", "--seed", "4", "--format", "csv",
    ];
    assert_ne!(ok(&args).0, ok(&other).0);
}

#[test]
fn grover_outputs() {
    let (json, _) = ok(&["grover", "--size", "4", "--marked", "1011", "--format", "json"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["iterations"], 3);
    assert!(v["trace"][3].as_f64().unwrap() >= 0.9375);
    let (json, _) = ok(&["grover", "--size", "2", "--marked", "11", "--format", "json"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert!((v["trace"][1].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let (csv, _) = ok(&["grover", "--size", "3", "--marked", "101", "--format", "csv"]);
    assert_eq!(csv.lines().next().unwrap(), "state,count,frequency");
    assert!(!qwalk(&["grover", "--marked", "1011,1111"]).status.success());
}

#[test]
fn classical_outputs() {
    let (csv, summary) = ok(&[
        "classical",
        "--graph",
        "complete",
        "--marked",
        "1011,1111",
        "--trials",
        "20000",
    ]);
    let rows = csv_rows(&csv);
    assert_eq!(rows[0].len(), 8);
    assert_eq!(rows[1][2], "uniform-unmarked");
    assert_eq!(rows[1][3], "8.000000");
    assert!(summary.contains("period=1"));
    let (_, summary) = ok(&[
        "classical",
        "--graph",
        "hypercube",
        "--marked",
        "1011",
        "--trials",
        "1000",
    ]);
    assert!(summary.contains("period=2") && summary.contains("not-mixing"));
    let (json, _) = ok(&[
        "classical",
        "--graph",
        "bipartite",
        "--marked",
        "011",
        "--trials",
        "1000",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&json).unwrap();
    let quantum = v["quantum_hitting_time"].as_f64().unwrap();
    let classical = v["hitting_times"][0]["linear_solve"].as_f64().unwrap();
    assert!(quantum <= classical);
}

#[test]
fn noise_outputs() {
    let base = ["noise", "--graph", "bipartite", "--marked", "011", "--shots", "200"];
    let (csv, summary) = ok(&[&base[..], &["--noise", "0,0,0", "--noise", "0.01,0.05,0.02"]].concat());
    let rows = csv_rows(&csv);
    assert_eq!(rows[0], ["p1", "p2", "p_ro", "marked_probability", "shots"]);
    assert_eq!(rows.len(), 3);
    let clean: f64 = rows[1][3].parse().unwrap();
    let noisy: f64 = rows[2][3].parse().unwrap();
    assert!(clean > 0.85 && noisy < clean);
    assert!(summary.contains("ideal_marked_probability=0.945313"));
    let (json, _) = ok(&[&base[..], &["--format", "json"]].concat());
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    let (text, _) = ok(&[&base[..], &["--format", "text", "--transpiled"]].concat());
    assert!(text.contains("mode=transpiled"));
}

#[test]
fn transpile_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let routed = dir.path().join("routed.txt");
    let (text, _) = ok(&[
        "transpile",
        "--graph",
        "bipartite",
        "--circuit-out",
        routed.to_str().unwrap(),
    ]);
    assert!(text.contains("equivalent true"));
    let routed_text = std::fs::read_to_string(&routed).unwrap();
    assert!(routed_text.starts_with("qubits 15"));
    let (json, _) = ok(&[
        "transpile",
        "--graph",
        "hypercube",
        "--layout",
        "identity",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["stages"].as_array().unwrap().len(), 3);
    let source = dir.path().join("toffoli.txt");
    std::fs::write(&source, "qubits 3\nh 0\nccx 0 2 1\n").unwrap();
    let (csv, stderr) = ok(&["transpile", "--circuit", source.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(
        csv.lines().next().unwrap(),
        "stage,depth,total_gates,two_qubit_gates,swaps"
    );
    assert!(stderr.contains("equivalent=true"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# bipartite search\ngraph = bipartite\nmarked = 011\nmax_iters = 3\n").unwrap();
    let (_, summary) = ok(&["hitting-time", "--config", cfg.to_str().unwrap()]);
    assert_eq!(summary_field(&summary, "hitting_time"), "2");
    let (out, _) = ok(&["hitting-time", "--config", cfg.to_str().unwrap(), "--max-iters", "1"]);
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let (stdout, _) = ok(&[
        "hitting-time",
        "--graph",
        "bipartite",
        "--marked",
        "011",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(stdout.is_empty());
    assert!(Path::new(&path).exists());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("iteration,"));
}

#[test]
fn errors_are_structured_and_nonzero() {
    let cases: [(&[&str], &str); 6] = [
        (&["search", "--graph", "ring", "--marked", "01"], "error[argument]"),
        (
            &["search", "--graph", "hypercube", "--size", "3", "--marked", "001"],
            "error[",
        ),
        (&["search", "--graph", "hypercube", "--marked", "10110"], "error["),
        (&["search", "--graph", "hypercube"], "--marked"),
        (
            &["noise", "--graph", "bipartite", "--marked", "011", "--noise", "0.5,2,0"],
            "error[",
        ),
        (&["transpile", "--circuit", "/nonexistent/circuit.txt"], "error[io]"),
    ];
    for (args, needle) in cases {
        let out = qwalk(args);
        assert!(!out.status.success(), "{args:?}");
        let stderr = String::from_utf8(out.stderr).unwrap();
        assert!(stderr.contains(needle), "{args:?}: {stderr}");
    }
}

#[test]
fn bad_config_reports_line_and_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "graph = hypercube\ncolour = blue\n").unwrap();
    let out = qwalk(&["hitting-time", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 2") && stderr.contains("colour"), "{stderr}");
}
