use std::process::Command;

use popgraph::cli::main_with;
use popgraph::engine::Trace;
use popgraph::graph::{generate, parse_graph_file};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with(std::iter::once("popgraph").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn run_examples() {
    let (code, out, _) = cli(&["run", "--protocol", "tree-id", "--graph", "tree:10:7", "--scheduler", "random:42"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("verdict: converged yes\n"), "{out}");

    let (code, out, _) = cli(&["run", "--protocol", "star-id:n=6", "--graph", "star:6", "--scheduler", "rr"]);
    assert_eq!(code, 0);
    assert!(out.contains("converged yes"));

    let (code, out, _) = cli(&["run", "--protocol", "kreg-id:k=2,bound=8", "--graph", "line:4", "--scheduler", "random:1"]);
    assert_eq!(code, 0);
    assert!(out.contains("converged no"));
    assert!(out.contains("outputs: yes=0 no=4 [nnnn]"));
}

#[test]
fn run_timeout_and_usage_errors() {
    let (code, out, _) = cli(&["run", "--protocol", "kreg-id:k=2,bound=4", "--graph", "ring:4", "--max-steps", "50", "--window", "50"]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("timeout"));

    assert_eq!(cli(&["run", "--protocol", "tree-id"]).0, 1);
    assert_eq!(cli(&["run", "--protocol", "bogus", "--graph", "line:3"]).0, 1);
    assert_eq!(cli(&["run", "--protocol", "tree-id", "--graph", "line:3", "--scheduler", "sometimes"]).0, 1);
    assert_eq!(cli(&["run", "--protocol", "tree-id", "--graph", "line:3", "--max-steps", "10", "--window", "11"]).0, 1);
    assert_eq!(cli(&["--help"]).0, 0);
}

#[test]
fn run_writes_a_replayable_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.json");
    let (code, _, _) =
        cli(&["run", "--protocol", "star-id", "--graph", "star:5", "--scheduler", "random:3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let trace = Trace::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let g = generate(&"star:5".parse().unwrap()).unwrap();
    let p = popgraph::protocols::star_id(5).unwrap();
    assert_eq!(popgraph::engine::replay(&p, &g, &trace).unwrap().0, trace.final_config);
    assert_eq!(trace.steps.len() as u64, trace.steps_taken);
}

#[test]
fn check_stable_examples() {
    let (code, out, _) = cli(&["check-stable", "--protocol", "tree-id", "--graph", "line:3"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"verdict\": \"all-yes-stable\""));
    let (code, out, _) = cli(&["check-stable", "--protocol", "tree-id", "--graph", "ring:3"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"verdict\": \"all-no-stable\""));
    let (code, _, err) = cli(&["check-stable", "--protocol", "tree-id", "--graph", "ring:30", "--cap", "1000"]);
    assert_eq!(code, 3);
    assert!(err.contains("cap"));
}

#[test]
fn impossibility_examples() {
    for kind in ["weak-double", "line-ring", "bipartite", "arbitrary-init"] {
        let (code, out, err) = cli(&["impossibility", kind, "--protocol", "tree-id"]);
        assert_eq!(code, 0, "{kind}: {err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["passed"], true, "{kind}");
    }
    let (_, out, _) = cli(&["impossibility", "arbitrary-init", "--graph", "ring:4", "--edge", "0-1"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["base_output"], "no");
    assert_eq!(v["reduced_classes"]["tree"], true);

    let (code, _, _) = cli(&["impossibility", "weak-double", "--graph", "line:3", "--max-steps", "3"]);
    assert_eq!(code, 3, "search budget too small");
    assert_eq!(cli(&["impossibility", "arbitrary-init", "--graph", "line:3", "--edge", "0-1"]).0, 1);
}

#[test]
fn sweep_csv_and_exit_codes() {
    let (code, out, _) =
        cli(&["sweep", "--protocol", "star-id", "--graph", "star", "--scheduler", "rr", "--sizes", "3..=8", "--seeds", "0"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "family,n,seed,verdict,steps");
    assert_eq!(lines.len(), 7);
    assert!(lines[1..].iter().all(|l| l.contains("converged yes")));

    let args = ["sweep", "--protocol", "tree-id", "--graph", "tree", "--sizes", "2..6", "--seeds", "0..3"];
    let (code, out, _) = cli(&args);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out, cli(&args).1, "byte-stable given the seeds");

    // Quiet all-yes outputs on a ring are read as convergence before any
    // trial has succeeded.
    let (code, _, _) = cli(&["sweep", "--protocol", "tree-id", "--graph", "ring", "--sizes", "5", "--seeds", "0"]);
    assert_eq!(code, 4);
}

#[test]
fn gen_graph_writes_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    assert_eq!(cli(&["gen-graph", "--graph", "petersen", "--out", path.to_str().unwrap()]).0, 0);
    let g = parse_graph_file(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(g, generate(&"petersen".parse().unwrap()).unwrap());
    let spec = format!("file:{}", path.display());
    let (code, out, _) =
        cli(&["run", "--protocol", "kreg-id:k=3,bound=10", "--graph", &spec, "--max-steps", "2000000", "--window", "200000"]);
    assert_eq!(code, 0);
    assert!(out.contains("converged yes"), "{out}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_popgraph");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(status(&["check-stable", "--protocol", "tree-id", "--graph", "line:4"]), 0);
    assert_eq!(status(&["check-stable", "--protocol", "tree-id", "--graph", "ring:30", "--cap", "10"]), 3);
    assert_eq!(status(&["run", "--graph", "line:3"]), 1);
    assert_eq!(status(&["-p", "tree-id"]), 1);
}
