use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tiling-lab"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn gen_then_count_balanced() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["gen", "balanced:r=3,n=3", "-o", "g.txt"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("g.txt")).unwrap();
    assert!(text.starts_with("c tiling-lab gen balanced:r=3,n=3\n"));
    assert!(dir.path().join("g.txt.meta.json").exists());
    let out = run(dir.path(), &["count-subsets", "g.txt", "--r", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "tiling-lab/1");
    assert_eq!(v["result"]["count_with_empty"], 56);
}

#[test]
fn check_factor_on_c5() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c5.txt"), "p 5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    let out = run(dir.path(), &["check-factor", "c5.txt", "--r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["exists"], "false");
}

#[test]
fn pipeline_on_bad_partition_names_condition() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["gen", "balanced:r=3,n=3", "-o", "g.txt", "--partition-out", "p.json"],
    );
    assert!(out.status.success());
    let out = run(dir.path(), &["run-pipeline", "g.txt", "p.json", "--r", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("A2"));
}

#[test]
fn pipeline_on_planted_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "gen",
            "planted:r=3,n=4,s=1,seed=2",
            "-o",
            "g.txt",
            "--partition-out",
            "p.json",
        ],
    );
    assert!(out.status.success());
    let out = run(
        dir.path(),
        &["run-pipeline", "g.txt", "p.json", "--r", "3", "--trace", "t.jsonl"],
    );
    let v = json(&out);
    match out.status.code() {
        Some(0) => {
            assert_eq!(v["result"]["stage"], "Done");
            assert_eq!(v["result"]["factor"]["cliques"].as_array().unwrap().len(), 4);
        }
        Some(2) => assert!(v["result"]["failure"]["stage"].is_string()),
        other => panic!("exit {other:?}"),
    }
    let trace = std::fs::read_to_string(dir.path().join("t.jsonl")).unwrap();
    assert!(trace.lines().next().unwrap().contains("\"Init\""));
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "random-regular:r=3,n=4,seed=5", "-o", "g.txt"]);
    let a = run(
        dir.path(),
        &[
            "estimate-prob",
            "g.txt",
            "--r",
            "3",
            "--trials",
            "300",
            "--seed",
            "9",
            "--threads",
            "1",
        ],
    );
    let b = run(
        dir.path(),
        &[
            "estimate-prob",
            "g.txt",
            "--r",
            "3",
            "--trials",
            "300",
            "--seed",
            "9",
            "--threads",
            "3",
        ],
    );
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "random-regular:r=3,n=4,seed=5", "-o", "g.txt"]);
    std::fs::write(
        dir.path().join("c.toml"),
        "seed = 4\n[sampling]\ntrials = 50\np = 0.25\n",
    )
    .unwrap();
    let v = json(&run(
        dir.path(),
        &["--config", "c.toml", "estimate-prob", "g.txt", "--r", "3"],
    ));
    assert_eq!(v["result"]["trials"], 50);
    assert_eq!(v["result"]["seed"], 4);
    let v = json(&run(
        dir.path(),
        &[
            "--config",
            "c.toml",
            "estimate-prob",
            "g.txt",
            "--r",
            "3",
            "--trials",
            "70",
        ],
    ));
    assert_eq!(v["result"]["trials"], 70);
    std::fs::write(dir.path().join("bad.toml"), "trails = 3\n").unwrap();
    let out = run(
        dir.path(),
        &["--config", "bad.toml", "estimate-prob", "g.txt", "--r", "3"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["gen", "section6:r=3,n=5"]).status.code(), Some(1));
    assert_eq!(
        run(dir.path(), &["check-factor", "missing.txt", "--r", "2"])
            .status
            .code(),
        Some(1)
    );
    std::fs::write(dir.path().join("bad.txt"), "p 3 1\n0 7\n").unwrap();
    assert_eq!(
        run(dir.path(), &["check-factor", "bad.txt", "--r", "2"]).status.code(),
        Some(1)
    );
}

#[test]
fn exhausted_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "random-regular:r=3,n=6,d=9,seed=1", "-o", "g.txt"]);
    let out = run(dir.path(), &["--max-nodes", "1", "check-factor", "g.txt", "--r", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["exists"], "unknown");
}

#[test]
fn sweep_and_report() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "matching-in-parts:r=3,n=4", "-o", "m.txt"]);
    let out = run(
        dir.path(),
        &[
            "vc-sweep",
            "m.txt",
            "--r",
            "3",
            "--partitions",
            "12",
            "--seed",
            "3",
            "-o",
            "vc.json",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    run(dir.path(), &["count-subsets", "m.txt", "--r", "3", "-o", "cnt.json"]);
    let v = json(&run(dir.path(), &["report", "vc.json", "cnt.json"]));
    assert_eq!(v["result"]["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(v["result"]["inputs"][0]["document"]["result"]["holds"], true);
    let csv = run(dir.path(), &["report", "--csv", "vc.json", "cnt.json"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("cnt,3,exact,"));
}

#[test]
fn build_and_verify_partition() {
    let dir = tempfile::tempdir().unwrap();
    run(
        dir.path(),
        &[
            "gen",
            "planted:r=3,n=4,s=2,seed=1",
            "-o",
            "g.txt",
            "--partition-out",
            "p.json",
        ],
    );
    let v = json(&run(dir.path(), &["verify-partition", "g.txt", "p.json", "--r", "3"]));
    assert_eq!(v["result"]["good"], true);
    let out = run(
        dir.path(),
        &["build-partition", "g.txt", "--r", "3", "--partition-out", "b.json"],
    );
    let v = json(&out);
    assert!(v["result"]["outcome"]["status"].is_string());
    if out.status.code() == Some(0) {
        let w = json(&run(dir.path(), &["verify-partition", "g.txt", "b.json", "--r", "3"]));
        assert_eq!(w["result"]["good"], true);
    }
}

#[test]
fn find_sparse_on_small_graph() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["gen", "balanced:r=2,n=3", "-o", "g.txt"]);
    let v = json(&run(dir.path(), &["find-sparse", "g.txt", "--size", "3"]));
    assert_eq!(v["result"]["edges_inside"], 0);
    assert_eq!(v["result"]["is_exact"], true);
    let v = json(&run(
        dir.path(),
        &[
            "find-sparse",
            "g.txt",
            "--size",
            "4",
            "--gamma",
            "0.1",
            "--n-scale",
            "3",
        ],
    ));
    assert_eq!(v["result"]["verdict"], "false");
}
