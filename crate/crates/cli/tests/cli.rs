use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use scd_core::io::DecompositionJson;

fn scd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scd"))
        .args(args)
        .output()
        .expect("spawn scd")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn tree_has_no_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tree.txt");
    fs::write(&input, "p scd 4 3\n0 1\n1 2\n1 3\n").unwrap();
    let out = scd(&["decompose", "--input", p(&input), "--c", "1", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: DecompositionJson = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json.cycles.is_empty());
    assert_eq!(json.leftover, vec![0, 1, 2]);
}

#[test]
fn torus_pipeline_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("torus.txt");
    let dec = dir.path().join("torus.json");
    let out = scd(&["gen", "--model", "torus", "--n", "16", "--seed", "1", "--output", p(&graph)]);
    assert_eq!(out.status.code(), Some(0));
    let out = scd(&[
        "decompose", "--input", p(&graph), "--c", "1", "--seed", "3", "--output", p(&dec), "--stats",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cycles="));
    let out = scd(&[
        "verify", "--graph", p(&graph), "--decomposition", p(&dec), "--k-hat", "320", "--l-max", "64",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["valid"], true);
}

#[test]
fn duplicated_edge_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let dec = dir.path().join("g.json");
    fs::write(&graph, "p scd 3 6\n0 1\n1 2\n2 0\n0 1\n1 2\n2 0\n").unwrap();
    let out = scd(&["decompose", "--input", p(&graph), "--c", "1", "--seed", "0", "--output", p(&dec)]);
    assert_eq!(out.status.code(), Some(0));
    // Leftover is everything: duplicate an id inside it.
    let mut json: DecompositionJson = serde_json::from_slice(&fs::read(&dec).unwrap()).unwrap();
    let first = json.leftover[0];
    json.leftover.push(first);
    fs::write(&dec, serde_json::to_string(&json).unwrap()).unwrap();
    let out = scd(&[
        "verify", "--graph", p(&graph), "--decomposition", p(&dec), "--k-hat", "60", "--l-max", "3",
    ]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("duplicate_edge"));
}

#[test]
fn decomposition_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let out = scd(&[
        "gen", "--model", "gnm", "--n", "200", "--m", "8000", "--seed", "5", "--output", p(&graph),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let run = || {
        let out = scd(&["decompose", "--input", p(&graph), "--c", "2", "--seed", "11"]);
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<DecompositionJson>(&out.stdout).unwrap().canonical_string()
    };
    assert_eq!(run(), run());
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let cfg = dir.path().join("engine.toml");
    fs::write(&graph, "p scd 2 2\n0 1\n0 1\n").unwrap();
    fs::write(&cfg, "c = 3\nseed = 9\nsmall_n_cutoff = 50\n").unwrap();
    let out = scd(&["decompose", "--input", p(&graph), "--config", p(&cfg), "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let json: DecompositionJson = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((json.c, json.seed), (3, 4));

    fs::write(&cfg, "colour = 1\n").unwrap();
    let out = scd(&["decompose", "--input", p(&graph), "--config", p(&cfg)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = scd(&[
        "bench", "--models", "gnm,torus", "--sizes", "64,256", "--c", "1,2", "--seeds", "2", "--output", p(&csv),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "model,n,m,c,seed,wall_ms,k_hat_observed,max_cycle_length,rounds,ldd_retries"
    );
    assert_eq!(lines.count(), 2 * 2 * 2 * 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    assert_eq!(scd(&["decompose", "--input", p(&missing), "--c", "1"]).status.code(), Some(1));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "p scd 2 2\n0 1\n").unwrap();
    assert_eq!(scd(&["decompose", "--input", p(&bad), "--c", "1"]).status.code(), Some(1));

    assert_eq!(scd(&["decompose", "--bogus"]).status.code(), Some(64));
    assert_eq!(scd(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(scd(&[]).status.code(), Some(64));

    let good = dir.path().join("good.txt");
    fs::write(&good, "p scd 2 1\n0 1\n").unwrap();
    assert_eq!(scd(&["decompose", "--input", p(&good), "--c", "0"]).status.code(), Some(64));
    assert_eq!(scd(&["decompose", "--input", p(&good), "--beta", "1/0"]).status.code(), Some(64));
    assert_eq!(scd(&["gen", "--model", "cube", "--n", "8"]).status.code(), Some(64));
    assert_eq!(scd(&["gen", "--model", "d_regular", "--n", "5", "--d", "3"]).status.code(), Some(64));
    assert_eq!(scd(&["--help"]).status.code(), Some(0));
}

#[test]
fn engine_failure_still_writes_partial() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let cfg = dir.path().join("tight.toml");
    let dec = dir.path().join("out.json");
    let out = scd(&[
        "gen", "--model", "gnm", "--n", "300", "--m", "9000", "--seed", "1", "--output", p(&graph),
    ]);
    assert_eq!(out.status.code(), Some(0));
    // A diameter cap no clustering can meet.
    fs::write(&cfg, "ldd_diam_constant = 0.001\nldd_max_retries = 1\nsmall_n_cutoff = 10\n").unwrap();
    let out = scd(&[
        "decompose", "--input", p(&graph), "--config", p(&cfg), "--c", "2", "--output", p(&dec),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let json: DecompositionJson = serde_json::from_slice(&fs::read(&dec).unwrap()).unwrap();
    let covered: usize = json.cycles.iter().map(Vec::len).sum();
    assert_eq!(covered + json.leftover.len(), 9000);
}
