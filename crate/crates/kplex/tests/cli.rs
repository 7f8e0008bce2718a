//! End-to-end tests of the `kplex` binary.

use kplex::graph::Graph;
use kplex::oracle::{enumerate_naive, PlexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kplex"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_graph(path: &Path, g: &Graph) {
    let mut buf = Vec::new();
    kplex::graph::write_edge_list(g, &mut buf).unwrap();
    std::fs::write(path, buf).unwrap();
}

fn random_graph(seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 14;
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.gen_bool(0.5) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

fn parse_list_output(out: &[u8]) -> PlexSet {
    let text = String::from_utf8_lossy(out);
    PlexSet::from_sets(text.lines().filter(|l| !l.trim().is_empty()).map(|line| {
        line.split_whitespace()
            .map(|t| t.parse::<u64>().expect("vertex id"))
            .collect::<Vec<u64>>()
    }))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "expected success for {args:?}: stderr = {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn list_count_and_oracle_agree() {
    let g = random_graph(11);
    let input = scratch("cli_random.txt");
    write_graph(&input, &g);
    let input = input.to_str().unwrap();

    let oracle = enumerate_naive(&g, 2, 4).unwrap();

    let list = run_ok(&["--input", input, "-k", "2", "-q", "4", "--threads", "2"]);
    let listed = parse_list_output(&list.stdout);
    assert_eq!(listed, oracle);

    let count = run_ok(&[
        "--input", input, "-k", "2", "-q", "4", "--mode", "count", "--threads", "2",
    ]);
    let n: usize = String::from_utf8_lossy(&count.stdout).trim().parse().unwrap();
    assert_eq!(n, oracle.len());
    assert_eq!(n, listed.len());
}

#[test]
fn repeated_runs_are_identical() {
    let g = random_graph(23);
    let input = scratch("cli_repeat.txt");
    write_graph(&input, &g);
    let input = input.to_str().unwrap();
    let args = ["--input", input, "-k", "2", "-q", "3", "--threads", "4"];
    let first = parse_list_output(&run_ok(&args).stdout);
    let second = parse_list_output(&run_ok(&args).stdout);
    assert_eq!(first, second);
}

#[test]
fn output_file_and_stats() {
    let g = random_graph(37);
    let input = scratch("cli_outfile.txt");
    write_graph(&input, &g);
    let outfile = scratch("cli_results.txt");
    let out = run_ok(&[
        "--input",
        input.to_str().unwrap(),
        "-k",
        "1",
        "-q",
        "3",
        "--output",
        outfile.to_str().unwrap(),
        "--stats",
    ]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("plexes="), "stats line missing: {stderr}");
    assert!(stderr.contains("graph_load_ms="));
    let written = std::fs::read(&outfile).unwrap();
    let from_file = parse_list_output(&written);
    assert_eq!(from_file, enumerate_naive(&g, 1, 3).unwrap());
}

#[test]
fn comments_and_duplicates_in_input() {
    let input = scratch("cli_comments.txt");
    std::fs::write(&input, "# comment\n% other comment\n\n5 7\n7 5\n5 5\n7 9\n9 5\n").unwrap();
    let out = run_ok(&[
        "--input",
        input.to_str().unwrap(),
        "-k",
        "1",
        "-q",
        "3",
    ]);
    // {5,7,9} is a triangle using original ids.
    let listed = parse_list_output(&out.stdout);
    assert_eq!(listed.sets(), &[vec![5, 7, 9]]);
}

#[test]
fn zero_results_still_exit_zero() {
    let input = scratch("cli_zero.txt");
    std::fs::write(&input, "0 1\n1 2\n").unwrap();
    let out = run_ok(&[
        "--input",
        input.to_str().unwrap(),
        "-k",
        "1",
        "-q",
        "5",
        "--mode",
        "count",
    ]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0");
}

#[test]
fn rejects_bad_parameters() {
    let input = scratch("cli_params.txt");
    std::fs::write(&input, "0 1\n").unwrap();
    let path = input.to_str().unwrap();

    // q below 2k-1.
    let out = bin()
        .args(["--input", path, "-k", "3", "-q", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("2k-1"), "message should cite the bound: {stderr}");

    // k = 0.
    let out = bin()
        .args(["--input", path, "-k", "0", "-q", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Missing file.
    let out = bin()
        .args(["--input", "/nonexistent/graph.txt", "-k", "1", "-q", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Malformed line.
    let bad = scratch("cli_malformed.txt");
    std::fs::write(&bad, "0 1\n2 x\n").unwrap();
    let out = bin()
        .args(["--input", bad.to_str().unwrap(), "-k", "1", "-q", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "should report the line: {stderr}");
}

#[test]
fn ablation_flags_preserve_output() {
    let g = random_graph(53);
    let input = scratch("cli_ablation.txt");
    write_graph(&input, &g);
    let input = input.to_str().unwrap();
    let reference = parse_list_output(
        &run_ok(&["--input", input, "-k", "2", "-q", "4"]).stdout,
    );
    for extra in [
        vec!["--variant", "ours-p"],
        vec!["--variant", "basic"],
        vec!["--disable-ub"],
        vec!["--disable-pair-prune"],
        vec!["--disable-ub", "--disable-pair-prune", "--variant", "basic"],
        vec!["--timeout-ms", "0"],
        vec!["--timeout-ms", "0.001"],
    ] {
        let mut args = vec!["--input", input, "-k", "2", "-q", "4"];
        args.extend(extra.iter());
        let got = parse_list_output(&run_ok(&args).stdout);
        assert_eq!(got, reference, "flags {extra:?} changed the result set");
    }
}
