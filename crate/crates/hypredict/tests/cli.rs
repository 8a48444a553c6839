//! End-to-end tests of the `hypredict` binary: exit codes, file artifacts,
//! and the train → evaluate round trip, all through real process spawns.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hypredict::hgraph::io::save_hypergraph;
use hypredict::hgraph::Hypergraph;
use hypredict::negsample::NegativeSet;

/// Invokes the compiled binary with the given arguments.
fn hypredict(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypredict"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

/// Runs the binary, asserts success, and returns captured stdout.
fn run_ok(args: &[&str]) -> String {
    let out = hypredict(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "expected success for {args:?}; stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout should be UTF-8")
}

fn code(args: &[&str]) -> i32 {
    hypredict(args).status.code().expect("process should exit normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("temp paths should be UTF-8")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["train", "--help"]), 0);

    let help = hypredict(&["--help"]);
    let text = String::from_utf8_lossy(&help.stdout);
    for sub in ["synth", "ingest", "split", "sample-negatives", "augment", "train", "evaluate", "gradcheck"] {
        assert!(text.contains(sub), "--help should list the {sub} subcommand");
    }
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();

    // Argument-level mistakes, caught before any work happens.
    assert_eq!(code(&["--definitely-not-a-flag"]), 1);
    assert_eq!(code(&["train"]), 1, "missing required arguments");
    let out = path_str(&dir.path().join("g.json")).to_string();
    assert_eq!(code(&["synth", "--preset", "enormous", "--out", &out]), 1, "unknown preset");

    // Validation-level mistakes: well-formed invocation, invalid request.
    run_ok(&["synth", "--preset", "tiny", "--out", &out]);
    let negs = path_str(&dir.path().join("n.json")).to_string();
    assert_eq!(
        code(&["sample-negatives", "--dataset", &out, "--regime", "sns", "--count", "1", "--size", "1", "--out", &negs]),
        1,
        "candidates of size < 2 are rejected"
    );

    // A config file with an unknown key is refused, not silently ignored.
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, r#"{"betaa": 0.25}"#).unwrap();
    let run_dir = path_str(&dir.path().join("run")).to_string();
    assert_eq!(
        code(&["train", "--dataset", &out, "--config", path_str(&cfg), "--out-dir", &run_dir]),
        1
    );
}

#[test]
fn sampler_exhaustion_exits_two() {
    // Two nodes and their only possible hyperedge: every attempted swap
    // reproduces an observed hyperedge, so the sampler must give up.
    let dir = tempfile::tempdir().unwrap();
    let h = Hypergraph::new(2, vec![vec![0, 1]], vec![vec![1.0], vec![1.0]]).unwrap();
    let graph = dir.path().join("pair.json");
    save_hypergraph(&h, &graph).unwrap();

    let negs = path_str(&dir.path().join("n.json")).to_string();
    let out = hypredict(&[
        "sample-negatives",
        "--dataset",
        path_str(&graph),
        "--regime",
        "cns",
        "--count",
        "1",
        "--size",
        "2",
        "--out",
        &negs,
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("error:"), "runtime failures report on stderr, got: {stderr}");
}

#[test]
fn citation_ingest_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let content = dir.path().join("toy.content");
    let cites = dir.path().join("toy.cites");
    fs::write(&content, "a\t1 0\tml\nb\t0 1\tdb\nc\t1 1\tml\nd\t0 0\tdb\n").unwrap();
    // a and b cite each other, so their hyperedges merge; c cites only
    // itself, a kept singleton; the two pairs naming unknown ids dangle.
    fs::write(&cites, "a b\nb a\nc c\nz a\nx d\n").unwrap();

    let graph = dir.path().join("toy.json");
    let stdout = run_ok(&[
        "ingest",
        "--content",
        path_str(&content),
        "--cites",
        path_str(&cites),
        "--out",
        path_str(&graph),
    ]);
    assert!(stdout.contains("nodes / hyperedges / features: 4 / 2 / 2"), "stdout: {stdout}");
    assert!(stdout.contains("singletons kept 1, duplicates merged 1, dangling citations 2"), "stdout: {stdout}");

    let h = hypredict::hgraph::io::load_hypergraph(&graph).unwrap();
    assert_eq!(h.num_nodes(), 4);
    assert_eq!(h.edges(), [vec![0, 1], vec![2]]);
    assert_eq!(h.node_labels(), Some(&["a".to_string(), "b".into(), "c".into(), "d".into()][..]));
}

#[test]
fn sampled_negatives_file_is_a_valid_negative_set() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path_str(&dir.path().join("g.json")).to_string();
    let negs = dir.path().join("n.json");
    run_ok(&["synth", "--preset", "tiny", "--seed", "3", "--out", &graph]);
    run_ok(&[
        "sample-negatives",
        "--dataset",
        &graph,
        "--regime",
        "mns",
        "--count",
        "12",
        "--size",
        "3",
        "--seed",
        "9",
        "--out",
        path_str(&negs),
    ]);

    let set: NegativeSet = serde_json::from_str(&fs::read_to_string(&negs).unwrap()).unwrap();
    assert_eq!(set.seed, 9);
    assert_eq!(set.candidates.len(), 12);
    assert!(set.candidates.iter().all(|c| c.len() == 3));
}

#[test]
fn train_then_evaluate_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path_str(&dir.path().join("g.json")).to_string();
    run_ok(&["synth", "--preset", "tiny", "--seed", "1", "--out", &graph]);

    let run_dir = dir.path().join("run");
    let stdout = run_ok(&[
        "train",
        "--dataset",
        &graph,
        "--out-dir",
        path_str(&run_dir),
        "--epochs",
        "3",
        "--dim",
        "8",
        "--seed",
        "4",
    ]);
    assert!(stdout.contains("config: ablation ALL, beta 0.5, dim 8, epochs 3, seed 4"), "stdout: {stdout}");
    assert!(stdout.contains("best epoch"), "stdout: {stdout}");

    for artifact in ["config.json", "split.json", "checkpoint.json", "metrics.csv", "report.json", "report.txt"] {
        assert!(run_dir.join(artifact).exists(), "train should write {artifact}");
    }
    let csv = fs::read_to_string(run_dir.join("metrics.csv")).unwrap();
    assert!(csv.starts_with("epoch,l_pred,l_con,val_auroc_sns,val_auroc_mns,val_auroc_cns,val_auroc_mix,val_auroc_avg\n"));
    assert_eq!(csv.lines().count(), 4, "header plus one row per epoch");

    // Evaluating the stored checkpoint under the echoed config and split
    // must land on exactly the metrics the training run reported.
    let eval_dir = dir.path().join("eval");
    run_ok(&[
        "evaluate",
        "--dataset",
        &graph,
        "--split-file",
        path_str(&run_dir.join("split.json")),
        "--config",
        path_str(&run_dir.join("config.json")),
        "--checkpoint",
        path_str(&run_dir.join("checkpoint.json")),
        "--out-dir",
        path_str(&eval_dir),
    ]);

    let trained: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run_dir.join("report.json")).unwrap()).unwrap();
    let evaluated: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(eval_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(trained["val"], evaluated["val"]);
    assert_eq!(trained["test"], evaluated["test"]);
    assert!(trained["best_epoch"].is_number());
    assert!(evaluated["best_epoch"].is_null(), "a stored checkpoint has no best epoch");
}

#[test]
fn same_seed_runs_write_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path_str(&dir.path().join("g.json")).to_string();
    run_ok(&["synth", "--preset", "tiny", "--seed", "2", "--out", &graph]);

    let train_into = |name: &str, seed: &str| {
        let run_dir = dir.path().join(name);
        run_ok(&[
            "train", "--dataset", &graph, "--out-dir", path_str(&run_dir),
            "--epochs", "2", "--dim", "8", "--seed", seed,
        ]);
        run_dir
    };
    let a = train_into("a", "7");
    let b = train_into("b", "7");
    let c = train_into("c", "8");

    for artifact in ["config.json", "split.json", "checkpoint.json", "metrics.csv", "report.json", "report.txt"] {
        assert_eq!(
            fs::read(a.join(artifact)).unwrap(),
            fs::read(b.join(artifact)).unwrap(),
            "same seed must reproduce {artifact} byte for byte"
        );
    }
    assert_ne!(
        fs::read(a.join("metrics.csv")).unwrap(),
        fs::read(c.join("metrics.csv")).unwrap(),
        "a different seed must actually change the run"
    );
}

#[test]
fn gradcheck_smoke_passes() {
    let stdout = run_ok(&["gradcheck", "--dim", "4", "--seeds", "1"]);
    assert!(stdout.contains("gradcheck passed for 1 seed(s)"), "stdout: {stdout}");
}
