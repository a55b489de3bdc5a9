//! Pipeline determinism gate: the full build -> split -> render chain,
//! rerun under one config and again under a different worker count,
//! must produce byte-identical outputs.

use std::path::{Path, PathBuf};
use std::process::Command;

const SOURCE_FILES: &[&str] = &[
    "reactions.txt",
    "molecules.csv",
    "props_esol.csv",
    "props_bbbp.csv",
    "names.tsv",
    "templates.json",
    "pipeline.json",
];

const OUTPUT_FILES: &[&str] = &[
    "records.jsonl",
    "rejects.jsonl",
    "stats.json",
    "leakage_audit.json",
    "samples.jsonl",
];

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Copies the fixture tree so runs write next to their own config.
fn stage(dir: &Path) -> PathBuf {
    for name in SOURCE_FILES {
        std::fs::copy(fixture_dir().join(name), dir.join(name)).expect("fixture copies");
    }
    dir.join("pipeline.json")
}

fn run_pipeline(config: &Path, jobs: usize) {
    for subcommand in ["build", "split", "render"] {
        let output = Command::new(env!("CARGO_BIN_EXE_molforge"))
            .args([subcommand, "--config"])
            .arg(config)
            .args(["--jobs", &jobs.to_string()])
            .output()
            .expect("pipeline step runs");
        assert!(
            output.status.success(),
            "{subcommand} failed: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    }
}

fn snapshot(out_dir: &Path) -> Vec<(String, Vec<u8>)> {
    OUTPUT_FILES
        .iter()
        .map(|name| {
            let bytes = std::fs::read(out_dir.join(name)).expect("output file exists");
            assert!(!bytes.is_empty(), "{name} must not be empty");
            (name.to_string(), bytes)
        })
        .collect()
}

#[test]
fn criterion_8_pipeline_rerun_and_worker_count_are_byte_identical() {
    let first = tempfile::tempdir().expect("tempdir");
    let config = stage(first.path());
    run_pipeline(&config, 1);
    let baseline = snapshot(&first.path().join("out"));

    // Same config, same paths: a rerun overwrites with identical bytes.
    run_pipeline(&config, 1);
    let rerun = snapshot(&first.path().join("out"));
    for ((name, before), (_, after)) in baseline.iter().zip(&rerun) {
        assert_eq!(before, after, "{name} changed across rerun");
    }

    // Fresh tree, eight workers: thread count must not leak into output.
    let second = tempfile::tempdir().expect("tempdir");
    let config = stage(second.path());
    run_pipeline(&config, 8);
    let parallel = snapshot(&second.path().join("out"));
    for ((name, before), (_, after)) in baseline.iter().zip(&parallel) {
        assert_eq!(before, after, "{name} differs between --jobs 1 and --jobs 8");
    }
}
