//! End-to-end tests driving the compiled binary: output shapes, exit
//! codes, and agreement between the text and JSON modes.

use spectree::{canonical_code, enumerate_tree_sequences, Tree};
use std::path::PathBuf;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    run_with_env(args, &[])
}

fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut command = Command::new(env!("CARGO_BIN_EXE_spectree"));
    command.args(args).env_remove("SPECTREE_THREADS");
    for (key, value) in env {
        command.env(key, value);
    }
    let out = command.output().expect("binary runs");
    (
        out.status.code().expect("terminated normally"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

/// Writes a uniquely named scratch file and returns its path.
fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("spectree-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("scratch file writes");
    path
}

const IMPROVABLE_CATERPILLAR: &str = "# caterpillar with the spine leaf attached off-center\n\
     0 1\n1 2\n2 3\n3 4\n1 5\n";

#[test]
fn validate_prints_the_normalized_form() {
    let (code, stdout, _) = run(&["validate", "1,2,3,1,2,1"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "3^1,2^2,1^3\n");
}

#[test]
fn validate_rejects_a_bad_sum_with_exit_two() {
    let (code, stdout, stderr) = run(&["validate", "3,2,1"]);
    assert_eq!(code, 2);
    assert_eq!(stdout, "3^1,2^1,1^1\n", "normalized form is still printed");
    assert!(stderr.contains("not a tree sequence"), "stderr: {stderr}");
}

#[test]
fn validate_json_reports_the_check() {
    let (code, stdout, _) = run(&["validate", "2,2,1,1", "--output", "json"]);
    assert_eq!(code, 0);
    let value: serde_json::Value = stdout.parse().expect("stdout is JSON");
    assert_eq!(value["sequence"], "2^2,1^2");
    assert_eq!(value["n"], 4);
    assert_eq!(value["tree_sequence"], true);
}

#[test]
fn bfd_emits_the_eighteen_edge_example() {
    let (code, stdout, _) = run(&["bfd", "4^2,3^4,2^3,1^10", "--emit", "edges"]);
    assert_eq!(code, 0);
    let edges: Vec<(usize, usize)> = stdout
        .lines()
        .map(|line| {
            let mut parts = line.split_whitespace();
            let u = parts.next().unwrap().parse().unwrap();
            let v = parts.next().unwrap().parse().unwrap();
            (u, v)
        })
        .collect();
    assert_eq!(edges.len(), 18);
    let printed = Tree::from_edges(19, &edges).expect("output is a tree");
    let expected = Tree::from_edges(
        19,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 5),
            (1, 6),
            (1, 7),
            (2, 8),
            (2, 9),
            (3, 10),
            (3, 11),
            (4, 12),
            (4, 13),
            (5, 14),
            (5, 15),
            (6, 16),
            (7, 17),
            (8, 18),
        ],
    )
    .unwrap();
    assert_eq!(canonical_code(&printed), canonical_code(&expected));
}

#[test]
fn bfd_dot_output_is_wellformed() {
    let (code, stdout, _) = run(&["bfd", "3,2,2,1,1,1", "--emit", "dot"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("graph tree {"), "stdout: {stdout}");
    assert_eq!(stdout.matches(" -- ").count(), 5, "one connector per edge");
}

#[test]
fn eig_of_the_star_sequence_is_six() {
    let (code, stdout, _) = run(&["eig", "--seq", "5,1,1,1,1,1"]);
    assert_eq!(code, 0);
    let lambda = extract_text_number(&stdout, "lambda");
    assert!((lambda - 6.0).abs() < 1e-9, "lambda = {lambda}");
}

#[test]
fn eig_reads_edge_files_with_comments() {
    let path = scratch_file(
        "path4.edges",
        "# a path on four vertices\n0 1\n1 2\n\n2 3\n",
    );
    let (code, stdout, _) = run(&["eig", "--edges", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let lambda = extract_text_number(&stdout, "lambda");
    let expected = 2.0 + 2.0_f64.sqrt();
    assert!((lambda - expected).abs() < 1e-9, "lambda = {lambda}");
}

#[test]
fn eig_requires_exactly_one_input() {
    let (code, _, _) = run(&["eig"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["eig", "--seq", "1,1", "--edges", "nowhere.txt"]);
    assert_eq!(code, 2);
}

#[test]
fn eig_text_and_json_agree_bit_for_bit() {
    let (code, text, _) = run(&["eig", "--seq", "4,3,2,2,1,1,1,1,1"]);
    assert_eq!(code, 0);
    let (code, json, _) = run(&["eig", "--seq", "4,3,2,2,1,1,1,1,1", "--output", "json"]);
    assert_eq!(code, 0);
    let from_text = extract_text_number(&text, "lambda");
    let value: serde_json::Value = json.parse().expect("stdout is JSON");
    let from_json = value["lambda"].as_f64().expect("lambda is a number");
    assert_eq!(from_text.to_bits(), from_json.to_bits());
    assert!(json.contains('e'), "doubles use exponent notation: {json}");
}

#[test]
fn eig_dense_flag_respects_the_cap_with_exit_three() {
    let (code, _, stderr) = run(&["eig", "--seq", "9,1^9", "--dense", "--dense-cap", "5"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("above the cap"), "stderr: {stderr}");
}

#[test]
fn improve_walks_to_the_class_maximizer_and_logs_steps() {
    let edges = scratch_file("improvable.edges", IMPROVABLE_CATERPILLAR);
    let log = std::env::temp_dir().join(format!("spectree-cli-{}-steps.json", std::process::id()));
    let (code, stdout, _) = run(&[
        "improve",
        "--edges",
        edges.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
        "--output",
        "json",
    ]);
    assert_eq!(code, 0);
    let value: serde_json::Value = stdout.parse().expect("stdout is JSON");
    let final_lambda = value["final_lambda"].as_f64().unwrap();
    assert!(
        (final_lambda - 4.302775637731995).abs() < 1e-9,
        "final lambda = {final_lambda}"
    );
    assert!(value["step_count"].as_u64().unwrap() >= 1);

    let logged: serde_json::Value = std::fs::read_to_string(&log)
        .expect("log written")
        .parse()
        .expect("log is JSON");
    let steps = logged.as_array().expect("log is an array");
    assert_eq!(steps.len() as u64, value["step_count"].as_u64().unwrap());
    for step in steps {
        let before = step["lambda_before"].as_f64().unwrap();
        let after = step["lambda_after"].as_f64().unwrap();
        assert!(after > before, "accepted steps strictly increase lambda");
    }
}

#[test]
fn improve_accepts_a_maximizer_without_steps() {
    let edges = scratch_file(
        "extremal.edges",
        "# balanced caterpillar, already extremal\n0 1\n1 2\n2 3\n3 4\n2 5\n",
    );
    let (code, stdout, _) = run(&[
        "improve",
        "--edges",
        edges.to_str().unwrap(),
        "--output",
        "json",
    ]);
    assert_eq!(code, 0);
    let value: serde_json::Value = stdout.parse().expect("stdout is JSON");
    assert_eq!(value["step_count"], 0);
    assert_eq!(
        value["initial_lambda"].as_f64().unwrap().to_bits(),
        value["final_lambda"].as_f64().unwrap().to_bits()
    );
}

#[test]
fn chain_reports_the_single_shift_example() {
    let (code, stdout, _) = run(&["chain", "2,2,1,1", "3,1,1,1", "--output", "json"]);
    assert_eq!(code, 0);
    let value: serde_json::Value = stdout.parse().expect("stdout is JSON");
    assert_eq!(value["step_count"], 1);
    let initial = value["initial_lambda"].as_f64().unwrap();
    let final_lambda = value["final_lambda"].as_f64().unwrap();
    assert!((initial - (2.0 + 2.0_f64.sqrt())).abs() < 1e-9);
    assert!((final_lambda - 4.0).abs() < 1e-9);
}

#[test]
fn chain_rejects_incomparable_sequences_with_exit_two() {
    let (code, _, stderr) = run(&["chain", "3,1,1,1", "2,2,1,1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("not comparable"), "stderr: {stderr}");
}

#[test]
fn verify_thm2_example_passes() {
    let (code, stdout, _) = run(&["verify", "thm2", "2,2,1,1", "3,1,1,1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("pass"), "stdout: {stdout}");
    assert!(
        stdout.contains('<'),
        "the eigenvalues are reported: {stdout}"
    );
}

#[test]
fn verify_thm2_with_absurd_tolerance_fails_with_witness() {
    let (code, stdout, _) = run(&["verify", "thm2", "2,2,1,1", "3,1,1,1", "--tolerance", "10"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("FAIL"), "stdout: {stdout}");
    assert!(stdout.contains("witness"), "stdout: {stdout}");
}

#[test]
fn verify_thm1_and_corollaries_pass_on_small_instances() {
    for args in [
        vec!["verify", "thm1", "3,2,2,1,1,1"],
        vec!["verify", "cor3", "5"],
        vec!["verify", "cor4", "6", "2"],
    ] {
        let (code, stdout, _) = run(&args);
        assert_eq!(code, 0, "{args:?}: {stdout}");
        assert!(stdout.contains("pass"), "{args:?}: {stdout}");
    }
}

#[test]
fn verify_sweep_covers_every_class_and_passes() {
    let (code, stdout, _) = run(&["verify", "sweep", "--max-n", "6", "--output", "json"]);
    assert_eq!(code, 0);
    let value: serde_json::Value = stdout.parse().expect("stdout is JSON");
    let expected: usize = (2..=6)
        .map(|n| enumerate_tree_sequences(n).unwrap().len())
        .sum();
    assert_eq!(value["classes"].as_u64().unwrap() as usize, expected);
    assert_eq!(value["failed"], 0);
    let reports = value["reports"].as_array().expect("reports array");
    assert_eq!(reports.len(), expected);
    assert!(reports.iter().all(|r| r["passed"] == true));
}

#[test]
fn sweep_honors_the_threads_environment_variable() {
    let (code, stdout, _) = run_with_env(
        &["verify", "sweep", "--max-n", "5"],
        &[("SPECTREE_THREADS", "2")],
    );
    assert_eq!(code, 0, "stdout: {stdout}");
    let (code, _, stderr) = run_with_env(&["validate", "1,1"], &[("SPECTREE_THREADS", "nope")]);
    assert_eq!(code, 2);
    assert!(stderr.contains("SPECTREE_THREADS"), "stderr: {stderr}");
}

#[test]
fn config_invariants_are_enforced() {
    for args in [
        vec!["eig", "--seq", "1,1", "--tolerance", "0"],
        vec!["eig", "--seq", "1,1", "--tolerance", "-1e-9"],
        vec!["bfd", "1,1", "--dense-cap", "0"],
        vec!["verify", "thm1", "1,1", "--enum-budget", "0"],
        vec!["validate", "1,1", "--threads", "0"],
    ] {
        let (code, _, stderr) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(stderr.contains("error"), "{args:?}: {stderr}");
    }
}

#[test]
fn bench_subcommands_report_timings() {
    let (code, stdout, _) = run(&[
        "bench", "bfd", "--n", "1000", "--reps", "2", "--output", "json",
    ]);
    assert_eq!(code, 0);
    let value: serde_json::Value = stdout.parse().expect("stdout is JSON");
    assert_eq!(value["task"], "bfd");
    assert!(value["min_seconds"].as_f64().unwrap() > 0.0);

    let (code, stdout, _) = run(&["bench", "eig", "--n", "500", "--reps", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("lambda:"), "stdout: {stdout}");
}

#[test]
fn budget_exhaustion_exits_three() {
    let (code, _, stderr) = run(&["verify", "thm1", "2^8,1^2", "--enum-budget", "10"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("budget"), "stderr: {stderr}");
}

fn extract_text_number(stdout: &str, key: &str) -> f64 {
    let prefix = format!("{key}: ");
    stdout
        .lines()
        .find_map(|line| line.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} line in {stdout}"))
        .parse()
        .expect("number parses")
}
