//! End-to-end tests of the `snc` binary: command output, file artifacts,
//! exit codes, and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn snc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snc")).args(args).output().expect("binary runs")
}

fn snc_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snc"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn mincut_reports_capacity_and_primary_cut() {
    let net = data("fig3.net");
    let out = snc(&["mincut", net.to_str().unwrap(), "--set", "e10"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("min-cut capacity: 1"));
    assert!(text.contains("minimum cut: {e9}"));
    assert!(text.contains("primary: no"));
}

#[test]
fn mincut_rejects_unknown_edges() {
    let net = data("fig3.net");
    let out = snc(&["mincut", net.to_str().unwrap(), "--set", "e99"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("e99"));
}

#[test]
fn primary_sets_lists_the_collection() {
    let net = data("fig3.net");
    let out = snc(&["primary-sets", net.to_str().unwrap(), "--security", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("C_min: 3"));
    assert!(text.contains("|A_1| = 5"));
    for set in ["{e1}", "{e2}", "{e3}", "{e4}", "{e9}"] {
        assert!(text.contains(set), "missing {set} in:\n{text}");
    }
    assert!(!text.contains("{e5}"));
}

#[test]
fn verify_passes_on_the_benchmark_code_with_oracle() {
    let out = snc(&[
        "verify",
        data("fig3.net").to_str().unwrap(),
        "--kernels",
        data("fig3.kern").to_str().unwrap(),
        "--q",
        data("fig3.Q").to_str().unwrap(),
        "--rate",
        "2",
        "--security",
        "1",
        "--oracle",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.matches("PASS").count(), 5, "{text}"); // 4 checks + RESULT
    assert!(text.contains("RESULT: PASS"));
}

#[test]
fn verify_fails_when_the_dimension_cannot_afford_the_split() {
    let out = snc(&[
        "verify",
        data("fig3.net").to_str().unwrap(),
        "--kernels",
        data("fig3.kern").to_str().unwrap(),
        "--q",
        data("fig3.Q").to_str().unwrap(),
        "--rate",
        "2",
        "--security",
        "2",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("RESULT: FAIL"));
}

#[test]
fn verify_respects_the_budget_env_var() {
    let out = snc_env(
        &[
            "verify",
            data("fig3.net").to_str().unwrap(),
            "--kernels",
            data("fig3.kern").to_str().unwrap(),
            "--q",
            data("fig3.Q").to_str().unwrap(),
            "--rate",
            "2",
            "--security",
            "1",
            "--oracle",
        ],
        "SNC_BUDGET",
        "10",
    );
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("budget"), "{text}");
    assert!(text.contains("RESULT: FAIL"));
}

#[test]
fn family_builds_and_verifies_with_best_effort() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("family");
    let out = snc(&[
        "family",
        data("fig3.net").to_str().unwrap(),
        "--security",
        "1",
        "--seed",
        "7",
        "--best-effort",
        "--kernels",
        data("fig3.kern").to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = std::fs::read_to_string(out_dir.join("report.txt")).unwrap();
    assert!(report.contains("|A_1| = 5"));
    assert!(report.contains("RESULT: VERIFIED"));
    for rate in 0..=2 {
        assert!(out_dir.join(format!("rate-{rate}.kern")).exists());
        assert!(out_dir.join(format!("rate-{rate}.Q")).exists());
    }

    // every emitted member passes verification, including the oracle
    for rate in 0..=2 {
        let out = snc(&[
            "verify",
            data("fig3.net").to_str().unwrap(),
            "--kernels",
            out_dir.join(format!("rate-{rate}.kern")).to_str().unwrap(),
            "--q",
            out_dir.join(format!("rate-{rate}.Q")).to_str().unwrap(),
            "--rate",
            &rate.to_string(),
            "--security",
            "1",
            "--oracle",
        ]);
        assert_eq!(code(&out), 0, "rate {rate}: {}", stdout(&out));
    }
}

#[test]
fn family_without_best_effort_hits_the_field_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = snc(&[
        "family",
        data("fig3.net").to_str().unwrap(),
        "--security",
        "1",
        "--out-dir",
        dir.path().join("f").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("too small"));
}

#[test]
fn family_rejects_excessive_security_levels() {
    let dir = tempfile::tempdir().unwrap();
    let out = snc(&[
        "family",
        data("fig3.net").to_str().unwrap(),
        "--security",
        "4",
        "--out-dir",
        dir.path().join("f").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("security level 4"));
}

#[test]
fn zero_security_family_spans_all_rates() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("family");
    let out = snc(&[
        "family",
        data("fig3.net").to_str().unwrap(),
        "--security",
        "0",
        "--seed",
        "3",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    for rate in 0..=3 {
        assert!(out_dir.join(format!("rate-{rate}.kern")).exists());
    }
    let report = std::fs::read_to_string(out_dir.join("report.txt")).unwrap();
    assert!(report.contains("rate 3"));
    assert!(report.contains("RESULT: VERIFIED"));
}

#[test]
fn family_output_is_deterministic_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out_dir in [&a, &b] {
        let out = snc(&[
            "family",
            data("fig3.net").to_str().unwrap(),
            "--security",
            "1",
            "--seed",
            "42",
            "--best-effort",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    for entry in std::fs::read_dir(&a).unwrap() {
        let name = entry.unwrap().file_name();
        let left = std::fs::read(a.join(&name)).unwrap();
        let right = std::fs::read(b.join(&name)).unwrap();
        assert_eq!(left, right, "{name:?} differs between identical runs");
    }
}

#[test]
fn reduce_reproduces_the_pinned_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("step");
    let out = snc(&[
        "reduce",
        data("fig3.net").to_str().unwrap(),
        "--kernels",
        data("fig3.kern").to_str().unwrap(),
        "--q",
        data("fig3.Q").to_str().unwrap(),
        "--rate",
        "2",
        "--security",
        "1",
        "--pin-choices",
        "h=0,1",
        "theta=3",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("k = [0, 3]"));
    assert!(text.contains("theta = 3"));
    let kern = std::fs::read_to_string(out_dir.join("rate-1.kern")).unwrap();
    assert!(kern.contains("kernel s 2 4\n0 1 1 0\n4 3 1 2\n"), "{kern}");
    let q = std::fs::read_to_string(out_dir.join("rate-1.Q")).unwrap();
    assert_eq!(q, "matrix 2 2\n1 0\n0 1\n");
}

#[test]
fn reduce_rejects_illegal_pins() {
    let out = snc(&[
        "reduce",
        data("fig3.net").to_str().unwrap(),
        "--kernels",
        data("fig3.kern").to_str().unwrap(),
        "--q",
        data("fig3.Q").to_str().unwrap(),
        "--rate",
        "2",
        "--security",
        "1",
        "--pin-choices",
        "h=1,0",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("pinned choice rejected"));
}

#[test]
fn construct_emits_a_loadable_code_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let kern = dir.path().join("c.kern");
    let q = dir.path().join("c.Q");
    let out = snc(&[
        "construct",
        data("fig3.net").to_str().unwrap(),
        "--security",
        "1",
        "--seed",
        "7",
        "--kernels-out",
        kern.to_str().unwrap(),
        "--q-out",
        q.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let verify = snc(&[
        "verify",
        data("fig3.net").to_str().unwrap(),
        "--kernels",
        kern.to_str().unwrap(),
        "--q",
        q.to_str().unwrap(),
        "--rate",
        "2",
        "--security",
        "1",
        "--oracle",
    ]);
    assert_eq!(code(&verify), 0, "{}", stdout(&verify));
}

#[test]
fn construct_rejects_dimensions_beyond_capacity() {
    let out = snc(&["construct", data("fig3.net").to_str().unwrap(), "--dimension", "4"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("exceeds the network capacity"));
}

#[test]
fn parse_errors_carry_line_numbers_and_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.net");
    std::fs::write(&bad, "field 5\nnode s t\nsource s\nsink t\nedge e1 s\n").unwrap();
    let out = snc(&["primary-sets", bad.to_str().unwrap(), "--security", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 5"));
}

#[test]
fn sink_with_out_edge_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.net");
    std::fs::write(&bad, "field 5\nnode s t\nsource s\nsink t\nedge e1 t s\n").unwrap();
    let out = snc(&["primary-sets", bad.to_str().unwrap(), "--security", "1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn cyclic_networks_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("cycle.net");
    std::fs::write(
        &bad,
        "field 5\nnode s a b t\nsource s\nsink t\nedge e1 s a\nedge e2 a b\nedge e3 b a\nedge e4 a t\n",
    )
    .unwrap();
    let out = snc(&["primary-sets", bad.to_str().unwrap(), "--security", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("cycle"));
}
