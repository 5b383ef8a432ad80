use std::fs;
use std::io::BufReader;
use std::path::Path;
use std::process::{Command, Output};

use cstar_fixpoint::harness::{read_csv, read_jsonl, Record};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cstar-fixpoint"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn records(path: &Path) -> Vec<Record> {
    read_jsonl(BufReader::new(fs::File::open(path).unwrap())).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_affine_scalar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.jsonl");
    let out = run(&["solve", "--scenario", "affine_scalar", "--x0", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = records(&path);
    let summary = recs.iter().find(|r| r.kind == "solve-summary").unwrap();
    assert_eq!(summary.verdict.as_deref(), Some("converged"));
    assert!(summary.residual.unwrap() <= 1e-9);
    let z = summary.points.as_ref().unwrap()[0][0];
    assert!((z - 2.0).abs() < 1e-9);
    let steps = recs.iter().filter(|r| r.kind == "step").count();
    assert_eq!(steps as u64, summary.index.unwrap());
    assert!(recs
        .iter()
        .filter(|r| r.kind == "step")
        .all(|r| r.bound_check.as_deref() == Some("holds")));
}

#[test]
fn short_budget_gives_one_line_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.jsonl");
    let out = run(&[
        "solve", "--scenario", "affine_scalar", "--param", "a=0.9", "--x0", "0", "--max-iter", "3",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[..3].iter().all(|l| l.contains("\"kind\":\"step\"")));
    assert!(lines[3].contains("\"verdict\":\"max-iterations\""));
}

#[test]
fn paper_kannan_axioms_fail() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("axioms.jsonl");
    let out = run(&["verify-axioms", "--scenario", "paper_example_kannan", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let recs = records(&path);
    let identity = recs
        .iter()
        .find(|r| r.kind == "axiom" && r.detail.as_deref().is_some_and(|d| d.starts_with("identity")))
        .unwrap();
    assert_eq!(identity.verdict.as_deref(), Some("fail"));
    assert_eq!(identity.points.as_ref().unwrap(), &vec![vec![3.0], vec![3.0]]);
    assert_eq!(identity.values.as_ref().unwrap(), &vec![36.0, 0.0]);
}

#[test]
fn certify_violations_carry_both_sides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.jsonl");
    let out = run(&["certify", "--scenario", "affine_scalar", "--samples", "200", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let recs = records(&path);
    let violations: Vec<&Record> = recs.iter().filter(|r| r.kind == "violation").collect();
    assert!(!violations.is_empty());
    for v in violations {
        let (lhs, rhs) = (v.lhs.as_ref().unwrap(), v.rhs.as_ref().unwrap());
        assert!(lhs[0] > rhs[0]);
        assert_eq!(v.points.as_ref().unwrap().len(), 2);
    }
    assert_eq!(recs.last().unwrap().kind, "certificate");
}

#[test]
fn certify_step_map_passes() {
    let out = run(&["certify", "--scenario", "kannan_step", "--samples", "500"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn demo_reports_both_defects() {
    let out = run(&["demo"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("witness d(3, 3) = (36, 0) ≠ θ"), "{text}");
    assert!(text.contains("domain-exit at iteration 1"), "{text}");
    assert!(text.contains("converged"), "{text}");
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["a.jsonl", "b.jsonl"] {
        let path = dir.path().join(name);
        let out = run(&[
            "certify", "--scenario", "finite_random_12", "--seed", "3", "--seed", "9", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success() || out.status.code() == Some(2));
        outputs.push(fs::read(&path).unwrap());
    }
    assert!(!outputs[0].is_empty());
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn csv_and_jsonl_agree() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("run.jsonl");
    let csv = dir.path().join("run.csv");
    for (path, format) in [(&json, "jsonl"), (&csv, "csv")] {
        let out = run(&[
            "solve", "--scenario", "matrix_scaled_affine", "--x0", "-7.5", "--format", format, "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let from_json = records(&json);
    let from_csv = read_csv(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(from_json, from_csv);
    assert!(from_json.len() > 30);
}

#[test]
fn fixed_points_on_finite_space() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fp.jsonl");
    let out = run(&["fixed-points", "--scenario", "finite_random_12", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&path);
    assert!(recs.iter().any(|r| r.kind == "fixed-point"));
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let from_flags = dir.path().join("flags.jsonl");
    let from_file = dir.path().join("file.jsonl");
    let config = dir.path().join("run.toml");
    fs::write(
        &config,
        format!(
            "command = \"solve\"\nscenario = \"affine_scalar\"\nseeds = [4]\nx0 = 10\nepsilon = 1e-12\noutput = {:?}\n\n[parameters]\na = 0.25\n",
            from_file.to_str().unwrap()
        ),
    )
    .unwrap();
    let a = run(&["--config", config.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&[
        "solve", "--scenario", "affine_scalar", "--seed", "4", "--x0", "10", "--epsilon", "1e-12", "--param",
        "a=0.25", "--out", from_flags.to_str().unwrap(),
    ]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(fs::read(&from_flags).unwrap(), fs::read(&from_file).unwrap());
}

#[test]
fn unknown_config_key_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "command = \"solve\"\nscenario = \"affine_scalar\"\nmax_iter = 3\n").unwrap();
    let out = run(&["--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("max_iter") && err.contains("line 3"), "{err}");
}

#[test]
fn config_cannot_be_mixed_with_flags() {
    let out = run(&["solve", "--config", "x.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["solve", "--scenario", "no_such_entry"][..],
        &["launch"],
        &["solve", "--scenario", "affine_scalar", "--param", "a=2"],
        &["solve", "--scenario", "affine_scalar", "--solver", "newton"],
        &["solve", "--scenario", "affine_scalar", "--epsilon", "-1"],
        &[],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{args:?}");
    }
}

#[test]
fn reich_precondition_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reich.jsonl");
    let out = run(&["solve", "--scenario", "reich_halving", "--x0", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let recs = records(&path);
    assert!(recs.iter().any(|r| r.kind == "solver-error"));
}
