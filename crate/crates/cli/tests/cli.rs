//! End-to-end runs of the `ellmds` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ellmds"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// The fixture's `job` object written to a temp file.
fn job_file(dir: &Path, name: &str, extra: &[(&str, Value)]) -> PathBuf {
    let v: Value = serde_json::from_str(&fs::read_to_string(fixtures().join(format!("{name}.json"))).unwrap()).unwrap();
    let mut job = v["job"].clone();
    for (k, x) in extra {
        job[*k] = x.clone();
    }
    let path = dir.join(format!("{name}_job.json"));
    fs::write(&path, job.to_string()).unwrap();
    path
}

#[test]
fn search_reports_group() {
    let o = run(&["search", "--q", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("points:     16"), "{s}");
    assert!(s.contains("Z_4 + Z_4"), "{s}");
    assert!(s.contains("subgroup 2: order 8"), "{s}");
}

#[test]
fn search_structured_output() {
    let o = run(&["--format", "structured", "search", "--q", "49"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 64);
    assert_eq!(v["structure"], serde_json::json!([8, 8]));
}

#[test]
fn rejects_non_prime_power() {
    for args in [
        &["search", "--q", "6"][..],
        &["build", "--q", "6", "--k", "3"],
        &["sweep", "--q", "6"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("not a prime power"));
    }
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.txt");
    assert_eq!(run(&["verify", missing.to_str().unwrap()]).status.code(), Some(2));
    let junk = dir.path().join("junk.txt");
    fs::write(&junk, "# q=9 modulus=x^2+2x+2\n1 2\nzz 1\n").unwrap();
    assert_eq!(run(&["verify", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        run(&["build", "--q", "9", "--k", "3", "--subgroup", "7"]).status.code(),
        Some(2)
    );
}

#[test]
fn build_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let job = job_file(dir.path(), "gf49", &[]);
    let a = run(&["build", "--job", job.to_str().unwrap()]);
    let b = run(&["--workers", "1", "build", "--job", job.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# q=49 modulus=x^2+6x+3\n# n=32 k=5\n"));
    let s1 = run(&["sweep", "--q", "7,8", "--k", "3,4"]);
    let s2 = run(&["sweep", "--q", "7,8", "--k", "3,4"]);
    assert_eq!(s1.status.code(), Some(0), "{}", stdout(&s1));
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn build_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, format, d) in [("gf8", "text", "3"), ("gf9", "structured", "6")] {
        let job = job_file(dir.path(), name, &[]);
        let out = dir.path().join(format!("{name}.{format}"));
        let o = run(&[
            "--format",
            format,
            "build",
            "--job",
            job.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let v = run(&["verify", out.to_str().unwrap()]);
        let s = stdout(&v);
        assert_eq!(v.status.code(), Some(0), "{s}");
        assert!(s.contains(&format!("verified d={d}")), "{s}");
        // Only the structured record carries the construction.
        assert_eq!(s.contains("structural pass"), format == "structured", "{s}");
    }
}

#[test]
fn extended_build_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let job = job_file(dir.path(), "gf8", &[("extend", Value::Bool(true))]);
    let out = dir.path().join("ext.json");
    let o = run(&[
        "--format",
        "structured",
        "build",
        "--job",
        job.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = run(&["--format", "structured", "verify", out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(
        (r["mds"]["n"].as_u64(), r["mds"]["verified_d"].as_u64()),
        (Some(7), Some(4))
    );
}

#[test]
fn identity_matrix_is_not_mds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.txt");
    fs::write(&path, "# q=7 modulus=x\n1 0 0\n0 1 0\n").unwrap();
    let v = run(&["verify", path.to_str().unwrap()]);
    let s = stdout(&v);
    assert_eq!(v.status.code(), Some(1), "{s}");
    assert!(s.contains("verified d=1"), "{s}");
    assert!(s.contains("verdict inconclusive"), "{s}");
    assert!(s.contains("NOT MDS"), "{s}");
}

#[test]
fn printed_gf9_matrix() {
    let path = fixtures().join("gf9_printed.txt");
    let v = run(&["verify", path.to_str().unwrap()]);
    let s = stdout(&v);
    assert_eq!(v.status.code(), Some(0), "{s}");
    assert!(s.contains("verified d=6"), "{s}");
    assert!(s.contains("dim 6"), "{s}");
    assert!(s.contains("not-RS-equivalent"), "{s}");
}

#[test]
fn explicit_methods_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let job = job_file(dir.path(), "gf49", &[]);
    let out = dir.path().join("ex3.json");
    let o = run(&[
        "--format",
        "structured",
        "build",
        "--job",
        job.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let p = out.to_str().unwrap();
    let ok = run(&["verify", p, "--methods", "structural,subsets,schur"]);
    let s = stdout(&ok);
    assert_eq!(ok.status.code(), Some(0), "{s}");
    assert!(s.contains("35960 checked, exhaustive"), "{s}");
    // 49^5 codewords exceed the default budget.
    assert_eq!(run(&["verify", p, "--methods", "bruteforce"]).status.code(), Some(3));
    assert_eq!(
        run(&["verify", p, "--methods", "minors", "--budget", "1000"])
            .status
            .code(),
        Some(3)
    );
    let sampled = run(&[
        "verify",
        p,
        "--methods",
        "minors",
        "--budget",
        "1000",
        "--sample",
        "--seed",
        "5",
    ]);
    assert_eq!(sampled.status.code(), Some(0));
    assert!(stdout(&sampled).contains("sampled"));
}

#[test]
fn sweep_lengths_match_table() {
    let o = run(&["--format", "structured", "sweep", "--q", "4,7,8,9,16", "--k", "3"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(0));
    let got: Vec<(u64, u64)> = v["lengths"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["q"].as_u64().unwrap(), r["subgroup_order"].as_u64().unwrap()))
        .collect();
    assert_eq!(got, [(4, 4), (7, 6), (8, 7), (9, 8), (16, 12)]);
}
