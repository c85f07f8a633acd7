use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qperfect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qperfect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Runs `construct` with `--out DIR/name` and returns the manifest path.
fn construct(dir: &Path, name: &str, args: &[&str]) -> String {
    let prefix = dir.join(name);
    let prefix = prefix.to_str().unwrap();
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", prefix]);
    let o = qperfect(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    format!("{prefix}.manifest.json")
}

#[test]
fn binary_concatenated_code_end_to_end() {
    let dir = TempDir::new().unwrap();
    let m = construct(dir.path(), "t7", &["--construction", "thm7", "--q", "2", "--s1", "2", "--s2", "2"]);
    let words = std::fs::read_to_string(dir.path().join("t7.words")).unwrap();
    assert!(words.starts_with("# q=2 n=15 size=2048\n"));
    assert_eq!(words.lines().count(), 2049);

    let o = qperfect(&["verify", "--manifest", &m, "--distance", "3"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0, "{out}");
    assert!(out.contains("mode: exhaustive"));
    assert!(out.contains("perfect: true"));
    assert!(out.contains("min_distance: 3"), "{out}");
    assert!(out.ends_with("result: pass\n"));

    let o = qperfect(&["rank", "--manifest", &m]);
    assert!(stdout(&o).contains("rank: 11"));
    assert!(stdout(&o).contains("exact: true"));

    let o = qperfect(&["info", "--manifest", &m]);
    let out = stdout(&o);
    assert!(out.contains("length: 15") && out.contains("logq_size: 11"), "{out}");
    assert!(out.contains("singleton_slack: 2"));
}

#[test]
fn ternary_even_like_code_is_sampled() {
    let dir = TempDir::new().unwrap();
    let m = construct(
        dir.path(),
        "t8",
        &["--construction", "thm8", "--q", "3", "--s1", "2", "--s2", "2", "--family", "keyed", "--quasigroup", "isotope", "--seed", "4"],
    );
    let o = qperfect(&["info", "--manifest", &m]);
    let out = stdout(&o);
    assert!(out.contains("length: 81") && out.contains("logq_size: 76"), "{out}");
    assert!(out.contains("even_like: true"));

    let o = qperfect(&["verify", "--manifest", &m, "--trials", "2000", "--distance", "3", "--distance-trials", "100"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0, "{out}");
    assert!(out.contains("mode: sampled"));
    assert!(out.contains("even_like: true"), "{out}");
    assert!(out.contains("distance_ge_3: true"), "{out}");
}

#[test]
fn verify_json_is_thread_independent() {
    let dir = TempDir::new().unwrap();
    let m = construct(dir.path(), "t7", &["--construction", "thm7", "--q", "3", "--s1", "2", "--s2", "2"]);
    let run = |threads: &str| {
        let o = qperfect(&["verify", "--manifest", &m, "--trials", "1000", "--distance-trials", "50", "--threads", threads, "--json"]);
        assert_eq!(code(&o), 0);
        stdout(&o)
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let v: serde_json::Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["mode"], "sampled");
}

#[test]
fn export_respects_the_enumeration_guard() {
    let dir = TempDir::new().unwrap();
    let m = construct(dir.path(), "h", &["--construction", "hamming", "--q", "3", "--s1", "2"]);
    let out = dir.path().join("h2.words");
    let o = qperfect(&["export", "--manifest", &m, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert_eq!(text, std::fs::read_to_string(dir.path().join("h.words")).unwrap());

    let big = qperfect(&["construct", "--construction", "thm7", "--q", "3", "--s1", "2", "--s2", "2"]);
    assert_eq!(code(&big), 0);
    let mpath = dir.path().join("big.manifest.json");
    std::fs::write(&mpath, big.stdout).unwrap();
    let o = qperfect(&["export", "--manifest", mpath.to_str().unwrap(), "--out", dir.path().join("big.words").to_str().unwrap()]);
    assert_eq!(code(&o), 4);
}

#[test]
fn failing_checks_and_errors_have_distinct_exit_codes() {
    let dir = TempDir::new().unwrap();
    let m = construct(dir.path(), "fs", &["--construction", "full-space", "--q", "2", "--s1", "3"]);
    let o = qperfect(&["verify", "--manifest", &m]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("result: fail"));

    assert_eq!(code(&qperfect(&["construct", "--construction", "thm7", "--q", "6", "--s1", "2", "--s2", "2"])), 2);
    assert_eq!(code(&qperfect(&["construct", "--construction", "thm7", "--q", "2", "--s1", "1", "--s2", "2"])), 3);
    assert_eq!(code(&qperfect(&["frobnicate"])), 64);
    assert_eq!(code(&qperfect(&["--help"])), 0);

    let bad = dir.path().join("bad.manifest.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&qperfect(&["info", "--manifest", bad.to_str().unwrap()])), 5);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&qperfect(&["info", "--manifest", missing.to_str().unwrap()])), 5);
}

#[test]
fn tampered_manifest_is_rejected() {
    let dir = TempDir::new().unwrap();
    let m = construct(dir.path(), "t8", &["--construction", "thm8", "--q", "2", "--s1", "2", "--s2", "2"]);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    v["derived"]["logq_size"] = serde_json::json!(12);
    std::fs::write(&m, v.to_string()).unwrap();
    assert_eq!(code(&qperfect(&["verify", "--manifest", &m])), 5);
}

#[test]
fn partition_manifest_reports_parts() {
    let dir = TempDir::new().unwrap();
    let m = construct(dir.path(), "p", &["--construction", "thm8-partition", "--q", "2", "--s1", "2", "--s2", "2"]);
    let out = stdout(&qperfect(&["info", "--manifest", &m]));
    assert!(out.contains("parts: 16"), "{out}");
    let o = qperfect(&["verify", "--manifest", &m]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0, "{out}");
    assert!(out.contains("partition"), "{out}");
}
