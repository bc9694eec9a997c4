//! Binary-level tests: exit codes, output schemas, checkpointing, and the
//! resume contract, driven through the real executable.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn carmichael(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carmichael"))
        .args(args)
        .env_remove("CARMICHAEL_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn check_certifies_and_exits_zero() {
    let out = carmichael(&["check", "27", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("verdict: carmichael"));
    assert!(text.contains("p=7"));
    assert!(text.contains("p=13"));
    assert!(text.contains("p=19"));
    assert!(text.contains("proven primality: yes"));
}

#[test]
fn check_reports_rejections_with_exit_zero() {
    let out = carmichael(&["check", "9", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("not carmichael (cofactor_remains)"));
    assert!(text.contains("709"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["check", "27"] as &[&str],
        &["frobnicate"],
        &["scan", "--k-min", "3"],
        &[],
    ] {
        let out = carmichael(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}: {}", stderr(&out));
    }
}

#[test]
fn domain_errors_exit_one() {
    let out = carmichael(&["check", "12", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("k'=3"), "normalization hint expected");
    let out = carmichael(&["bound", "25"]);
    assert_eq!(out.status.code(), Some(1));
    let out = carmichael(&["scan", "--k-min", "4", "--k-max", "10", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sieve_prints_classes_and_compatibility() {
    let out = carmichael(&["sieve", "9", "5", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("p=5: n ≡ 0 (mod 4)"));
    assert!(text.contains("p=13: n ≡ 10 (mod 12)"));
    assert!(text.contains("system: unsatisfiable"));

    let out = carmichael(&["sieve", "21", "17", "337"]);
    assert!(stdout(&out).contains("system: n ≡ 130 (mod 168)"));
}

#[test]
fn bound_prints_report_fields() {
    let out = carmichael(&["bound", "27"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("m1 = 791"));
    assert!(text.contains("m = 1583"));
    assert!(text.contains("minimum_m_over_valid_k = 791"));
    assert!(text.contains("admits no exhaustive search"));
}

#[test]
fn scan_streams_jsonl_to_stdout() {
    let out = carmichael(&[
        "scan", "--k-min", "27", "--k-max", "35", "--n-max", "16", "--workers", "2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "expected exactly the two known members: {text}");
    assert!(lines[0].starts_with(r#"{"k":27,"n":6,"N":"1729""#));
    assert!(lines[1].starts_with(r#"{"k":35,"n":4,"N":"561""#));
}

#[test]
fn scan_workers_env_override_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_carmichael"))
        .args(["scan", "--k-min", "3", "--k-max", "9", "--n-max", "8"])
        .env("CARMICHAEL_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("CARMICHAEL_WORKERS"));
}

fn read_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|s| s.to_string())
        .collect()
}

#[test]
fn scan_checkpoint_resume_reproduces_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let full_path = dir.path().join("full.jsonl");
    let resumed_path = dir.path().join("resumed.jsonl");
    let cp_path = dir.path().join("scan.checkpoint");

    let range = ["--k-min", "3", "--k-max", "199", "--n-max", "32"];

    // uninterrupted reference run
    let out = carmichael(
        &[&["scan"], &range[..], &["--out", full_path.to_str().unwrap()]].concat(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let reference = read_lines(&full_path);

    // first leg with a checkpoint; then simulate a crash by truncating the
    // output mid-stream and rolling the checkpoint back
    let out = carmichael(
        &[
            &["scan"],
            &range[..],
            &[
                "--out",
                resumed_path.to_str().unwrap(),
                "--checkpoint",
                cp_path.to_str().unwrap(),
            ],
        ]
        .concat(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(cp_path.exists());

    // craft the crash state: keep findings for k <= 35 plus one stray
    // finding beyond the checkpoint, and set the checkpoint to k = 35
    let all = read_lines(&resumed_path);
    let mut crashed: Vec<String> = Vec::new();
    for line in &all {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        if v["k"].as_u64().unwrap() <= 35 {
            crashed.push(line.clone());
        }
    }
    if let Some(stray) = all.iter().find(|l| {
        serde_json::from_str::<serde_json::Value>(l).unwrap()["k"]
            .as_u64()
            .unwrap()
            > 35
    }) {
        crashed.push(stray.clone()); // written but not checkpointed
    }
    fs::write(&resumed_path, crashed.join("\n") + "\n").unwrap();
    let cp_text = fs::read_to_string(&cp_path).unwrap();
    let mut cp: serde_json::Value = serde_json::from_str(&cp_text).unwrap();
    cp["k_completed_through"] = serde_json::json!(35);
    fs::write(&cp_path, serde_json::to_string_pretty(&cp).unwrap()).unwrap();

    // resume: stray finding must be dropped, nothing emitted twice
    let out = carmichael(
        &[
            &["scan"],
            &range[..],
            &[
                "--out",
                resumed_path.to_str().unwrap(),
                "--checkpoint",
                cp_path.to_str().unwrap(),
                "--resume",
            ],
        ]
        .concat(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("resuming after k = 35"));
    assert_eq!(read_lines(&resumed_path), reference, "resumed run must match");
}

#[test]
fn scan_resume_refuses_config_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.jsonl");
    let cp_path = dir.path().join("scan.checkpoint");
    let out = carmichael(&[
        "scan", "--k-min", "3", "--k-max", "19", "--n-max", "8",
        "--out", out_path.to_str().unwrap(),
        "--checkpoint", cp_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let out = carmichael(&[
        "scan", "--k-min", "3", "--k-max", "19", "--n-max", "16",
        "--out", out_path.to_str().unwrap(),
        "--checkpoint", cp_path.to_str().unwrap(),
        "--resume",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("refusing to resume"), "{err}");
    assert!(err.contains("n_max"), "diff must name the field: {err}");
}

#[test]
fn scan_checkpoint_requires_out() {
    let out = carmichael(&[
        "scan", "--k-min", "3", "--k-max", "9", "--n-max", "8", "--checkpoint", "/tmp/x",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--checkpoint requires --out"));
}

#[test]
fn scan_unwritable_output_is_a_startup_error() {
    let out = carmichael(&[
        "scan", "--k-min", "3", "--k-max", "9", "--n-max", "8",
        "--out", "/nonexistent-dir/findings.jsonl",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("creating"), "{}", stderr(&out));
}

#[test]
fn verify_paper_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let out = carmichael(&["verify-paper", "--json", json_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("overall: PASS"));
    assert!(text.contains("small scan"));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(doc["pass"], serde_json::json!(true));
    assert!(doc["claims"].as_array().unwrap().len() >= 70);
}

#[test]
fn timings_flag_adds_the_field() {
    let out = carmichael(&[
        "scan", "--k-min", "27", "--k-max", "27", "--n-max", "8", "--timings",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("wall_time_ms"));
    let out = carmichael(&["scan", "--k-min", "27", "--k-max", "27", "--n-max", "8"]);
    assert!(!stdout(&out).contains("wall_time_ms"));
}
