//! End-to-end smoke tests driving the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bourdon"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bourdon-cli-{}-{}", std::process::id(), name));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    out
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({}):\n{}\n{}",
            e,
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn tessellate_validate_and_homology() {
    let dir = scratch("tess");
    let t = dir.join("t.json");
    let out = run(bin().args(["tessellate", "--p", "5", "--faces", "8", "-o"]).arg(&t));
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let summary = stdout_json(&out);
    assert_eq!(summary["genus"], 2);
    assert_eq!(summary["native_certificate"], true);

    let out = run(bin().args(["validate", "--in"]).arg(&t));
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["valid"], true);
    assert_eq!(report["vertices"], 10);
    assert_eq!(report["edges"], 20);

    let out = run(bin().args(["homology", "--in"]).arg(&t).arg("--signs"));
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["found"], true);
    assert_eq!(report["certificate"]["kind"], "PlusMinusOne");
}

#[test]
fn unimod_counts_and_explanations() {
    let out = run(bin().args(["unimod", "--v", "15", "--k", "3", "--all", "--explain"]));
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["complete"], true);
    let solutions = report["solutions"].as_array().unwrap();
    assert!(solutions.iter().any(|s| s == &serde_json::json!([5, 5, 12])));

    // Prime power: provably zero solutions.
    let out = run(bin().args(["unimod", "--v", "9", "--k", "3", "--count"]));
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["count"], 0);
    assert_eq!(report["complete"], true);
}

#[test]
fn decide_exit_codes_and_witness() {
    let dir = scratch("decide");

    // Exists with witness artifacts that re-verify.
    let wdir = dir.join("witness");
    let out = run(bin()
        .args(["decide", "--p", "5", "--v", "7", "--g", "2", "--witness"])
        .arg(&wdir));
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let verdict = stdout_json(&out);
    assert_eq!(verdict["outcome"], "exists");
    assert_eq!(verdict["reason"], "sign-certificate-construction");
    for f in ["verdict.json", "tessellation.json", "certificate.json", "complex.json"] {
        assert!(wdir.join(f).exists(), "missing {}", f);
    }
    let out = run(bin().args(["verify-cog", "--v", "7", "--in"]).arg(wdir.join("complex.json")));
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let report = stdout_json(&out);
    assert_eq!(report["ok"], true);
    assert_eq!(report["all_links_kvv"], true);

    // Not-exists and unknown exit codes.
    let out = run(bin().args(["decide", "--p", "12", "--v", "9", "--g", "4"]));
    assert_eq!(out.status.code(), Some(1));
    let out = run(bin().args(["decide", "--p", "12", "--v", "15", "--g", "4"]));
    assert_eq!(out.status.code(), Some(2));

    // Usage errors stay clear of the outcome codes.
    let out = run(bin().args(["decide", "--p", "4", "--v", "3", "--g", "2"]));
    assert_eq!(out.status.code(), Some(3));
    let out = run(bin().args(["no-such-command"]));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn build_cog_and_decide_tiling() {
    let dir = scratch("cog");
    let t = dir.join("t.json");
    let out = run(bin().args(["tessellate", "--p", "12", "--faces", "3", "-o"]).arg(&t));
    assert_eq!(out.status.code(), Some(0), "{:?}", out);

    // v = 3 over this tessellation is conclusively impossible.
    let out = run(bin().args(["decide-tiling", "--v", "3", "--in"]).arg(&t));
    assert_eq!(out.status.code(), Some(1));
    let verdict = stdout_json(&out);
    assert_eq!(verdict["reason"], "v3-no-sign-certificate");

    // Even v: build the product complex and verify it.
    let c = dir.join("cog.json");
    let out = run(bin()
        .args(["build-cog", "--even-v", "6", "-o"])
        .arg(&c)
        .arg("--tessellation")
        .arg(&t));
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let out = run(bin().args(["verify-cog", "--v", "6", "--in"]).arg(&c));
    assert_eq!(out.status.code(), Some(0), "{:?}", out);

    // Indexing round trip through the CLI-facing schema.
    let out = run(bin().args(["homology", "--in"]).arg(&t));
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["geodesics"], 10);
}
