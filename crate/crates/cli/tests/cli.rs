//! End-to-end runs of the binary: exit codes and output shape.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cicert"))
}

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn no_arguments_is_an_input_error() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Usage"), "usage text expected, got {err}");
}

#[test]
fn unknown_subcommand_is_an_input_error() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn params_json_payload() {
    let out = bin()
        .args(["--json", "params", "--k", "3", "--M", "123"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["epsilon"], 3);
    assert_eq!(v["report"]["rho"], 123);
    assert_eq!(v["report"]["gamma"], "126");
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn slopes_pass_and_fail_exit_codes() {
    let out = bin().args(["slopes", "--k", "3", "--M", "96"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("1331/1000"));

    let out = bin().args(["slopes", "--k", "3", "--M", "93"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn slopes_scan_and_all_tuples() {
    let out = bin()
        .args(["slopes", "--k", "3", "--scan", "96..99"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.contains("-> pass")).count(), 4);

    // brute-force worst-case confirmation runs at small M; the inequality
    // itself still fails this far below the threshold
    let out = bin()
        .args(["slopes", "--k", "3", "--M", "40", "--l", "3", "--all-tuples"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn quad_rank_fixture_roundtrip() {
    let out = bin()
        .args(["--json", "quad", "rank", "--input", &fixture("quad/rank_fixture_1.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["tuple_rank"], 2);
}

#[test]
fn classify_point_reports_type() {
    let out = bin()
        .args(["--json", "classify-point", "--input", &fixture("pointed/type_2_3.json")])
        .output()
        .unwrap();
    // desk-scale fixtures sit far below the genericity thresholds, so the
    // rank verdicts come back violated
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["l"], 3);
    assert_eq!(v["report"]["tuple_rank_def12"], 2);
    assert_eq!(v["verdict"], "violated");
}

#[test]
fn check_regularity_seeded_runs() {
    let out = bin()
        .args([
            "--seed", "7", "--json",
            "check-regularity", "--condition", "R1",
            "--input", &fixture("pointed/r1_fixture.json"),
            "--samples", "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["verdict"], "pass");

    // a violated condition exits 1
    let out = bin()
        .args([
            "--seed", "7",
            "check-regularity", "--condition", "R3.1",
            "--input", &fixture("pointed/r31_degenerate.json"),
            "--samples", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // strict mode demands a seed
    let out = bin()
        .args([
            "--strict",
            "check-regularity", "--condition", "R1",
            "--input", &fixture("pointed/r1_fixture.json"),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // zero samples is inconclusive
    let out = bin()
        .args([
            "--seed", "7",
            "check-regularity", "--condition", "R1",
            "--input", &fixture("pointed/r1_fixture.json"),
            "--samples", "0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_regularity_wrong_type_is_input_error() {
    let out = bin()
        .args([
            "--seed", "7",
            "check-regularity", "--condition", "R2",
            "--input", &fixture("pointed/r1_fixture.json"),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn codim_verdicts() {
    let out = bin().args(["codim", "--k", "3", "--M", "123"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("MQ2"));

    let out = bin()
        .args(["codim", "--k", "3", "--M", "122"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "below rho is an input error");
}

#[test]
fn trace_chain_and_violation() {
    let dir = std::env::temp_dir();
    let chain = dir.join("cicert_test_chain.json");
    std::fs::write(
        &chain,
        r#"{"l": 3, "c": 16, "rank": 125, "ratio": "101/100",
           "steps": ["special", "special", "special"]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["trace", "--k", "3", "--chain", chain.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("c=10"));

    // after eps(3) = 3 contraction steps the ratio exceeds 3/2, so a
    // fourth special step fails its hypothesis: the terminal contradiction
    std::fs::write(
        &chain,
        r#"{"l": 3, "c": 16, "rank": 125, "ratio": "101/100",
           "steps": ["special", "special", "special", "special"]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["trace", "--k", "3", "--chain", chain.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("n(D) < nu(D)"), "{err}");
}

#[test]
fn check_fibration_cases() {
    let dir = std::env::temp_dir();
    let f = dir.join("cicert_test_fibration.json");
    std::fs::write(
        &f,
        r#"{"m": 1, "k": 3, "M": 123, "bidegrees": [[1, 42], [1, 42], [1, 42]]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["check-fibration", "--input", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    std::fs::write(
        &f,
        r#"{"m": 5, "k": 3, "M": 123, "bidegrees": [[1, 42], [1, 42], [1, 42]]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["check-fibration", "--input", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    std::fs::write(
        &f,
        r#"{"m": 1, "k": 3, "M": 120, "bidegrees": [[1, 41], [1, 41], [1, 41]]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["check-fibration", "--input", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quad_rank_exact_flag() {
    // fixture 3 is the hyperbolic triple: three forms, exact route
    let out = bin()
        .args([
            "--json", "quad", "rank", "--exact",
            "--input", &fixture("quad/rank_fixture_3.json"),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["tuple_rank"], 2);
    assert_eq!(v["report"]["confidence"], "Exact");
}

#[test]
fn check_regularity_r3_2_runs() {
    let out = bin()
        .args([
            "--seed", "3", "--json",
            "check-regularity", "--condition", "R3.2",
            "--input", &fixture("pointed/r3_fixture.json"),
            "--samples", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["condition"], "R3.2");
    assert_eq!(v["report"]["l"], 2);
}

#[test]
fn malformed_json_reports_position() {
    let dir = std::env::temp_dir();
    let f = dir.join("cicert_test_bad.json");
    std::fs::write(&f, "{\"m\": 1,\n  broken").unwrap();
    let out = bin()
        .args(["check-fibration", "--input", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
}
