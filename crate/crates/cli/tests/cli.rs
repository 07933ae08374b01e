//! End-to-end CLI checks: exit codes, the documented output examples, and
//! criterion 12 — identical invocations produce byte-identical JSON.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posreal"))
        .args(args)
        .output()
        .expect("binary runs")
}

const ALPHA: &str = r#"{"L": [[0,1,1],[1,1,0],[1,0,0]], "p": 1}"#;
const ZETA: &str = r#"{"L": [[0,-1,1],[1,0,0],[0,-1,0]], "p": 1}"#;
const DELTA: &str = r#"{"L": [[-1,-1,1],[1,1,1],[1,-1,0]], "p": 1}"#;

#[test]
fn certify_alpha_exits_zero_with_nu_one() {
    let out = run(&["certify", "--inline", ALPHA]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["found"], serde_json::json!(true));
    assert_eq!(v["certificate"]["nu"], serde_json::json!(1));
}

#[test]
fn check_gp_zeta_exits_one_with_boundary_minus_two_at_origin() {
    let out = run(&["check-gp", "--inline", ZETA]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_gp"], serde_json::json!(false));
    let profile = v["profile"].as_array().unwrap();
    let at0 = profile
        .iter()
        .find(|pair| pair[0].as_f64() == Some(0.0))
        .expect("omega = 0 sampled");
    assert!((at0[1].as_f64().unwrap() + 2.0).abs() <= 1e-9);
}

#[test]
fn tf_poly_delta_yields_minus_four_over_s_squared() {
    let out = run(&["tf", "--inline", DELTA, "--poly"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["num"], serde_json::json!([[-4.0, 0.0]]));
    assert_eq!(
        v["den"],
        serde_json::json!([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    );
}

#[test]
fn file_input_matches_inline() {
    let path = std::env::temp_dir().join("posreal_cli_alpha.json");
    std::fs::write(&path, ALPHA).unwrap();
    let by_file = run(&["certify", "--input", path.to_str().unwrap()]);
    let by_inline = run(&["certify", "--inline", ALPHA]);
    assert_eq!(by_file.status.code(), Some(0));
    assert_eq!(by_file.stdout, by_inline.stdout);
    let missing = run(&["certify", "--input", "/nonexistent/system.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_two() {
    let out = run(&["certify", "--inline", "{\"L\": [[1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let out = run(&["member", "--inline", ALPHA, "--hmat", "[[1,0],[0,1]]"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "dimension mismatch is an input error"
    );
}

#[test]
fn member_requires_non_outside_for_exit_zero() {
    let hmat = "[[-1,0,0],[0,1,0],[0,0,1]]";
    let out = run(&["member", "--inline", ALPHA, "--hmat", hmat]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["member", "--inline", ZETA, "--hmat", hmat]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn demo_exits_zero_and_reports_two_discrepancies() {
    let out = run(&["demo"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], serde_json::json!(true));
    assert_eq!(v["expected_discrepancies"].as_array().unwrap().len(), 2);
}

#[test]
fn criterion_12_byte_identical_outputs() {
    let invocations: Vec<Vec<&str>> = vec![
        vec!["demo"],
        vec!["certify", "--inline", ALPHA, "--seed", "3"],
        vec!["certify", "--inline", ZETA, "--seed", "3"],
        vec![
            "construct",
            "--r",
            "3",
            "--nu",
            "1",
            "--p",
            "1",
            "--seed",
            "11",
        ],
        vec!["check-gp", "--inline", DELTA],
        vec!["classify", "--inline", ALPHA, "--seed", "5"],
        vec![
            "feedback",
            "--inline",
            r#"{"A": [[1,1],[1,1]], "B": [[2],[1]], "C": [[2,-1]], "D": [[0]]}"#,
            "--hmat",
            "[[-1,0],[0,1]]",
        ],
        // the factor-search path
        vec![
            "feedback",
            "--inline",
            r#"{"A": [[1,1],[1,1]], "B": [[2],[1]], "C": [[2,-1]], "D": [[0]]}"#,
            "--seed",
            "2",
        ],
    ];
    for args in &invocations {
        let first = run(args);
        let second = run(args);
        assert_eq!(first.status.code(), second.status.code(), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "outputs differ for {args:?}");
        assert!(!first.stdout.is_empty());
    }
    println!(
        "criterion 12 determinism: PASS ({} invocations)",
        invocations.len()
    );
}
