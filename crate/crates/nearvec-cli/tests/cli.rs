//! Black-box checks of the binary: exit codes, output shapes, and the
//! JSON round trip promised for basis reports.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nearvec"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("nearvec-cli-{}-{name}", std::process::id()));
    fs::write(&path, contents).expect("temp file written");
    path
}

const RANK4: &str = "(1, 1, 2, x+1, 1)\n(0, 0, 0, 2x+2, 1)\n(1, 1, 1, x+2, 1)\n";
const PARTIAL: &str = "(0, 1, 1, 0, 0)\n(0, x+1, 2, 0, x+1)\n(1, x+1, 1, 0, x)\n";

#[test]
fn check_pair_accepts_and_rejects() {
    let ok = run(&["check-pair", "3", "2"]);
    assert!(ok.status.success());
    assert_eq!(stdout(&ok).trim(), "true");

    let bad = run(&["check-pair", "3", "4"]);
    assert!(bad.status.success(), "a completed check exits zero");
    let text = stdout(&bad);
    assert!(text.starts_with("false:"), "got {text:?}");
    assert!(text.contains("4"), "reason names the offending divisor: {text:?}");

    let json = run(&["check-pair", "5", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["valid"], serde_json::Value::Bool(true));
}

#[test]
fn check_pair_rejects_garbage_arguments() {
    let out = run(&["check-pair", "3", "abc"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_csv_has_labeled_header_and_correct_cells() {
    let out = run(&["table", "3", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "*,0,1,2,x,1+x,2+x,2x,1+2x,2+2x");
    let header: Vec<&str> = lines[0].split(',').collect();
    let col_x = header.iter().position(|&h| h == "x").unwrap();
    let row_x: Vec<&str> =
        lines.iter().find(|l| l.starts_with("x,")).unwrap().split(',').collect();
    assert_eq!(row_x[col_x], "2");
}

#[test]
fn table_json_parses() {
    let out = run(&["table", "3", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pair"], serde_json::json!([3, 2]));
    assert_eq!(v["labels"].as_array().unwrap().len(), 9);
    assert_eq!(v["table"][0][5], serde_json::json!("0"));
}

#[test]
fn table_rejects_a_bad_pair() {
    let out = run(&["table", "3", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("NotDicksonPair"));
}

#[test]
fn gen_reports_the_expected_basis() {
    let path = temp_file("gen.txt", RANK4);
    let out = run(&["gen", "3", "2", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rank"], serde_json::json!(4));
    assert_eq!(v["pair"], serde_json::json!([3, 2]));
    assert_eq!(v["basis"][0], serde_json::json!(["1", "1", "0", "0", "0"]));
    assert_eq!(v["basis"][3], serde_json::json!(["0", "0", "0", "0", "1"]));
    assert!(!v["certificate"].as_array().unwrap().is_empty());

    let ascii = run(&["gen", "3", "2", path.to_str().unwrap()]);
    let text = stdout(&ascii);
    assert!(text.contains("rank: 4"));
    assert!(text.contains("(1, 1, 0, 0, 0)"));
}

#[test]
fn span_reports_mask_and_dimension() {
    let path = temp_file("span.txt", PARTIAL);
    let out = run(&["span", "3", "2", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["mask"], serde_json::json!([1, 2, 3, 5]));
    assert_eq!(v["dimension"], serde_json::json!(4));

    let ascii = run(&["span", "3", "2", path.to_str().unwrap()]);
    let text = stdout(&ascii);
    assert!(text.contains("mask: {1, 2, 3, 5}"));
    assert!(text.contains("dimension: 4"));

    let csv = run(&["span", "3", "2", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(stdout(&csv).trim(), "1,2,3,5");
}

#[test]
fn span_over_a_field_prints_a_basis() {
    let path = temp_file("field.txt", "(1, 2)\n(2, 1)\n");
    let out = run(&["span", "3", "1", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["field_mode"], serde_json::Value::Bool(true));
    assert_eq!(v["mask"], serde_json::json!([]));
    assert_eq!(v["basis"].as_array().unwrap().len(), 1);
}

#[test]
fn gen_missing_file_is_an_input_error() {
    let out = run(&["gen", "3", "2", "/nonexistent/matrix.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error[Io]"));
}

#[test]
fn gen_rejects_high_powers_in_elements() {
    let path = temp_file("badpow.txt", "(x^2, 1)\n");
    let out = run(&["gen", "3", "2", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("DegreeTooHigh"));
}

#[test]
fn oracle_verify_matches_on_both_problems() {
    let path = temp_file("verify.txt", "(1, x, 0)\n(0, 2, 1)\n");
    let out = run(&["oracle-verify", "3", "2", path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("MATCH gen:"));
    assert!(text.contains("MATCH span:"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn oracle_verify_respects_the_cap_override() {
    let path = temp_file("capped.txt", "(1, x, 0)\n(0, 2, 1)\n");
    let out = bin()
        .args(["oracle-verify", "3", "2", path.to_str().unwrap()])
        .env("ORACLE_CAP", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("CapExceeded"));
}

#[test]
fn oracle_verify_rejects_unknown_routes() {
    let path = temp_file("routes.txt", "(1, x)\n");
    let out = run(&[
        "oracle-verify",
        "3",
        "2",
        path.to_str().unwrap(),
        "--problem",
        "gen",
        "--left",
        "bogus",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown route"));

    let wrong = run(&[
        "oracle-verify",
        "3",
        "2",
        path.to_str().unwrap(),
        "--problem",
        "gen",
        "--left",
        "span-closure",
    ]);
    assert_eq!(wrong.status.code(), Some(2));
    assert!(stderr(&wrong).contains("solves span, not gen"));
}

#[test]
fn route_overrides_require_a_problem() {
    let path = temp_file("noprob.txt", "(1, x)\n");
    let out =
        run(&["oracle-verify", "3", "2", path.to_str().unwrap(), "--left", "gen-closure"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_prints_binomials_and_totals() {
    let choose = run(&["count", "5", "2"]);
    assert!(choose.status.success());
    assert_eq!(stdout(&choose).trim(), "10");

    let total = run(&["count", "5"]);
    assert_eq!(stdout(&total).trim(), "32");

    let json = run(&["count", "4", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["count"], serde_json::json!(6));
}

#[test]
fn triple_prints_the_canonical_witness() {
    let out = run(&["triple", "3", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "(1, x, x)");

    let field = run(&["triple", "3", "1"]);
    assert_eq!(field.status.code(), Some(2));
    assert!(stderr(&field).contains("FullyDistributive"));
}

#[test]
fn gen_json_round_trip_preserves_membership_answers() {
    let path = temp_file("roundtrip.txt", "(1, x, 2)\n(0, 1, 1)\n");
    let out = run(&["gen", "3", "2", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let report: nearvec::GenReport = serde_json::from_str(&stdout(&out)).unwrap();

    let nf = nearvec::NearfieldCtx::build(3, 2).unwrap();
    let basis = report.basis_rows(&nf).unwrap();
    let direct = nearvec::gen::ege(
        &nf,
        &nearvec::nvs::parse_matrix(&nf, "(1, x, 2)\n(0, 1, 1)").unwrap(),
    )
    .unwrap();
    for text in ["(1, x, 2)", "(2, 0, 1)", "(0, 0, x)", "(1, 1, 1)"] {
        let probe = nearvec::nvs::parse_vector(&nf, text).unwrap();
        assert_eq!(
            nearvec::gen::gen_membership(&nf, &basis, &probe).unwrap().is_some(),
            nearvec::gen::gen_membership(&nf, &direct.basis, &probe).unwrap().is_some(),
            "probe {text}"
        );
    }
}
