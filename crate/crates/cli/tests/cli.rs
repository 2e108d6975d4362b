use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dstar"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(format!("{name}.json"))
}

fn run(path: &Path, extra: &[&str]) -> Output {
    bin().args(extra).arg("run").arg(path).output().unwrap()
}

fn verify_value(dir: &tempfile::TempDir, cert: &Value) -> Output {
    let path = dir.path().join("cert.json");
    std::fs::write(&path, serde_json::to_string_pretty(cert).unwrap()).unwrap();
    bin().arg("verify").arg(&path).output().unwrap()
}

fn certificate(name: &str) -> Value {
    let out = run(&fixture(name), &[]);
    assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const EXPECTED: &[(&str, &str)] = &[
    ("charts", "charts"),
    ("charts_cusp", "charts"),
    ("colon", "colon"),
    ("contract_chart", "contraction"),
    ("contract_extension", "contraction"),
    ("dstar_member", "member"),
    ("dstar_non_member", "non-member"),
    ("eliminate_cubic", "eliminated"),
    ("gb_one", "basis"),
    ("gb_twisted_cubic", "basis"),
    ("gb_unit", "basis"),
    ("glue_exceptional", "glued"),
    ("glue_fails", "not-glued"),
    ("intersect", "intersection"),
    ("member_no", "non-member"),
    ("member_quotient", "member"),
    ("member_yes", "member"),
    ("nagata_member_chart", "member"),
    ("nagata_member_non_member", "non-member"),
    ("phi", "unit-everywhere"),
    ("primitive_no", "not-primitive"),
    ("primitive_yes", "primitive"),
    ("pullback", "pullback"),
    ("relevant_no", "not-relevant"),
    ("relevant_not_in_ring", "generator-not-in-ring"),
    ("relevant_yes", "relevant"),
    ("roundtrip_square", "identity"),
    ("saturate", "saturation"),
    ("theta", "passed"),
    ("theta_cube", "passed"),
    ("to_relevant", "relevant-ideal"),
    ("to_sheaf", "sheaf"),
    ("to_sheaf_xy", "sheaf"),
];

#[test]
fn every_fixture_is_listed() {
    let mut names: Vec<String> = std::fs::read_dir(fixture("x").parent().unwrap())
        .unwrap()
        .map(|e| e.unwrap().path().file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    names.sort();
    let listed: Vec<&str> = EXPECTED.iter().map(|(n, _)| *n).collect();
    assert_eq!(names, listed);
}

#[test]
fn fixtures_run_verify_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for (name, verdict) in EXPECTED {
        let first = run(&fixture(name), &[]);
        assert_eq!(first.status.code(), Some(0), "{name}");
        let second = run(&fixture(name), &["--jobs", "3"]);
        assert_eq!(first.stdout, second.stdout, "{name}: output depends on the run");
        let cert: Value = serde_json::from_slice(&first.stdout).unwrap();
        assert_eq!(cert["schema"], "dstar-certificate/1");
        assert_eq!(cert["verdict"], *verdict, "{name}");
        let out = verify_value(&dir, &cert);
        assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "valid", "{name}");
        assert_eq!(out.status.code(), Some(0));
    }
}

#[test]
fn expected_answers() {
    assert_eq!(certificate("gb_one")["result"]["gb"]["basis"], serde_json::json!(["1"]));
    assert_eq!(certificate("gb_unit")["result"]["gb"]["basis"], serde_json::json!(["1"]));
    assert_eq!(
        certificate("eliminate_cubic")["result"]["eliminate"]["generators"],
        serde_json::json!(["x^3 - y^2"])
    );
    assert_eq!(certificate("intersect")["result"]["intersect"]["generators"], serde_json::json!(["x*y"]));
    assert_eq!(certificate("saturate")["result"]["saturate"]["generators"], serde_json::json!(["y"]));
    let chart = certificate("nagata_member_chart");
    assert_eq!(chart["result"]["nagata-member"]["g"], "u*t + 1");
    let glue = certificate("glue_fails");
    assert_eq!(glue["result"]["glue"]["failing_pair"], serde_json::json!([1, 2]));
    let exceptional = serde_json::json!([["x"], ["y"]]);
    assert_eq!(certificate("pullback")["result"]["pullback"]["sheaf"], exceptional);
    assert_eq!(certificate("to_sheaf")["result"]["to-sheaf"]["sheaf"], exceptional);
    assert_eq!(certificate("to_sheaf_xy")["result"]["to-sheaf"]["sheaf"], exceptional);
}

fn tampered(name: &str, edit: impl FnOnce(&mut Value)) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let mut cert = certificate(name);
    edit(&mut cert);
    let out = verify_value(&dir, &cert);
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn tampered_certificates_are_invalid() {
    let (code, msg) = tampered("nagata_member_chart", |c| {
        c["result"]["nagata-member"]["g"] = "u*y*t + y".into();
    });
    assert_eq!(code, 1);
    assert!(msg.starts_with("invalid:"), "{msg}");

    let (code, _) = tampered("member_no", |c| c["verdict"] = "member".into());
    assert_eq!(code, 1);

    let (code, _) = tampered("gb_unit", |c| {
        c["result"]["gb"]["basis"] = serde_json::json!(["x"]);
    });
    assert_eq!(code, 1);

    let (code, _) = tampered("glue_fails", |c| {
        c["result"]["glue"]["failing_pair"] = serde_json::json!([2, 1]);
    });
    assert_eq!(code, 1);

    let (code, _) = tampered("pullback", |c| {
        c["result"]["pullback"]["sheaf"] = serde_json::json!([["x^2"], ["y"]]);
    });
    assert_eq!(code, 1);

    let (code, _) = tampered("primitive_yes", |c| c["problem"]["payload"]["poly"] = "x*t + x".into());
    assert_eq!(code, 1);
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        "not json",
        r#"{"schema":"dstar-problem/9","ring":["x"],"task":"gb","payload":{"gens":["x"]}}"#,
        r#"{"schema":"dstar-problem/1","ring":["x"],"task":"gb","payload":{"gens":["2x"]}}"#,
        r#"{"schema":"dstar-problem/1","ring":["x"],"task":"gb","payload":{"gens":["x"]},"extra":1}"#,
        r#"{"schema":"dstar-problem/1","ring":["x"],"task":"glue","payload":{"sheaf":[["x"]]}}"#,
        r#"{"schema":"dstar-problem/1","ring":["x"],"task":"nope"}"#,
    ];
    for (i, text) in cases.iter().enumerate() {
        let path = dir.path().join(format!("p{i}.json"));
        std::fs::write(&path, text).unwrap();
        let out = run(&path, &[]);
        assert_eq!(out.status.code(), Some(2), "case {i}");
        assert!(!out.stderr.is_empty());
        let out = bin().arg("verify").arg(&path).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "verify case {i}");
    }
    let out = run(&dir.path().join("missing.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_flag_rules() {
    let out = run(&fixture("gb_unit"), &["--oracle"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&fixture("dstar_member"), &["--oracle", "--deg-bound", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let cert: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["oracle"]["agrees"], true);
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(verify_value(&dir, &cert).status.code(), Some(0));
}

#[test]
fn order_flag_is_recorded() {
    let lex = run(&fixture("gb_twisted_cubic"), &["--order", "grevlex"]);
    assert_eq!(lex.status.code(), Some(0));
    let cert: Value = serde_json::from_slice(&lex.stdout).unwrap();
    assert_eq!(cert["order"], "grevlex");
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(verify_value(&dir, &cert).status.code(), Some(0));
}
