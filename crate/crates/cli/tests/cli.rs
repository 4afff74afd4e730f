use std::process::{Command, Output};

use isotropy_core::acceptance::{worked_example_expected, worked_example_f};
use isotropy_core::json::MatrixJson;
use isotropy_core::ExactMatrix;
use serde_json::Value;

const EXAMPLE: &str = r#"{"lambda":"0","blocks":[{"alpha":4,"m":2},{"alpha":2,"m":3},{"alpha":1,"m":1}]}"#;
const SMALL: &str = r#"{"lambda":"1 + i","blocks":[{"alpha":2,"m":1},{"alpha":1,"m":1}]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isotropy"))
        .args(args)
        .env_remove("ISOTROPY_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}); stderr: {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn matrix(v: &Value) -> ExactMatrix {
    let m: MatrixJson = serde_json::from_value(v.clone()).unwrap();
    ExactMatrix::try_from(&m).unwrap()
}

#[test]
fn dim_of_scalar_structure() {
    let out = run(&["dim", "--structure", r#"{"lambda":"0","blocks":[{"alpha":1,"m":3}]}"#]);
    assert!(out.status.success());
    assert_eq!(json(&out), serde_json::json!({"dimension": 3}));
}

#[test]
fn codim_and_describe() {
    let out = run(&["codim", "--structure", SMALL]);
    assert_eq!(json(&out)["codimension"], 4);
    let out = run(&["describe", "--structure", SMALL]);
    let d = json(&out);
    assert_eq!(d["dimension"], 1);
    assert_eq!(d["unipotent_dimension"], 1);
}

#[test]
fn canonical_for_single_block() {
    let out = run(&["canonical", "--structure", r#"{"lambda":"0","blocks":[{"alpha":2,"m":1}]}"#]);
    let v = json(&out);
    assert_eq!(matrix(&v["F"]), ExactMatrix::from_int_rows(&[&[0, 1], &[1, 0]]));
    assert!(matrix(&v["Omega"]).is_identity());
}

#[test]
fn generators_reproduce_worked_example() {
    let f = worked_example_f();
    let spec = serde_json::json!({"kind": "G", "p": 1, "t": 2, "k": 0, "F": MatrixJson::from(&f)});
    let out = run(&["generators", "--structure", EXAMPLE, "--params", &spec.to_string()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(matrix(&v["generators"][0]["matrix"]), worked_example_expected(&f));
}

#[test]
fn verify_identity_and_non_member() {
    let id = MatrixJson::from(&ExactMatrix::identity(3));
    let out = run(&["verify", "--structure", SMALL, "--matrix", &serde_json::to_string(&id).unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["member"], true);

    let two = MatrixJson::from(&ExactMatrix::identity(3).scale(&isotropy_core::ExactScalar::from_int(2)));
    let out = run(&["verify", "--structure", SMALL, "--matrix", &serde_json::to_string(&two).unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["member"], false);
}

#[test]
fn sample_is_deterministic_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let a_s = a.to_str().unwrap();
    assert!(run(&["sample", "--structure", EXAMPLE, "--seed", "17", "--out", a_s]).status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_isotropy"))
        .args(["sample", "--structure", EXAMPLE, "--out", b.to_str().unwrap()])
        .env("ISOTROPY_SEED", "17")
        .output()
        .unwrap();
    assert!(out.status.success());
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["provenance"]["seed"], 17);
    assert_eq!(v["provenance"]["params_sha256"].as_str().unwrap().len(), 64);

    let q = serde_json::to_string(&v["q"]).unwrap();
    let out = run(&["verify", "--structure", EXAMPLE, "--matrix", &q]);
    assert_eq!(json(&out)["member"], true);

    // The sample's own params reproduce it.
    let params = dir.path().join("params.json");
    std::fs::write(&params, serde_json::to_string(&v["params"]).unwrap()).unwrap();
    let out = run(&["sample", "--structure", EXAMPLE, "--params", params.to_str().unwrap()]);
    assert_eq!(json(&out)["q"], v["q"]);

    let out = run(&["factor", "--structure", EXAMPLE, "--matrix", &q]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["reconstructs"], true);
}

#[test]
fn multi_structure_sample() {
    let multi = r#"{"parts":[{"lambda":"0","blocks":[{"alpha":2,"m":1}]},{"lambda":"2","blocks":[{"alpha":1,"m":2}]}]}"#;
    let out = run(&["sample", "--structure", multi, "--seed", "4"]);
    assert!(out.status.success());
    let q = matrix(&json(&out)["q"]);
    assert_eq!(q.shape(), (4, 4));
    let out = run(&["dim", "--structure", multi]);
    assert_eq!(json(&out)["dimension"], 1);
}

#[test]
fn commutant_count() {
    let out = run(&["commutant", "--structure", SMALL]);
    let v = json(&out);
    assert_eq!(v["dimension"], 5);
    assert_eq!(v["basis"].as_array().unwrap().len(), 5);
}

#[test]
fn input_errors_exit_2() {
    let out = run(&["dim", "--structure", r#"{"lambda":"1 +","blocks":[{"alpha":1,"m":1}]}"#]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["dim"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["dim", "--structure", "/nonexistent/structure.json"]);
    assert_eq!(out.status.code(), Some(2));
    let bad = r#"{"kind":"G","p":2,"t":1,"k":0,"F":{"rows":1,"cols":1,"entries":["1"]}}"#;
    let out = run(&["generators", "--structure", SMALL, "--params", bad]);
    assert_eq!(out.status.code(), Some(2));
    let two = MatrixJson::from(&ExactMatrix::identity(3).scale(&isotropy_core::ExactScalar::from_int(2)));
    let out = run(&["factor", "--structure", SMALL, "--matrix", &serde_json::to_string(&two).unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

/// The suite reports one entry per criterion. Criterion 5 carries the
/// `(G − I)^α₁` bound, which two-block generators violate, so the run as a
/// whole reports failure and exits 1.
#[test]
fn selftest_reports_every_criterion() {
    let out = run(&["selftest", "--max-n", "4", "--seed", "9"]);
    let v = json(&out);
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 10);
    for c in criteria {
        assert_eq!(c["passed"], c["id"] != 5, "criterion {}", c["id"]);
    }
    assert_eq!(v["passed"], false);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().filter(|l| l.contains("criterion")).count(), 10);
}
