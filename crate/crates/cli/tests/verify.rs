mod common;

use common::*;

fn verify(dir: &Path, name: &str, extra: &[&str], threads: &str) -> (i32, String) {
    let mut args = vec!["verify", "--quick", "--out-dir", dir.to_str().unwrap(), "--name", name];
    args.extend_from_slice(extra);
    let out = loggp().args(&args).env("RAYON_NUM_THREADS", threads).output().unwrap();
    (code(&out), std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap())
}

use std::path::Path;

fn check<'a>(report: &'a serde_json::Value, name: &str) -> &'a serde_json::Value {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()
}

#[test]
fn seeded_reports_are_byte_identical_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let (code_a, a) = verify(dir.path(), "a", &["--seed", "7"], "1");
    let (code_b, b) = verify(dir.path(), "b", &["--seed", "7"], "4");
    assert_eq!(a, b);
    assert_eq!(code_a, code_b);
    let report: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_schema("verification", &report);
    assert_eq!(report["seed"], 7);
    // exit status follows the report
    let failed = report["failed"].as_u64().unwrap();
    assert_eq!(code_a, if failed == 0 { 0 } else { 1 });
    for name in ["eta-identity", "traveling-wave-residual", "fuzz-monotonicity", "galerkin-conservation"] {
        assert_eq!(check(&report, name)["passed"], true, "{name}");
    }
}

#[test]
fn fc_sign_mutation_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let (status, text) = verify(dir.path(), "m", &["--mutate", "fc-sign"], "4");
    assert_eq!(status, 1);
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_schema("verification", &report);
    assert_eq!(report["mutate"], "fc-sign");
    for name in ["eta-identity", "traveling-wave-residual"] {
        assert_eq!(check(&report, name)["passed"], false, "{name}");
    }
}
