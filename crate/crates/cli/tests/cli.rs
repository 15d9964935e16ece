use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn normcoset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normcoset"))
        .args(args)
        .env_remove("NORMCOSET_CAP")
        .output()
        .unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schema")
        .join(name);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    })
}

fn assert_valid(v: &Value) {
    let validator = schema("report.schema.json");
    let errors: Vec<String> = validator
        .iter_errors(v)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

#[test]
fn normalizers_hn_at_radius_3() {
    let out = normcoset(&["normalizers", "--group", "Hn", "--subgroup", "0", "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_valid(&v);
    for e in v["elements"].as_array().unwrap() {
        let label = e["element"].as_str().unwrap();
        // Labels read `<word> φ^<k>`; H_0 words use only letters g0, g1, ...
        let (word, shift) = label.rsplit_once(" φ^").unwrap();
        let shift: i64 = shift.parse().unwrap();
        let in_h0 = word == "e" || word.split(' ').all(|s| !s.starts_with("g-"));
        let expected = match (in_h0, shift) {
            (true, 0) => "two_sided",
            (true, k) if k > 0 => "one_sided_only",
            _ => "non_normalizing",
        };
        assert_eq!(e["verdict"], expected, "{label}");
    }
}

#[test]
fn normal_subgroup_is_two_sided_everywhere() {
    let out = normcoset(&["normalizers", "--group", "S3", "--subgroup", "A3", "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_valid(&v);
    assert_eq!(v["summary"]["two_sided"], 6);
}

#[test]
fn radius_zero_is_the_identity() {
    let out = normcoset(&["normalizers", "--group", "Hn", "--radius", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_valid(&v);
    assert_eq!(v["ball_size"], 1);
    assert_eq!(v["elements"][0]["verdict"], "two_sided");
}

#[test]
fn bimodules_ex74() {
    let out = normcoset(&["bimodules", "--group", "Ex74", "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_valid(&v);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes[0]["trace"], 1);
    assert!(classes[1..].iter().all(|c| c["trace"] == 2));
}

#[test]
fn bimodules_free_factor_has_only_h_finite() {
    let out = normcoset(&["bimodules", "--group", "F2-in-F3", "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_valid(&v);
    assert_eq!(v["finite_trace_classes"], 1);
}

#[test]
fn bimodules_finite_pair_total_is_index() {
    let out = normcoset(&["bimodules", "--group", "S4", "--subgroup", "D4", "--radius", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_valid(&v);
    assert_eq!(v["total_trace"], 3);
    assert_eq!(v["index"], 3);
}

#[test]
fn group_algebra_verdicts() {
    for (g, dims, verdict) in [
        ("S3", vec![1, 1, 2], "intermediate"),
        ("Z4", vec![1; 4], "regular"),
        ("A5", vec![1, 3, 3, 4, 5], "singular"),
    ] {
        let out = normcoset(&["group-algebra", "--group", g]);
        assert_eq!(out.status.code(), Some(0), "{g}");
        let v = report(&out);
        assert_valid(&v);
        assert_eq!(v["dimensions"], serde_json::json!(dims), "{g}");
        assert_eq!(v["verdict"], verdict, "{g}");
    }
}

#[test]
fn verify_paper_radius_zero_is_inconclusive() {
    let out = normcoset(&["verify-paper", "--example", "6.3", "--radius", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let v = report(&out);
    assert_valid(&v);
    assert_eq!(v["inconclusive"], true);
}

#[test]
fn verify_paper_unknown_example() {
    let out = normcoset(&["verify-paper", "--example", "9.9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_paper_report_validates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = normcoset(&[
        "verify-paper",
        "--example",
        "7.4",
        "--example",
        "5.4-catalog",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_valid(&v);
    assert_eq!(v["all_pass"], true);
}

#[test]
fn element_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_normcoset"))
        .args(["normalizers", "--group", "Hn", "--radius", "3"])
        .env("NORMCOSET_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn bad_arguments_exit_1() {
    assert_eq!(normcoset(&["normalizers", "--group", "Nope"]).status.code(), Some(1));
    assert_eq!(normcoset(&["normalizers", "--radius", "1"]).status.code(), Some(1));
    assert_eq!(
        normcoset(&["normalizers", "--group", "S3", "--max-elements", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(normcoset(&["group-algebra", "--group", "Hn"]).status.code(), Some(1));
}

#[test]
fn group_definition_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s3.json");
    let doc = r#"{ "family": "permutations", "degree": 3, "generators": ["(12)", "(123)"],
                   "subgroup": { "kind": "generated", "generators": ["(123)"] } }"#;
    std::fs::write(&path, doc).unwrap();
    let group_schema = schema("group.schema.json");
    assert!(group_schema.is_valid(&serde_json::from_str(doc).unwrap()));

    let out = normcoset(&["normalizers", "--group", path.to_str().unwrap(), "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_valid(&v);
    assert_eq!(v["summary"]["two_sided"], 6);
}

#[test]
fn group_schema_rejects_unknown_family() {
    let group_schema = schema("group.schema.json");
    assert!(!group_schema.is_valid(&serde_json::json!({ "family": "braid", "strands": 3 })));
    assert!(group_schema.is_valid(&serde_json::json!({
        "family": "product",
        "left": { "family": "free_by_z", "window": { "lo": -2, "hi": 2 } },
        "right": { "family": "builtin", "name": "S3" },
        "subgroup": { "kind": "product", "left": { "kind": "hn", "n": 0 }, "right": { "kind": "named", "name": "A3" } }
    })));
}

#[test]
fn reports_are_deterministic() {
    let a = normcoset(&["group-algebra", "--group", "S4", "--seed", "3"]);
    let b = normcoset(&["group-algebra", "--group", "S4", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}
