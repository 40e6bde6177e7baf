mod common;

use common::{check_schema, curvefill, invalid_cases, Fixture};
use proptest::prelude::*;
use serde_json::Value;

use curvefill::slopes::{farey_distance, Slope};
use curvefill_cli::{run, EXIT_USAGE, EXIT_VALIDATION};

#[test]
fn every_subcommand_matches_its_schema() {
    let fx = Fixture::new();
    let mut seen = std::collections::BTreeSet::new();
    for (name, args) in fx.cases() {
        let r = curvefill(&args);
        assert_eq!(r.code, 0, "{args:?}: {}", String::from_utf8_lossy(&r.stderr));
        assert!(r.stderr.is_empty(), "{args:?}");
        check_schema(name, &r.json()).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        seen.insert(name);
    }
    // every schema on disk is exercised apart from the error one
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas");
    for entry in std::fs::read_dir(dir).unwrap() {
        let stem = entry.unwrap().path().file_stem().unwrap().to_string_lossy().into_owned();
        assert!(stem == "error" || seen.contains(stem.as_str()), "{stem} never used");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let fx = Fixture::new();
    for (_, args) in fx.cases() {
        let (a, b) = (curvefill(&args), curvefill(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.code, b.code);
    }
    let csv = ["bounds", "theorem-d", "--nmax", "10", "--format", "csv"];
    assert_eq!(curvefill(&csv).stdout, curvefill(&csv).stdout);
}

#[test]
fn validation_errors_exit_two_with_a_document() {
    for args in invalid_cases() {
        let r = curvefill(&args);
        assert_eq!(r.code, EXIT_VALIDATION, "{args:?}: {}", String::from_utf8_lossy(&r.stdout));
        assert!(r.stdout.is_empty(), "{args:?}");
        check_schema("error", &r.err_json()).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["frobnicate"],
        vec!["distance", "1/2"],
        vec!["intersect", "1/2", "1/3", "--surface", "klein"],
        vec!["distance", "0/1", "1/0", "--format", "csv"],
    ] {
        let r = curvefill(&args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}");
        assert!(!r.stderr.is_empty());
    }
    assert_eq!(curvefill(&["--help"]).code, 0);
    assert_eq!(curvefill(&["--version"]).code, 0);
}

#[test]
fn generate_then_analyze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.json");
    let gen = curvefill(&["generate", "torus-pair", "2/5", "-1/3", "--puncture", "1"]);
    assert_eq!(gen.code, 0);
    std::fs::write(&path, &gen.stdout).unwrap();
    let p = path.to_string_lossy();
    let a = curvefill(&["diagram", "analyze", &p]).json();
    // ι(2/5, -1/3) = |2·3 + 5| = 11
    assert_eq!(a["crossings"], 11);
    assert_eq!(a["signature"], serde_json::json!({"g": 1, "k": 1}));
    assert_eq!(a["checks"]["poincare_hopf"], true);
    assert_eq!(a["checks"]["euler_identity"], Value::Null);

    // a cover of the file feeds back in
    let up = curvefill(&["generate", "cover", &p, "--degree", "3"]);
    assert_eq!(up.code, 0);
    let up_path = dir.path().join("up.json");
    std::fs::write(&up_path, &up.stdout).unwrap();
    let b = curvefill(&["diagram", "analyze", &up_path.to_string_lossy()]).json();
    assert_eq!(b["crossings"], 33);
    assert_eq!(b["signature"], serde_json::json!({"g": 1, "k": 3}));
}

#[test]
fn csv_only_for_the_ratio_table() {
    let r = curvefill(&["bounds", "theorem-d", "--nmax", "6", "--format", "csv"]);
    assert_eq!(r.code, 0);
    let text = String::from_utf8(r.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // header plus n = 3..=6
    assert_eq!(lines.len(), 1 + 4);
    let width = lines[0].split(',').count();
    assert!(lines.iter().all(|l| l.split(',').count() == width));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn in_process_distance_matches_library(p1 in -40i64..=40, q1 in 1i64..=40, p2 in -40i64..=40, q2 in 1i64..=40) {
        prop_assume!(num_integer::gcd(p1, q1) == 1 && num_integer::gcd(p2, q2) == 1);
        let (a, b) = (format!("{p1}/{q1}"), format!("{p2}/{q2}"));
        let out = run(["curvefill", "distance", a.as_str(), b.as_str()]);
        prop_assert_eq!(out.code, 0);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        let (x, y): (Slope, Slope) = (a.parse().unwrap(), b.parse().unwrap());
        prop_assert_eq!(v["distance"].as_u64().unwrap() as usize, farey_distance(&x, &y));
    }
}
