#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use jsonschema::{Draft, JSONSchema};
use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&self.stdout)))
    }

    pub fn err_json(&self) -> Value {
        serde_json::from_slice(&self.stderr).unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {}", String::from_utf8_lossy(&self.stderr)))
    }
}

pub fn curvefill<S: AsRef<str>>(args: &[S]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_curvefill"))
        .args(args.iter().map(|a| a.as_ref()))
        .env_remove("CURVEFILL_HIGH_PRECISION")
        .output()
        .expect("binary runs");
    Run { code: out.status.code().unwrap_or(-1), stdout: out.stdout, stderr: out.stderr }
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

pub fn schema(name: &str) -> JSONSchema {
    let path = schema_dir().join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let raw: Value = serde_json::from_str(&text).unwrap();
    JSONSchema::options().with_draft(Draft::Draft202012).compile(&raw).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn check_schema(name: &str, value: &Value) -> Result<(), String> {
    let s = schema(name);
    let result = s.validate(value).map_err(|errs| {
        let msgs: Vec<String> = errs.take(5).map(|e| format!("{} at {}", e, e.instance_path)).collect();
        format!("{name}: {}", msgs.join("; "))
    });
    result
}

/// Diagram files the file-taking subcommands read.
pub struct Fixture {
    _dir: tempfile::TempDir,
    pub torus: String,
    pub witness: String,
    pub punctured: String,
}

impl Fixture {
    pub fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, args: &[&str]| {
            let r = curvefill(args);
            assert_eq!(r.code, 0, "{args:?}: {}", String::from_utf8_lossy(&r.stderr));
            let p = dir.path().join(name);
            std::fs::write(&p, &r.stdout).unwrap();
            p.to_string_lossy().into_owned()
        };
        let torus = write("torus.json", &["generate", "torus-pair", "1/0", "3/5"]);
        let witness = write("witness.json", &["generate", "witness", "--signature", "2,0"]);
        let punctured = write("punctured.json", &["generate", "torus-pair", "2/3", "-1/4", "--puncture", "0", "--puncture", "3"]);
        Fixture { _dir: dir, torus, witness, punctured }
    }

    /// One or more invocations of every subcommand, each with the schema
    /// its stdout must satisfy.
    pub fn cases(&self) -> Vec<(&'static str, Vec<String>)> {
        let raw: Vec<(&'static str, Vec<&str>)> = vec![
            ("distance", vec!["distance", "0/1", "8/13"]),
            ("distance", vec!["distance", "-7/3", "1/0"]),
            ("intersect", vec!["intersect", "-1/3", "2/5", "--surface", "s04"]),
            ("intersect", vec!["intersect", "1/0", "89/144"]),
            ("geodesic", vec!["geodesic", "0/1", "8/13"]),
            ("diagram", vec!["generate", "lame", "--n", "5"]),
            ("diagram", vec!["generate", "torus-pair", "1/2", "-3/5", "--puncture", "0"]),
            ("diagram", vec!["generate", "torus-pair", "1/2", "-3/5", "--pillowcase"]),
            ("diagram", vec!["generate", "cover", &self.torus, "--degree", "3"]),
            ("diagram", vec!["generate", "cover", &self.torus, "--family", "alpha", "--degree", "2"]),
            ("diagram", vec!["generate", "witness", "--signature", "0,5"]),
            ("diagram", vec!["generate", "witness", "--signature", "2,1"]),
            ("analyze", vec!["diagram", "analyze", &self.torus]),
            ("analyze", vec!["diagram", "analyze", &self.witness]),
            ("analyze", vec!["diagram", "analyze", &self.punctured]),
            ("stratify", vec!["stratify", &self.witness]),
            ("stratify", vec!["stratify", &self.torus]),
            ("stratify_puncture", vec!["stratify", &self.witness, "--puncture"]),
            ("lengths_square_torus", vec!["lengths", "--slope", "3/5"]),
            ("lengths_flat", vec!["lengths", "--metric", "flat", "--slope", "-2/7"]),
            ("lengths_lemma", vec!["lengths", "--lemma-toro", "--n", "8"]),
            ("bounds_pair", vec!["bounds", "pair", "--d", "7", "--k1", "1.5", "--k0", "0.25"]),
            ("bounds_collection", vec!["bounds", "collection", "--d", "2,3,4"]),
            ("bounds_collection", vec!["bounds", "collection", "--slopes", "0/1,1/2,1/0,-3/5"]),
            ("bounds_stratified", vec!["bounds", "stratified", "--d", "3,4,5", "--theorem", "f", "--pairwise-filling"]),
            ("bounds_stratified", vec!["bounds", "stratified", "--d", "3,4"]),
            ("bounds_theorem_c", vec!["bounds", "theorem-c", "--signature", "2,2", "--n", "5"]),
            ("bounds_theorem_c", vec!["bounds", "theorem-c", "--signature", "1,3", "--n", "5"]),
            ("bounds_theorem_c", vec!["bounds", "theorem-c", "--signature", "0,5", "--n", "5"]),
            ("bounds_theorem_d", vec!["bounds", "theorem-d", "--nmax", "12"]),
            ("oracle_distance", vec!["oracle", "distance", "0/1", "8/13"]),
            ("oracle_sweep", vec!["oracle", "sweep", "--height", "6"]),
            ("oracle_lame", vec!["oracle", "lame", "--nmax", "16"]),
        ];
        raw.into_iter().map(|(s, a)| (s, a.into_iter().map(String::from).collect())).collect()
    }
}

/// Invalid inputs that must exit 2 with an error document.
pub fn invalid_cases() -> Vec<Vec<&'static str>> {
    vec![
        vec!["distance", "abc", "1/2"],
        vec!["distance", "0/0", "1/2"],
        vec!["bounds", "pair", "--d", "3", "--k1", "0.5"],
        vec!["bounds", "collection", "--d", "4"],
        vec!["generate", "witness", "--signature", "1,0"],
        vec!["diagram", "analyze", "/nonexistent/curvefill.json"],
        vec!["oracle", "sweep", "--height", "0"],
        vec!["lengths", "--lemma-toro", "--n", "1"],
    ]
}
