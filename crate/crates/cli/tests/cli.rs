use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// A scratch copy of the fixtures with finset04.json generated in place.
fn workdir() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "json") && !p.ends_with("finset04.json") {
            std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
        }
    }
    let out = run(dir.path(), &["gen", "finset", "--max-size", "4", "-o", "finset04.json"]);
    assert!(out.status.success());
    dir
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spanforge"))
        .current_dir(dir)
        .env_remove("SPANFORGE_BUDGET")
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn exit_codes_follow_verdicts() {
    let fx = fixtures();
    assert_eq!(code(&run(&fx, &["validate", "z2.json"])), 0);
    assert_eq!(code(&run(&fx, &["has-pullbacks", "b2.json"])), 0);
    assert_eq!(code(&run(&fx, &["has-pullbacks", "finsurj12.json"])), 1);
    assert_eq!(code(&run(&fx, &["span-tight", "disc2_to_iso.functor.json"])), 0);
    assert_eq!(code(&run(&fx, &["span-tight", "arrow_to_terminal.functor.json"])), 1);
    assert_eq!(code(&run(&fx, &["invert", "z2.json", "--morphism", "s"])), 0);
    assert_eq!(code(&run(&fx, &["classic-equiv", "b2.json"])), 0);
    assert_eq!(code(&run(&fx, &["check-laws", "z2_id.functor.json"])), 0);
}

#[test]
fn commands_on_finset04() {
    let dir = workdir();
    let d = dir.path();
    let out = run(d, &["pullback", "finset04.json", "--cospan", "f2to1:00,f2to1:00", "--canonical"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("s_L = f4to2:0011, s_R = f4to2:0101"));

    let out = run(d, &["span-tight", "incl.functor.json"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("f2to1:00"));

    let out = run(d, &["check-laws", "incl.functor.json"]);
    assert_eq!(code(&out), 1);
    let out = run(d, &["check-laws", "incl.functor.json", "--force", "--json"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("undefined_composites"));

    let out = run(d, &["preserves", "z2_regular.functor.json"]);
    assert_eq!(code(&out), 0);

    let out = run(d, &["compose", "finset04.json", "--first", "f2to2:10", "--then", "f2to2:10"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("= f2to2:01"));
}

#[test]
fn budget_exceeded_exits_3() {
    let dir = workdir();
    let d = dir.path();
    let args = ["--budget", "10", "pullback", "finset04.json", "--cospan", "f2to1:00,f2to1:00"];
    let out = run(d, &args);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("budget exceeded"));
    let mut json = vec!["--json"];
    json.extend(args);
    let out = run(d, &json);
    assert_eq!(code(&out), 3);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["budget_hit"], true);

    let out = Command::new(env!("CARGO_BIN_EXE_spanforge"))
        .current_dir(d)
        .env("SPANFORGE_BUDGET", "10")
        .args(["has-pullbacks", "finset04.json"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("broken.json"), "{\n  \"name\": \"X\",\n  \"objects\": [\n").unwrap();
    let out = run(d, &["validate", "broken.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));

    let bad_identity = r#"{
  "name": "BAD",
  "objects": ["x"],
  "morphisms": [
    {"id": "id_x", "src": "x", "tgt": "x"},
    {"id": "a", "src": "x", "tgt": "x"}
  ],
  "identities": {"x": "id_x"},
  "composition": [
    {"first": "id_x", "then": "id_x", "equals": "id_x"},
    {"first": "id_x", "then": "a", "equals": "id_x"},
    {"first": "a", "then": "id_x", "equals": "a"},
    {"first": "a", "then": "a", "equals": "a"}
  ]
}
"#;
    std::fs::write(d.join("bad.json"), bad_identity).unwrap();
    let out = run(d, &["validate", "bad.json"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    let out = run(d, &["--json", "validate", "bad.json"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("\"valid\": false"));

    let fx = fixtures();
    assert_eq!(code(&run(&fx, &["validate", "missing.json"])), 2);
    assert_eq!(code(&run(&fx, &["invert", "z2.json", "--morphism", "nope"])), 2);
    assert_eq!(code(&run(&fx, &["pullback", "z2.json", "--cospan", "s"])), 2);
}

#[test]
fn sampled_mode_requires_a_seed() {
    let fx = fixtures();
    let out = run(&fx, &["check-laws", "b2_id.functor.json", "--mode", "sampled"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--seed"));
    let args = ["--json", "check-laws", "b2_id.functor.json", "--mode", "sampled", "--seed", "7", "--samples", "50"];
    let a = run(&fx, &args);
    let b = run(&fx, &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_output_is_deterministic() {
    let fx = fixtures();
    for args in [
        &["--json", "span-tight", "arrow_to_terminal.functor.json"][..],
        &["--json", "has-pullbacks", "finsurj12.json"][..],
        &["--json", "check-laws", "b2_id.functor.json"][..],
        &["--json", "pullback", "fintop2.json", "--cospan", "T1:0.1~T1:0.1~0,T1:0.1~T1:0.1~0"][..],
    ] {
        let a = run(&fx, args);
        let b = run(&fx, args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        serde_json::from_slice::<serde_json::Value>(&a.stdout).unwrap();
    }
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(d, &["gen", "fintop", "--max-points", "2", "-o", "t.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read(d.join("t.json")).unwrap(),
        std::fs::read(fixtures().join("fintop2.json")).unwrap()
    );
    let out = run(d, &["gen", "finsurj", "--sizes", "0,1"]);
    assert_eq!(code(&out), 2);
}
