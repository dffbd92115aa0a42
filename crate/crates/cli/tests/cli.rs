use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chromadepth"))
}

fn run(args: &[&str]) -> (i32, Value) {
    run_with(bin().args(args))
}

fn run_with(cmd: &mut Command) -> (i32, Value) {
    let out: Output = cmd.output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let v = if code == 2 {
        Value::Null
    } else {
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
    };
    (code, v)
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.join(name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", s(&p)]);
    assert_eq!(run(&all).0, 0);
    p
}

#[test]
fn csd_extremal_meets_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "e.json", &["config", "--shape", "2,3,4", "--extremal"]);
    let (code, r) = run(&["csd", s(&f), "--assert-bound"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["csd"], 7);
    assert_eq!(r["results"]["bound"], 7);
    assert_eq!(r["results"]["centered"], true);
    assert_eq!(r["results"]["rgp"], true);
    assert_eq!(r["violations"], serde_json::json!([]));
    assert!(r["inputs"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn csd_on_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "d1.json",
        r#"{"dimension":1,"classes":[[["-1"],["1"]],[[-2],["3"]]]}"#,
    );
    let (code, r) = run(&["csd", s(&f), "--list"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["csd"], 2);
    assert_eq!(r["results"]["bound"], 2);
    assert_eq!(r["results"]["hitting"].as_array().unwrap().len(), 2);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{");
    assert_eq!(run(&["csd", s(&bad)]).0, 2);
    assert_eq!(run(&["csd", s(&dir.path().join("missing.json"))]).0, 2);
    let wrong = write(dir.path(), "w.json", r#"{"dimension":2,"classes":[[["1"]]]}"#);
    assert_eq!(run(&["csd", s(&wrong)]).0, 2);
}

#[test]
fn assert_bound_violation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // Not centered, so the bound does not apply and is exceeded.
    let f = write(
        dir.path(),
        "nc.json",
        r#"{"dimension":1,"classes":[[[-1],[-2],[-3]],[[1],[2],[3]]]}"#,
    );
    let (code, r) = run(&["csd", s(&f), "--assert-bound"]);
    assert_eq!(code, 1);
    assert_eq!(r["results"]["csd"], 9);
    assert_eq!(r["violations"].as_array().unwrap().len(), 1);
    assert_eq!(run(&["csd", s(&f)]).0, 0);
}

#[test]
fn verify_batches_pass() {
    let dir = tempfile::tempdir().unwrap();
    for shape in ["2,2,2", "3,3"] {
        let (code, r) = run(&[
            "verify",
            "--shape",
            shape,
            "--seeds",
            "100",
            "--reproducer-dir",
            s(dir.path()),
        ]);
        assert_eq!(code, 0, "{r}");
        assert_eq!(r["results"]["instances"], 100);
        assert_eq!(r["seed"], 0);
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn verify_is_deterministic_across_pool_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify",
        "--shape",
        "3,3,3",
        "--seeds",
        "12",
        "--seed",
        "5",
        "--reproducer-dir",
        s(dir.path()),
    ];
    let (_, a) = run_with(bin().args(args).env("CHROMADEPTH_THREADS", "1"));
    let (_, b) = run_with(bin().args(args).env("CHROMADEPTH_THREADS", "4"));
    for key in ["csd_min", "csd_max", "failures", "seeds", "sarrabezolles_sampled"] {
        assert_eq!(a["results"][key], b["results"][key]);
    }
    assert_eq!(a["inputs"], b["inputs"]);
    assert_eq!(a["results"]["threads"], 1);
}

#[test]
fn corrupted_generator_is_caught_with_reproducer() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = run(&[
        "verify",
        "--shape",
        "2,2",
        "--seeds",
        "2",
        "--seed",
        "17",
        "--inject-fault",
        "--reproducer-dir",
        s(dir.path()),
    ]);
    assert_eq!(code, 1);
    let failures = r["results"]["failures"].as_array().unwrap();
    assert_eq!(failures[0]["seed"], 17);
    let repro: Value =
        serde_json::from_str(&std::fs::read_to_string(failures[0]["reproducer"].as_str().unwrap()).unwrap()).unwrap();
    assert_eq!(repro["seed"], 17);
    assert!(repro["configuration"]["classes"].is_array());
    assert!(r["violations"][0].as_str().unwrap().starts_with("seed 17"));
}

#[test]
fn tmf_extremal_and_fans() {
    let (code, r) = run(&["tmf", "--extremal", "2,2"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["count"], 5);
    assert_eq!(r["results"]["equality"], true);
    let (code, r) = run(&["tmf", "--extremal", "2,2,2", "--fans"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["count"], 9);
    assert_eq!(r["results"]["fans"]["maximal_cones"], 9);
}

#[test]
fn tmf_random_triangles_respect_the_bound() {
    for seed in 0..6 {
        let (code, r) = run(&["tmf", "--random", "2,2", "--fans", "--seed", &seed.to_string()]);
        assert_eq!(code, 0);
        assert!(r["results"]["count"].as_u64().unwrap() <= 5);
        assert_eq!(r["results"]["count"], r["results"]["fans"]["maximal_cones"]);
        assert_eq!(r["seed"], seed);
    }
}

#[test]
fn tmf_dimension_mismatch_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "t.json", &["simplices", "--dims", "2,2", "--ambient", "2"]);
    assert_eq!(run(&["tmf", s(&f)]).0, 2);
}

#[test]
fn gale_inverse_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "e.json", &["config", "--shape", "3,3,3", "--extremal"]);
    let (code, r) = run(&["gale", "--inverse", s(&f)]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["round_trip"], true);
    let simplices = &r["results"]["simplices"];
    assert_eq!(simplices["simplices"].as_array().unwrap().len(), 3);
    // The returned simplices realize the extremal (2,2,2) sum.
    let sf = write(dir.path(), "s.json", &simplices.to_string());
    assert_eq!(run(&["tmf", s(&sf)]).1["results"]["count"], 9);
}

#[test]
fn gale_of_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "sq.json",
        r#"{"dimension":2,"points":[[1,1],[1,-1],[-1,1],[-1,-1]]}"#,
    );
    let (code, r) = run(&["gale", s(&f)]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["dimension"], 1);
    let v: Vec<&str> = r["results"]["vectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x[0].as_str().unwrap())
        .collect();
    assert!(v == ["1", "-1", "-1", "1"] || v == ["-1", "1", "1", "-1"]);
}

#[test]
fn ptransform_coincidence_on_triangles() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "3"] {
        let f = generate(
            dir.path(),
            "t.json",
            &["simplices", "--dims", "2,2", "--ambient", "2", "--seed", seed],
        );
        let (code, r) = run(&["ptransform", "--coincidence", s(&f)]);
        assert_eq!(code, 0);
        assert_eq!(r["results"]["coincidence"], true);
    }
}

#[test]
fn flip_walk_is_certified_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "a.json", &["config", "--shape", "3,3,3", "--seed", "1"]);
    let b = generate(dir.path(), "b.json", &["config", "--shape", "3,3,3", "--seed", "2"]);
    let args = ["flip", s(&a), "--walk", s(&b), "--seed", "42"];
    let (code, r) = run(&args);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["seed"], 42);
    let res = &r["results"];
    if res["success"] == true {
        for f in res["flips"].as_array().unwrap() {
            assert_eq!(f["certificate"]["valid"], true);
            assert_eq!(f["endpoint_betti"], serde_json::json!([1, 1]));
        }
        // Each flip can be rechecked from its own path file.
        if let Some(f) = res["flips"].as_array().unwrap().first() {
            let p = write(dir.path(), "p.json", &f["path"].to_string());
            let (code, r) = run(&["flip", s(&p)]);
            assert_eq!(code, 0);
            assert_eq!(r["results"]["certificate"]["valid"], true);
        }
    } else {
        assert!(res["reason"].is_string());
    }
    assert_eq!(run(&args).1["results"], r["results"]);
}

#[test]
fn betti_of_a_hollow_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "k.json", r#"{"vertices":3,"facets":[[0,1],[1,2],[0,2]]}"#);
    let (code, r) = run(&["--format", "json", "betti", s(&f)]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["reduced_betti"], serde_json::json!([0, 1]));
}

#[test]
fn text_format_is_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), "e.json", &["config", "--shape", "2,2", "--extremal"]);
    let out = bin().args(["--format", "text", "csd", s(&f)]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("csd") && l.trim_end().ends_with('2')));
    assert!(text.contains("violations: none"));
}
