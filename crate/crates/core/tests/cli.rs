use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclecut"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write_fig1(dir: &Path, k: usize) -> String {
    let path = dir.join(format!("fig1_{k}.json"));
    let p = path.to_str().unwrap().to_string();
    let out = run(&["gen", "--family", "fig1", "--k", &k.to_string(), "-o", &p]);
    assert_eq!(out.status.code(), Some(0));
    p
}

const K5: &str = r#"{"n":5,"root":0,"edges":[
 {"u":0,"v":1,"x":"1/2","cost":"1"},{"u":0,"v":2,"x":"1/2","cost":"1"},{"u":0,"v":3,"x":"1/2","cost":"1"},
 {"u":0,"v":4,"x":"1/2","cost":"1"},{"u":1,"v":2,"x":"1/2","cost":"1"},{"u":1,"v":3,"x":"1/2","cost":"1"},
 {"u":1,"v":4,"x":"1/2","cost":"1"},{"u":2,"v":3,"x":"1/2","cost":"1"},{"u":2,"v":4,"x":"1/2","cost":"1"},
 {"u":3,"v":4,"x":"1/2","cost":"1"}]}"#;

#[test]
fn gen_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fig1(dir.path(), 10);
    let out = run(&["check", &f]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["valid"], true);
    assert_eq!(r["n"], 36);
    assert_eq!(r["lp_value"], "36");
    assert_eq!(r["schema_version"], cyclecut::report_schema_version());
}

#[test]
fn quarter_value_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(
        &f,
        r#"{"n":4,"edges":[{"u":0,"v":1,"x":"1/4","cost":"1"},{"u":1,"v":2,"x":"1","cost":"1"},
            {"u":2,"v":3,"x":"1","cost":"1"},{"u":3,"v":0,"x":"1","cost":"1"}]}"#,
    )
    .unwrap();
    let out = run(&["check", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "HalfIntegralityViolation");
}

#[test]
fn region_check() {
    let out = run(&["region", "--check", "1/3,1/3,1/3,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "in region");
    let out = run(&["region", "--check", "1/2,1/2,0,0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["region", "--check", "1/2,1/2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn region_closure_and_necessity() {
    let out = run(&["region", "--closure-samples", "50", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["closed"], true);
    let out = run(&["region", "--necessity", "7/10,0,3/10,0"]);
    let r = json(&out);
    assert_eq!(r["infeasible"], true);
    assert_eq!(r["certificate"]["max_first_two"], "13/20");
}

#[test]
fn k5_reports_degree_cut() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("k5.json");
    std::fs::write(&f, K5).unwrap();
    let f = f.to_str().unwrap();
    for cmd in [
        vec!["hierarchy", f],
        vec!["sample", f, "-n", "10", "--seed", "0"],
        vec!["expect", f],
    ] {
        let out = run(&cmd);
        assert_eq!(out.status.code(), Some(1), "{cmd:?}");
        assert_eq!(json(&out)["error"]["kind"], "DegreeCutPresent", "{cmd:?}");
    }
    let out = run(&["check", f]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["cycle_cut_instance"], false);
}

#[test]
fn sample_is_byte_identical_across_runs_and_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fig1(dir.path(), 2);
    let a = run(&["sample", &f, "-n", "2000", "--seed", "11", "--jobs", "1"]);
    let b = run(&["sample", &f, "-n", "2000", "--seed", "11", "--jobs", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["violations"]["parity"], 0);
    assert_eq!(r["violations"]["connectivity"], 0);
    assert_eq!(r["violations"]["euler"], 0);
}

#[test]
fn expect_oracle_and_tour() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fig1(dir.path(), 0);
    let out = run(&["expect", &f]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["expected_cost"], "22/3");
    assert_eq!(r["lp_value"], "6");
    assert_eq!(r["bound"], "8");

    let out = run(&["oracle", &f]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["total_probability"], "1");
    assert_eq!(r["all_valid"], true);
    assert_eq!(r["expected_cost"], "22/3");
    assert_eq!(r["matches_closed_form"], true);

    let out = run(&["oracle", &f, "--cap", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "TooLarge");

    let out = run(&["tour", &f, "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let walk = r["walk"].as_array().unwrap();
    assert_eq!(walk.first(), walk.last());
    assert_eq!(run(&["tour", &f, "--seed", "4"]).stdout, out.stdout);
}

#[test]
fn reflect_and_root_options() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fig1(dir.path(), 3);
    for extra in [
        vec!["--reflect"],
        vec!["--root", "7"],
        vec!["--p-root", "0,2/3,1/3,0"],
    ] {
        let mut args = vec!["expect", f.as_str()];
        args.extend(extra.iter().copied());
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{extra:?}");
        // four root edges at 1/2 and 26 edges at 2/3
        assert_eq!(json(&out)["expected_cost"], "58/3", "{extra:?}");
    }
    let out = run(&["expect", &f, "--p-root", "1/2,1/2,0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "RegionViolation");
}

#[test]
fn random_family_and_hierarchy_dot() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("r.json");
    let f = f.to_str().unwrap();
    let out = run(&[
        "gen",
        "--family",
        "random",
        "--blueprint",
        "((L,L),L,(L,L,L))",
        "--costs",
        "random",
        "--seed",
        "5",
        "-o",
        f,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dot = dir.path().join("h.dot");
    let out = run(&["hierarchy", f, "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["shape"], "((L,L),L,(L,L,L))");
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["region"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["check", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn schema_version_is_stable() {
    assert_eq!(cyclecut::report_schema_version(), "1.0.0");
    let out = run(&["region", "--check", "1/3,1/3,1/3,0"]);
    let r = json(&out);
    assert_eq!(cyclecut::schema_warning(&r), None);
    let mut old = r.clone();
    old["schema_version"] = "0.9.0".into();
    assert!(cyclecut::schema_warning(&old).unwrap().contains("0.9.0"));
}

#[test]
fn library_entry_point_matches_binary() {
    let code = cyclecut::cli::run(["cyclecut", "region", "--check", "1/3,1/3,1/3,0"]);
    assert_eq!(code, cyclecut::cli::EXIT_OK);
}
