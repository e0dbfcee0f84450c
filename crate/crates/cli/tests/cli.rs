use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn uob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uob")).args(args).env_remove("UOB_WORKERS").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn ok_json(args: &[&str]) -> Value {
    let out = uob(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    json_of(&out)
}

fn fixture(dir: &Path, name: &str) -> PathBuf {
    let p = dir.join(format!("{name}.json"));
    ok_json(&["construct", "fixture", name, "--output", p.to_str().unwrap()]);
    p
}

#[test]
fn check_fig2() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture(dir.path(), "fig2");
    let v = ok_json(&["check", f.to_str().unwrap()]);
    assert_eq!(v["admissible"], true);
    assert_eq!(v["colors"], 6);
    assert_eq!(v["maximal"], true);
    assert_eq!(v["locc"], false);
}

#[test]
fn check_rejects_inadmissible() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    // Four distinct colors on a square leave the diagonal 0,3 without a witness.
    std::fs::write(
        &p,
        r#"{"schema_version":1,"n":2,"edges":[
            {"from":0,"to":1,"color":"red"},{"from":2,"to":3,"color":"blue"},
            {"from":0,"to":2,"color":"green"},{"from":1,"to":3,"color":"gold"}]}"#,
    )
    .unwrap();
    let out = uob(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["admissible"], false);
    assert_eq!(v["violation"], serde_json::json!([0, 3]));
}

#[test]
fn malformed_documents_report_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"schema_version":1,"n":2,"edges":[{"from":0,"to":3,"color":1}]}"#).unwrap();
    let out = uob(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let msg = json_of(&out)["error"].as_str().unwrap().to_string();
    assert!(msg.contains("edges[0]"), "{msg}");

    let out = uob(&["check", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["error"].is_string());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(uob(&["check"]).status.code(), Some(2));
    assert_eq!(uob(&["enumerate", "--n", "3", "--filter", "bogus"]).status.code(), Some(2));
    assert_eq!(uob(&["synthesize", "--coloring", "x.json"]).status.code(), Some(2));
}

#[test]
fn classify_fig1_and_refinement() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture(dir.path(), "fig1");
    let v = ok_json(&["classify", f.to_str().unwrap()]);
    assert_eq!(v["max_family"], true);
    assert_eq!(v["locc"], true);
    assert_eq!(v["refinement"], Value::Null);

    let m = dir.path().join("minimal.json");
    ok_json(&["construct", "minimal", "--n", "3", "--output", m.to_str().unwrap()]);
    let v = ok_json(&["classify", m.to_str().unwrap()]);
    assert_eq!(v["maximal"], false);
    assert_eq!(v["refinement"]["n"], 3);
}

#[test]
fn construct_variants() {
    let dir = tempfile::tempdir().unwrap();
    let v = ok_json(&["construct", "max", "--n", "4"]);
    assert_eq!(v["n"], 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 32);

    let v = ok_json(&["construct", "bdf", "--n", "4"]);
    let colors: std::collections::BTreeSet<String> =
        v["edges"].as_array().unwrap().iter().map(|e| e["color"].to_string()).collect();
    assert_eq!(colors.len(), 12);

    let b = fixture(dir.path(), "bdf4");
    let cone = dir.path().join("cone.json");
    let s = ok_json(&[
        "construct",
        "cone",
        "--bottom",
        b.to_str().unwrap(),
        "--top",
        b.to_str().unwrap(),
        "--output",
        cone.to_str().unwrap(),
    ]);
    assert_eq!(s["colors"], 25);
    let c = ok_json(&["check", cone.to_str().unwrap()]);
    assert_eq!(c["maximal"], true);

    let f1 = fixture(dir.path(), "fig1");
    let v = ok_json(&["construct", "double", "--input", f1.to_str().unwrap()]);
    assert_eq!(v["n"], 4);

    let out = uob(&["construct", "bdf", "--n", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["error"].is_string());
    assert_eq!(uob(&["construct", "fixture", "fig9"]).status.code(), Some(1));
}

#[test]
fn min_colors_reports() {
    let v = ok_json(&["min-colors", "--n", "3"]);
    assert_eq!(v["kind"], "exact");
    assert_eq!(v["exact"], 6);
    let v = ok_json(&["min-colors", "--n", "2"]);
    assert_eq!(v["exact"], 3);
    let v = ok_json(&["min-colors", "--n", "5"]);
    assert_eq!(v["kind"], "bounds");
    assert!(v["lower"].as_u64().unwrap() <= v["upper"].as_u64().unwrap());
}

#[test]
fn enumerate_reports_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let v = ok_json(&["enumerate", "--n", "3"]);
    assert_eq!(v["total_admissible"], 8336);
    assert_eq!(v["two_face_admissible"], 8510);
    assert_eq!(v["c_n"], 6);

    let out = dir.path().join("max.json");
    let v = ok_json(&["enumerate", "--n", "3", "--filter", "max-colors", "--output", out.to_str().unwrap()]);
    assert_eq!(v["kept"], 12);
    let docs: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(docs.len(), 12);

    let a = uob(&["enumerate", "--n", "3", "--up-to-symmetry", "--workers", "1"]);
    let b = uob(&["enumerate", "--n", "3", "--up-to-symmetry", "--workers", "4"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["orbit_sum"], 8336);
}

#[test]
fn synthesize_recover_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture(dir.path(), "fig1");
    let u = dir.path().join("u.json");
    let s =
        ok_json(&["synthesize", "--coloring", f.to_str().unwrap(), "--seed", "11", "--output", u.to_str().unwrap()]);
    assert_eq!(s["passed"], true);

    let r = dir.path().join("r.json");
    let s = ok_json(&["recover", "--uob", u.to_str().unwrap(), "--output", r.to_str().unwrap()]);
    assert_eq!(s["colors"], 7);
    let v = ok_json(&["check", r.to_str().unwrap()]);
    assert_eq!(v["colors"], 7);
    assert_eq!(v["locc"], true);

    // Same seed, same bytes.
    let a = uob(&["synthesize", "--coloring", f.to_str().unwrap(), "--seed", "11"]);
    assert_eq!(a.stdout, std::fs::read(&u).unwrap());
}

#[test]
fn simulate_paths() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = fixture(dir.path(), "fig1");
    let v = ok_json(&["simulate", "--coloring", f1.to_str().unwrap(), "--seed", "7", "--secret", "2"]);
    assert_eq!(v["certain"], true);
    assert_eq!(v["results"][0]["identified"], 2);

    let all = ok_json(&["simulate", "--coloring", f1.to_str().unwrap(), "--seed", "7", "--workers", "3"]);
    assert_eq!(all["results"].as_array().unwrap().len(), 8);

    let bad = uob(&["simulate", "--coloring", f1.to_str().unwrap(), "--seed", "7", "--order", "2,1,0"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json_of(&bad)["certain"], false);

    let proto = dir.path().join("p.json");
    ok_json(&["simulate", "--coloring", f1.to_str().unwrap(), "--seed", "1", "--protocol", proto.to_str().unwrap()]);
    let p: Value = serde_json::from_str(&std::fs::read_to_string(proto).unwrap()).unwrap();
    assert_eq!(p["tree"]["measure"]["position"], 0);
}

#[test]
fn verify_theorems_small() {
    let v = ok_json(&["verify-theorems", "--n", "3"]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(uob(&["verify-theorems", "--n", "9"]).status.code(), Some(1));
}

#[test]
fn export_dot_text() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture(dir.path(), "fig1");
    let out = uob(&["export-dot", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph "));
    assert_eq!(text.lines().filter(|l| l.contains(" -- ")).count(), 12);
    let p = dir.path().join("g.dot");
    ok_json(&["export-dot", f.to_str().unwrap(), "--positions", "--output", p.to_str().unwrap()]);
    assert!(std::fs::read_to_string(p).unwrap().contains("pos="));
}
