use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn tropex(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tropex"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn strata_of_the_triangle() {
    let (code, v) = tropex(&["strata", path(&data("simplex2.json"))], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"]["count"], 7);
    assert_eq!(v["payload"]["dims"], json!([2, 2, 2, 1, 1, 1, 0]));
}

#[test]
fn moduli_and_glue_of_two_vertex_type() {
    let (code, v) = tropex(&["moduli", path(&data("gamma-2v.json")), path(&data("plane.json"))], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["dim"], 3);
    let (code, v) = tropex(&["glue", path(&data("gamma-2v.json")), path(&data("plane.json")), "--verify"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["verified"], true);
    assert_eq!(v["payload"]["dim"], 4);
}

#[test]
fn malformed_json_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"ambient_dim\": 2,\n \"constraints\": [}").unwrap();
    let (code, v) = tropex(&["polytope", path(&bad)], &[]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "invalid-input");
    assert!(v["diagnostics"][0].as_str().unwrap().contains("line 2"));
    let (code, _) = tropex(&["no-such-command"], &[]);
    assert_eq!(code, 1);
}

#[test]
fn failed_verification_and_resource_bound() {
    let dir = tempfile::tempdir().unwrap();
    let mut s: Value = serde_json::from_str(&std::fs::read_to_string(data("quadrants.json")).unwrap()).unwrap();
    s["refined"]["cells"].as_array_mut().unwrap().pop();
    s["cell_map"].as_array_mut().unwrap().pop();
    let missing = dir.path().join("missing.json");
    std::fs::write(&missing, s.to_string()).unwrap();
    let (code, v) = tropex(&["refine", path(&missing), "--verify"], &[]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "verification-failed");
    assert!(!v["diagnostics"].as_array().unwrap().is_empty());

    let (quadrants, tripod) = (data("quadrants.json"), data("tripod.json"));
    let args = ["refine", path(&quadrants), "--induce-moduli", path(&tripod)];
    let (code, v) = tropex(&args, &[("TROPEX_MAX_TYPES", "3")]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "resource-bound");
    let (code, v) = tropex(&args, &[]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["valid"], true);
}

#[test]
fn renderings_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("curve.svg");
    let dot = dir.path().join("curve.dot");
    let (code, _) =
        tropex(&["moduli", path(&data("gamma-2v.json")), path(&data("plane.json")), "--svg", path(&svg), "--dot", path(&dot)], &[]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    assert!(std::fs::read_to_string(&dot).unwrap().contains("v0 -- v1"));

    let cube = json!({"ambient_dim": 3, "constraints": [{"slope": [1, 0, 0], "rel": "ge"}]});
    let f = dir.path().join("cube.json");
    std::fs::write(&f, cube.to_string()).unwrap();
    let (code, _) = tropex(&["polytope", path(&f), "--svg", path(&svg)], &[]);
    assert_eq!(code, 1);
    let (code, _) = tropex(&["polytope", path(&f), "--svg", path(&svg), "--project", "[[1,0,0],[0,1,0]]"], &[]);
    assert_eq!(code, 0);
}

#[test]
fn seeded_runs_are_reproducible() {
    let run = |seed: &str| tropex(&["glue", "--random", "10", "--seed", seed, "--verify"], &[]);
    let (code, a) = run("5");
    assert_eq!(code, 0);
    assert_eq!(a["payload"]["verified"], true);
    assert_eq!(run("5").1, a);
}

#[test]
fn emitted_complexes_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = tropex(&["local-fan", path(&data("fan.json")), "--cell", "1", "--point", "1,0"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["cells"].as_array().unwrap().len(), 2);
    let f = dir.path().join("local.json");
    std::fs::write(&f, v["payload"].to_string()).unwrap();
    let (code, again) = tropex(&["local-fan", path(&f), "--cell", "0"], &[]);
    assert_eq!(code, 0);
    assert_eq!(again["payload"]["cells"].as_array().unwrap().len(), 2);

    let (code, t) = tropex(&["trop", path(&data("node-atlas.json")), "--closure"], &[]);
    assert_eq!(code, 0);
    assert!(t["payload"]["cells"].as_array().unwrap().iter().all(|c| c["constraints"].as_array().unwrap().iter().all(|h| h["rel"] == "ge")));
}

#[test]
fn cut_edge_selftest_and_snf() {
    let (code, v) = tropex(&["cut-edge-monoids", "--selftest"], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["passed"], true);
    let (code, v) = tropex(&["snf", path(&data("snf.json"))], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["elementary_divisors"], json!([2, 6, 12]));
    let (code, v) = tropex(&["basic-check", path(&data("gamma-2v.json")), path(&data("plane.json"))], &[]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["basic"], true);
}
