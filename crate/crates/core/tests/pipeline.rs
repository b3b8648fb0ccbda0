use std::path::Path;

use serde_json::Value;
use tropex_core::curves::{moduli_polytope, CurveType};
use tropex_core::gluing::glue;
use tropex_core::json::{complex_from_json, complex_to_json, polytope_from_json, subdivision_from_json, subdivision_to_json};
use tropex_core::monoid::strata;
use tropex_core::refinement::{induced_type_refinement, validate_subdivision, DEFAULT_MAX_TYPES};

fn load(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn simplex_from_disk() {
    let p = polytope_from_json(&load("simplex2.json")).unwrap();
    assert_eq!(strata(&p).unwrap().len(), 7);
}

#[test]
fn type_moduli_and_gluing_from_disk() {
    let t = CurveType::from_json(&load("gamma-2v.json")).unwrap();
    let c = complex_from_json(&load("plane.json")).unwrap();
    let m = moduli_polytope(&t, &c).unwrap();
    assert_eq!(m.dim(), 5);
    assert_eq!(m.polytope.unwrap().dimension(), 3);
    let again = complex_from_json(&complex_to_json(&c)).unwrap();
    let g = glue(&t, &again).unwrap();
    assert!(g.verified);
    assert_eq!(g.dims.marked, 4);
    assert_eq!(CurveType::from_json(&t.to_json()).unwrap().internal().len(), 1);
}

#[test]
fn refinement_from_disk() {
    let s = subdivision_from_json(&load("quadrants.json")).unwrap();
    assert!(validate_subdivision(&s).unwrap().valid);
    let s = subdivision_from_json(&subdivision_to_json(&s)).unwrap();
    let t = CurveType::from_json(&load("tripod.json")).unwrap();
    let r = induced_type_refinement(&t, &s, DEFAULT_MAX_TYPES).unwrap();
    assert!(validate_subdivision(&r.subdivision).unwrap().valid);
    assert_eq!(r.moduli.len(), r.types.len());
}
