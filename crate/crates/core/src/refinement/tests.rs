use std::collections::BTreeSet;

use super::*;
use crate::curves::{CurveType, ExternalEdge};
use crate::polytope::{rat, Halfspace, IntAffineFunc};
use crate::Rational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn quadrant(sx: Int, sy: Int) -> Polytope {
    cone_from_rays(&[vec![sx, 0], vec![0, sy]], 2).unwrap()
}

fn quadrants() -> TropicalComplex {
    TropicalComplex::embedded(2, vec![quadrant(1, 1), quadrant(-1, 1), quadrant(-1, -1), quadrant(1, -1)]).unwrap()
}

fn plane() -> TropicalComplex {
    TropicalComplex::embedded(2, vec![Polytope::whole_space(2)]).unwrap()
}

fn split_plane() -> Subdivision {
    let map = (0..4).map(|_| (0, IntAffineMap::identity(2))).collect();
    Subdivision::new(plane(), quadrants(), map).unwrap()
}

fn half_line(sign: Int, offset: Int) -> Polytope {
    Polytope::new(1, vec![Halfspace::ge(IntAffineFunc::from_ints(&[sign], offset))]).unwrap()
}

fn split_line() -> Subdivision {
    let line = TropicalComplex::embedded(1, vec![Polytope::whole_space(1)]).unwrap();
    let halves = TropicalComplex::embedded(1, vec![half_line(-1, 0), half_line(1, 0)]).unwrap();
    Subdivision::new(line, halves, vec![(0, IntAffineMap::identity(1)), (0, IntAffineMap::identity(1))]).unwrap()
}

#[test]
fn subdivision_examples() {
    assert!(validate_subdivision(&split_plane()).unwrap().valid);
    assert!(validate_subdivision(&Subdivision::identity(&quadrants())).unwrap().valid);
    assert!(validate_subdivision(&split_line()).unwrap().valid);
    let line = TropicalComplex::embedded(1, vec![Polytope::whole_space(1)]).unwrap();
    let overlapping = TropicalComplex::new(vec![half_line(1, 1), half_line(-1, 1)], Vec::new()).unwrap();
    let s = Subdivision::new(line, overlapping, vec![(0, IntAffineMap::identity(1)), (0, IntAffineMap::identity(1))]).unwrap();
    let check = validate_subdivision(&s).unwrap();
    assert!(!check.valid);
    assert!(check.diagnostics.iter().any(|d| d.contains("overlap")));
    let missing = TropicalComplex::embedded(2, vec![quadrant(1, 1), quadrant(-1, 1), quadrant(-1, -1)]).unwrap();
    let s = Subdivision::new(plane(), missing, (0..3).map(|_| (0, IntAffineMap::identity(2))).collect()).unwrap();
    assert!(!validate_subdivision(&s).unwrap().valid);
}

#[test]
fn stellar_examples() {
    let c = TropicalComplex::embedded(2, vec![Polytope::orthant(2)]).unwrap();
    let s = stellar_subdivide(&c, &[1, 1]).unwrap();
    assert_eq!(s.refined.cells().len(), 2);
    let expected = [cone_from_rays(&[vec![1, 0], vec![1, 1]], 2).unwrap(), cone_from_rays(&[vec![1, 1], vec![0, 1]], 2).unwrap()];
    for e in &expected {
        assert!(s.refined.cells().iter().any(|p| p.set_eq(e)));
    }
    assert!(validate_subdivision(&s).unwrap().valid);

    let same = stellar_subdivide(&c, &[2, 0]).unwrap();
    assert_eq!(same.refined.cells().len(), 1);
    assert!(same.refined.cells()[0].set_eq(&Polytope::orthant(2)));

    let s = stellar_subdivide(&plane(), &[1, 0]).unwrap();
    assert_eq!(s.refined.cells().len(), 2);
    assert!(validate_subdivision(&s).unwrap().valid);

    let ray = TropicalComplex::embedded(2, vec![cone_from_rays(&[vec![1, 0]], 2).unwrap()]).unwrap();
    assert!(stellar_subdivide(&ray, &[0, 1]).is_err());
}

#[test]
fn composition_is_a_subdivision() {
    let outer = split_plane();
    let inner = stellar_subdivide(&outer.refined, &[1, 2]).unwrap();
    assert!(validate_subdivision(&inner).unwrap().valid);
    let both = Subdivision::compose(&outer, &inner).unwrap();
    assert_eq!(both.refined.cells().len(), 5);
    assert!(validate_subdivision(&both).unwrap().valid);
}

fn end(u: &[Int]) -> ExternalEdge {
    ExternalEdge { vertex: 0, cell: 0, u: u.to_vec() }
}

#[test]
fn line_vertex_refinement() {
    let t = CurveType::new(vec![0], vec![], vec![end(&[1]), end(&[-1])]).unwrap();
    let r = induced_type_refinement(&t, &split_line(), DEFAULT_MAX_TYPES).unwrap();
    assert_eq!(r.types.len(), 3);
    assert!(validate_subdivision(&r.subdivision).unwrap().valid);
}

#[test]
fn trivial_refinement() {
    let t = CurveType::new(vec![0], vec![], vec![end(&[1, 0]), end(&[0, 1]), end(&[-1, -1])]).unwrap();
    let r = induced_type_refinement(&t, &Subdivision::identity(&plane()), DEFAULT_MAX_TYPES).unwrap();
    assert_eq!(r.types.len(), 1);
    assert!(r.subdivision.refined.cells()[0].set_eq(&Polytope::whole_space(2)));
}

/// Sign pattern of a point with respect to the coordinate axes.
fn signs(p: &[Rational]) -> (i8, i8) {
    let s = |x: &Rational| if x.is_zero() { 0 } else if x.is_positive() { 1 } else { -1 };
    (s(&p[0]), s(&p[1]))
}

/// Walks the ray `p + t u` and records the sign patterns it passes through.
fn walk(p: &[Rational], u: &[Int]) -> Vec<(i8, i8)> {
    let mut breaks: Vec<Rational> = (0..2)
        .filter(|&i| u[i] != 0)
        .map(|i| -&p[i] / rat(u[i]))
        .filter(|t| t.is_positive())
        .collect();
    breaks.sort();
    breaks.dedup();
    let at = |t: &Rational| -> Vec<Rational> { (0..2).map(|i| &p[i] + t * rat(u[i])).collect() };
    let mut ts = vec![breaks.first().map_or(rat(1), |b| b / rat(2))];
    for (i, b) in breaks.iter().enumerate() {
        ts.push(b.clone());
        ts.push(breaks.get(i + 1).map_or(b + rat(1), |c| (b + c) / rat(2)));
    }
    let mut out: Vec<(i8, i8)> = Vec::new();
    for t in ts {
        let s = signs(&at(&t));
        if out.last() != Some(&s) {
            out.push(s);
        }
    }
    out
}

#[test]
fn tripod_in_quadrants_matches_walk_oracle() {
    let dirs: [&[Int]; 3] = [&[1, 0], &[0, 1], &[-1, -1]];
    let t = CurveType::new(vec![0], vec![], dirs.iter().map(|u| end(u)).collect()).unwrap();
    let r = induced_type_refinement(&t, &split_plane(), DEFAULT_MAX_TYPES).unwrap();
    let mut oracle = BTreeSet::new();
    for x in -3..=3 {
        for y in -3..=3 {
            let p = vec![rat(x), rat(y)];
            oracle.insert((signs(&p), dirs.iter().map(|u| walk(&p, u)).collect::<Vec<_>>()));
        }
    }
    assert_eq!(oracle.len(), 11);
    assert_eq!(r.types.len(), oracle.len());
    assert!(validate_subdivision(&r.subdivision).unwrap().valid);
    assert!(matches!(induced_type_refinement(&t, &split_plane(), 3), Err(Error::ResourceBound { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stellar_subdivisions_are_valid(x in -3i64..=3, y in -3i64..=3) {
        prop_assume!(x != 0 || y != 0);
        let s = stellar_subdivide(&quadrants(), &[x, y]).unwrap();
        prop_assert!(validate_subdivision(&s).unwrap().valid);
        let both = Subdivision::compose(&split_plane(), &s).unwrap();
        prop_assert!(validate_subdivision(&both).unwrap().valid);
    }
}
