use super::*;
use crate::polytope::{cone_from_rays, rat};
use crate::{Int, IntMatrix};
use num_traits::Signed;
use proptest::prelude::*;

fn ge(slope: &[Int], c: Int) -> Halfspace {
    Halfspace::ge(IntAffineFunc::from_ints(slope, c))
}

fn gt(slope: &[Int], c: Int) -> Halfspace {
    Halfspace::gt(IntAffineFunc::from_ints(slope, c))
}

fn f(slope: &[Int], c: Int) -> IntAffineFunc {
    IntAffineFunc::from_ints(slope, c)
}

/// `{(a, b) in N^2 : a = 0 => b = 0}`.
fn cut_edge() -> AffineMonoid {
    let origin = Polytope::point(&[rat(0), rat(0)]);
    let wedge = Polytope::new(2, vec![gt(&[1, 0], 0), ge(&[0, 1], 0)]).unwrap();
    AffineMonoid::from_conditions(2, vec![origin, wedge]).unwrap()
}

#[test]
fn af_membership_examples() {
    let ray = Polytope::orthant(1);
    assert!(af_contains(&ray, &f(&[1], 0)).unwrap());
    assert!(!af_contains(&ray, &f(&[1], -1)).unwrap());
    let c = cone_from_rays(&[vec![1, 0], vec![1, 2]], 2).unwrap();
    assert!(af_contains(&c, &f(&[2, -1], 0)).unwrap());

    assert!(af_strictly_positive(&Polytope::open_orthant(1), &f(&[1], 0)).unwrap());
    assert!(!af_strictly_positive(&ray, &f(&[1], 0)).unwrap());
    assert!(af_strictly_positive(&ray, &f(&[1], 1)).unwrap());
    assert!(af_contains(&ray, &f(&[1, 1], 0)).is_err());
}

#[test]
fn strata_examples() {
    let dims: Vec<usize> = strata(&Polytope::standard_simplex(2)).unwrap().iter().map(|s| s.stratum_dim).collect();
    assert_eq!(dims, vec![2, 2, 2, 1, 1, 1, 0]);
    let open = strata(&Polytope::open_orthant(3)).unwrap();
    assert_eq!(open.len(), 1);
    assert_eq!(open[0].stratum_dim, 0);
    let dims: Vec<usize> = strata(&Polytope::orthant(2)).unwrap().iter().map(|s| s.stratum_dim).collect();
    assert_eq!(dims, vec![2, 1, 1, 0]);
    assert_eq!(strata(&Polytope::whole_space(1)).unwrap_err(), Error::ContainsLine);
}

#[test]
fn generators_examples() {
    let unit = Polytope::new(1, vec![ge(&[1], 0), ge(&[-1], 1)]).unwrap();
    assert_eq!(generators_mod_constants(&unit).unwrap(), vec![f(&[-1], 1), f(&[1], 0)]);
    assert_eq!(generators_mod_constants(&Polytope::orthant(1)).unwrap(), vec![f(&[1], 0)]);
    assert_eq!(generators_mod_constants(&Polytope::open_orthant(1)).unwrap(), vec![f(&[1], 0)]);
    assert!(generators_mod_constants(&Polytope::whole_space(2)).unwrap().is_empty());
}

#[test]
fn stalks() {
    let q = Polytope::orthant(2);
    let origin = Polytope::point(&[rat(0), rat(0)]);
    let m = stalk_ghost(&q, &origin).unwrap();
    match &m.kind {
        MonoidKind::AfOfPolytope { generators, .. } => assert!(generators.is_empty()),
        _ => panic!("wrong kind"),
    }
    let axis = Polytope::new(2, vec![ge(&[1, 0], 0), ge(&[0, 1], 0), ge(&[0, -1], 0)]).unwrap();
    match &stalk_ghost(&q, &axis).unwrap().kind {
        MonoidKind::AfOfPolytope { generators, .. } => {
            assert_eq!(generators.len(), 1);
            assert_eq!(generators[0].slope[0], 1);
        }
        _ => panic!("wrong kind"),
    }
    assert!(stalk_ghost(&q, &q).unwrap().contains_function(&f(&[1, 1], 0)).unwrap());
    let not_face = Polytope::point(&[rat(1), rat(1)]);
    assert_eq!(stalk_ghost(&q, &not_face).unwrap_err(), Error::NotAFace);
}

#[test]
fn positive_homs_of_cut_edge() {
    let m = cut_edge();
    assert!(m.is_positive_hom(&MonoidHom::from_ints(&[1, 0])).unwrap());
    assert!(!m.is_positive_hom(&MonoidHom::from_ints(&[0, 1])).unwrap());
    assert!(m.is_positive_hom(&MonoidHom::from_ints(&[1, 1])).unwrap());
    let expected = Polytope::new(2, vec![gt(&[1, 0], 0), ge(&[0, 1], 0)]).unwrap();
    assert!(m.positive_cone().unwrap().set_eq(&expected));
}

#[test]
fn r_saturation() {
    let m = cut_edge();
    let s = m.r_saturate().unwrap();
    assert!(agree_on_box(&m, &s, -4, 4).unwrap());

    let n2 = AffineMonoid::from_conditions(2, vec![Polytope::orthant(2)]).unwrap();
    assert!(agree_on_box(&n2, &n2.r_saturate().unwrap(), -3, 3).unwrap());

    // M (+) N taken naively, then saturated.
    let origin_line = Polytope::new(3, vec![ge(&[1, 0, 0], 0), ge(&[-1, 0, 0], 0), ge(&[0, 1, 0], 0), ge(&[0, -1, 0], 0), ge(&[0, 0, 1], 0)]).unwrap();
    let wedge = Polytope::new(3, vec![gt(&[1, 0, 0], 0), ge(&[0, 1, 0], 0), ge(&[0, 0, 1], 0)]).unwrap();
    let naive = AffineMonoid::from_conditions(3, vec![origin_line, wedge]).unwrap();
    let sat = naive.r_saturate().unwrap();
    assert!(!sat.contains(&[0, 1, 0]).unwrap());
    assert!(sat.contains(&[0, 1, 1]).unwrap());
    assert!(!naive.contains(&[0, 1, 1]).unwrap());
    let again = sat.r_saturate().unwrap();
    assert!(agree_on_box(&sat, &again, -1, 4).unwrap());
}

#[test]
fn empty_positive_cone_is_an_error() {
    // Z with no units designated: h >= 0 and h <= 0, and h > 0 on 1.
    let z = AffineMonoid::from_conditions(1, vec![Polytope::whole_space(1)]).unwrap();
    assert_eq!(z.r_saturate().unwrap_err(), Error::EmptyPositiveCone);
    let z = z.with_units(vec![vec![1]]).unwrap();
    assert!(z.positive_cone().is_ok());
}

#[test]
fn presentations() {
    // N^4 / (1,1,0,0) = (0,0,1,1)
    let rel = vec![(vec![1, 1, 0, 0], vec![0, 0, 1, 1])];
    let p = Presentation::new(4, rel.clone()).unwrap();
    assert_eq!(p.rank(), 3);
    let e = IntMatrix::from_rows(vec![vec![1, 0, 1, 0], vec![0, 1, 1, 0], vec![0, 1, 0, 1]]);
    let q = Presentation::with_embedding(4, rel.clone(), e).unwrap();
    let m = AffineMonoid::presented(q.clone());
    assert!(m.contains(&q.embed(&[1, 1, 0, 0]).unwrap()).unwrap());
    assert!(!m.contains(&[0, 1, 0]).unwrap());
    let h = MonoidHom::on_generators(&q, &rat_vec(&[1, 1, 1, 1])).unwrap();
    assert_eq!(h.evaluate(&q.embed(&[0, 0, 1, 1]).unwrap()), rat(2));
    assert!(MonoidHom::on_generators(&q, &rat_vec(&[1, 1, 1, 2])).is_err());
    assert!(Presentation::new(2, vec![(vec![2, 0], vec![0, 0])]).is_err());
    let bad = IntMatrix::from_rows(vec![vec![1, 0, 1, 0], vec![0, 1, 1, 0], vec![0, 2, 0, 2]]);
    assert!(Presentation::with_embedding(4, rel, bad).is_err());
}

fn rat_vec(v: &[Int]) -> Vec<crate::Rational> {
    v.iter().map(|x| rat(*x)).collect()
}

/// Lattice points of a cone given by rays inside a box, and the irreducible
/// ones among them, by brute force.
fn brute_dual_basis(rays: &[Vec<Int>], bound: Int) -> Vec<Vec<Int>> {
    let n = rays[0].len();
    let in_dual = |g: &[Int]| rays.iter().all(|r| r.iter().zip(g).map(|(a, b)| a * b).sum::<Int>() >= 0);
    let mut pts = Vec::new();
    let mut g = vec![-bound; n];
    'outer: loop {
        if g.iter().any(|x| *x != 0) && in_dual(&g) {
            pts.push(g.clone());
        }
        for i in 0..n {
            if g[i] < bound {
                g[i] += 1;
                continue 'outer;
            }
            g[i] = -bound;
        }
        break;
    }
    let mut out: Vec<Vec<Int>> = pts
        .iter()
        .filter(|x| {
            !pts.iter().any(|y| {
                let z: Vec<Int> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                y != *x && in_dual(&z) && z.iter().any(|v| *v != 0)
            })
        })
        .cloned()
        .collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dual_basis_matches_brute_force(rays in prop::collection::vec(prop::collection::vec(0i64..=3, 2), 1..4)) {
        prop_assume!(rays.iter().all(|r| r.iter().any(|x| *x != 0)));
        let c = cone_from_rays(&rays, 2).unwrap();
        let d = dual_hilbert_basis(&c).unwrap();
        // Pointed duals only (full-dimensional cones): then the basis is unique.
        prop_assume!(c.dimension() == 2);
        prop_assert_eq!(d.generators, brute_dual_basis(&rays, 6));
    }

    #[test]
    fn af_is_a_monoid(a in prop::collection::vec(-2i64..=2, 2), ca in -2i64..=2, b in prop::collection::vec(-2i64..=2, 2), cb in -2i64..=2) {
        let p = Polytope::standard_simplex(2);
        let (fa, fb) = (f(&a, ca), f(&b, cb));
        if af_contains(&p, &fa).unwrap() && af_contains(&p, &fb).unwrap() {
            prop_assert!(af_contains(&p, &fa.add(&fb)).unwrap());
            if af_strictly_positive(&p, &fa).unwrap() {
                prop_assert!(af_strictly_positive(&p, &fa.add(&fb)).unwrap());
            }
        }
    }

    #[test]
    fn generators_span_af(slope in prop::collection::vec(-3i64..=3, 2), c in -3i64..=6) {
        // Every element of Af(simplex) is a nonnegative constant plus an
        // N-combination of the generators.
        let p = Polytope::standard_simplex(2);
        let g = IntAffineFunc::from_ints(&slope, c);
        prop_assume!(af_contains(&p, &g).unwrap());
        let gens = generators_mod_constants(&p).unwrap();
        prop_assert!(decomposes(&p, &g, &gens, 0));
    }

    #[test]
    fn strata_biject_with_faces(cs in prop::collection::vec((prop::collection::vec(-2i64..=2, 2), -2i64..=2, any::<bool>()), 2..5)) {
        let hs = cs.iter().map(|(s, c, strict)| if *strict { gt(s, *c) } else { ge(s, *c) }).collect();
        if let Some(p) = Polytope::try_new(2, hs).unwrap() {
            if let Ok(st) = strata(&p) {
                prop_assert_eq!(st.len(), p.faces().len());
                for s in &st {
                    prop_assert_eq!(s.stratum_dim + s.face.dimension(), p.dimension());
                }
            }
        }
    }
}

/// Does `g - sum` of generators reach a nonnegative constant on `p`?
fn decomposes(p: &Polytope, g: &IntAffineFunc, gens: &[IntAffineFunc], from: usize) -> bool {
    if g.slope.iter().all(|x| *x == 0) {
        return !g.constant.is_negative();
    }
    (from..gens.len()).any(|i| {
        let rest = g.add(&gens[i].neg());
        af_contains(p, &rest).unwrap() && decomposes(p, &rest, gens, i)
    })
}

#[test]
fn toric_dual_membership() {
    let c = cone_from_rays(&[vec![1, 0], vec![1, 2]], 2).unwrap();
    let m = AffineMonoid::toric_dual(c).unwrap();
    assert!(m.contains(&[2, -1]).unwrap());
    assert!(!m.contains(&[1, -1]).unwrap());
}
