use super::*;
use proptest::prelude::*;

fn ge(slope: &[Int], c: Int) -> Halfspace {
    Halfspace::ge(IntAffineFunc::from_ints(slope, c))
}

fn gt(slope: &[Int], c: Int) -> Halfspace {
    Halfspace::gt(IntAffineFunc::from_ints(slope, c))
}

fn node() -> Polytope {
    // coordinates (x, t): 0 <= t <= x
    Polytope::new(2, vec![ge(&[0, 1], 0), ge(&[1, -1], 0)]).unwrap()
}

#[test]
fn dimension_examples() {
    assert_eq!(Polytope::orthant(2).dimension(), 2);
    assert_eq!(Polytope::new(1, vec![ge(&[1], 0), ge(&[-1], 0)]).unwrap().dimension(), 0);
    assert_eq!(Polytope::standard_simplex(2).dimension(), 2);
}

#[test]
fn contains_examples() {
    let open = Polytope::open_orthant(1);
    assert!(!open.contains(&[rat(0)]).unwrap());
    assert!(Polytope::orthant(1).contains(&[rat(0)]).unwrap());
    assert!(!node().contains(&[rat(2), rat(3)]).unwrap());
    assert!(node().contains(&[rat(3), rat(2)]).unwrap());
    assert!(node().contains(&[rat(1)]).is_err());
}

#[test]
fn closure_and_interior() {
    assert!(Polytope::open_orthant(1).closure().set_eq(&Polytope::orthant(1)));
    let unit = Polytope::new(1, vec![ge(&[1], 0), ge(&[-1], 1)]).unwrap();
    let open = Polytope::new(1, vec![gt(&[1], 0), gt(&[-1], 1)]).unwrap();
    assert!(unit.relative_interior().set_eq(&open));
    let pt = Polytope::point(&[rat(1), rat(2)]);
    assert!(pt.relative_interior().set_eq(&pt));
    assert_eq!(pt.relative_interior().dimension(), 0);
}

#[test]
fn face_counts() {
    assert_eq!(Polytope::orthant(2).faces().len(), 4);
    assert_eq!(Polytope::open_orthant(2).faces().len(), 1);
    let half_open = Polytope::new(2, vec![ge(&[1, 0], 0), gt(&[0, 1], 0)]).unwrap();
    let faces = half_open.faces();
    assert_eq!(faces.len(), 2);
    assert_eq!(faces[1].dimension(), 1);
    assert!(faces[1].polytope.contains(&[rat(0), rat(1)]).unwrap());
    assert_eq!(Polytope::standard_simplex(2).faces().len(), 7);
}

#[test]
fn line_detection() {
    assert!(Polytope::whole_space(1).contains_line());
    assert!(!Polytope::orthant(1).contains_line());
    let upper = Polytope::new(2, vec![ge(&[0, 1], 0)]).unwrap();
    assert!(upper.contains_line());
}

#[test]
fn recession_and_cones() {
    let unit = Polytope::new(1, vec![ge(&[1], 0), ge(&[-1], 1)]).unwrap();
    assert_eq!(unit.recession_cone().dimension(), 0);
    assert!(!unit.is_cone());
    assert!(Polytope::orthant(1).recession_cone().set_eq(&Polytope::orthant(1)));
    assert!(Polytope::orthant(1).is_cone());
    assert!(node().recession_cone().set_eq(&node()));
    assert!(node().is_cone());
    let shifted = Polytope::orthant(2).translate(&[rat(1), rat(-2)]);
    assert_eq!(shifted.cone_apex(), Some(vec![rat(1), rat(-2)]));
    assert!(!shifted.is_cone_at_origin());
    assert!(Polytope::open_orthant(2).is_cone());
}

#[test]
fn products_and_preimages() {
    let ray = Polytope::orthant(1);
    assert!(ray.product(&ray).set_eq(&Polytope::orthant(2)));
    let shift = IntAffineMap::new(IntMatrix::identity(1), vec![rat(-1)]).unwrap();
    let pre = ray.preimage(&shift).unwrap().unwrap();
    assert!(pre.set_eq(&Polytope::new(1, vec![ge(&[1], -1)]).unwrap()));
    let neg = IntAffineMap::linear(IntMatrix::from_rows(vec![vec![-1]]));
    let empty = Polytope::new(1, vec![ge(&[1], -1)]).unwrap().preimage(&neg).unwrap();
    assert!(empty.unwrap().is_subset_of(&Polytope::new(1, vec![ge(&[-1], -1)]).unwrap()));
    let far = IntAffineMap::new(IntMatrix::from_rows(vec![vec![0]]), vec![rat(-1)]).unwrap();
    assert_eq!(ray.preimage(&far).unwrap(), None);
}

#[test]
fn node_fiber_product() {
    // P = [0, inf) with rho = id, Q = [0, inf)^2 with sum.
    let p = Polytope::orthant(1);
    let q = Polytope::orthant(2);
    let f = IntAffineMap::identity(1);
    let g = IntAffineMap::linear(IntMatrix::from_rows(vec![vec![1, 1]]));
    let fp = Polytope::fiber_product(&p, &f, &q, &g).unwrap().unwrap();
    assert_eq!(fp.dimension(), 2);
    // Project (x, t1, t2) -> (x, t1) and compare with {0 <= t <= x}.
    let proj = IntAffineMap::coordinate_projection(3, &[0, 1]);
    assert!(fp.image(&proj).unwrap().set_eq(&node()));
    assert!(fp.contains(&[rat(3), rat(1), rat(2)]).unwrap());
}

#[test]
fn images() {
    let sum = IntAffineMap::linear(IntMatrix::from_rows(vec![vec![1, 1]]));
    let img = Polytope::open_orthant(2).image(&sum).unwrap();
    assert!(img.set_eq(&Polytope::open_orthant(1)));
    let half = Polytope::new(2, vec![ge(&[1, 0], 0), gt(&[0, 1], 0)]).unwrap();
    let first = IntAffineMap::coordinate_projection(2, &[0]);
    assert!(half.image(&first).unwrap().set_eq(&Polytope::orthant(1)));
}

#[test]
fn normalization_keeps_tighter_constraint() {
    let p = Polytope::new(1, vec![ge(&[2], -2), ge(&[1], 0), gt(&[1], -1)]).unwrap();
    assert_eq!(p.constraints().len(), 1);
    assert_eq!(p.constraints()[0], gt(&[1], -1));
}

/// Brute-force face oracle for closed polytopes: every subset of constraints,
/// made into equalities, that is nonempty; distinct as point sets.
fn oracle_face_count(p: &Polytope) -> usize {
    let n = p.constraints().len();
    let mut found: Vec<Polytope> = Vec::new();
    for mask in 0u32..(1 << n) {
        let eqs: Vec<IntAffineFunc> =
            (0..n).filter(|i| mask & (1 << i) != 0).map(|i| p.constraints()[i].func.clone()).collect();
        if let Ok(Some(f)) = p.with_equalities(&eqs) {
            if !found.iter().any(|g| g.set_eq(&f)) {
                found.push(f);
            }
        }
    }
    found.len()
}

fn arb_closed_polytope() -> impl Strategy<Value = Polytope> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, 2), -3i64..=3), 1..5).prop_filter_map(
        "empty",
        |cs| {
            let hs = cs.iter().map(|(s, c)| ge(s, *c)).collect();
            Polytope::try_new(2, hs).ok().flatten()
        },
    )
}

fn arb_polytope() -> impl Strategy<Value = Polytope> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, 2), -3i64..=3, any::<bool>()), 1..5).prop_filter_map(
        "empty",
        |cs| {
            let hs = cs.iter().map(|(s, c, strict)| if *strict { gt(s, *c) } else { ge(s, *c) }).collect();
            Polytope::try_new(2, hs).ok().flatten()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn face_count_matches_oracle(p in arb_closed_polytope()) {
        prop_assert_eq!(p.faces().len(), oracle_face_count(&p));
    }

    #[test]
    fn faces_closed_under_intersection(p in arb_polytope()) {
        let faces = p.faces();
        prop_assert!(faces[0].polytope.set_eq(&p));
        for a in &faces {
            for b in &faces {
                let mut z = a.zero_set.clone();
                z.extend(b.zero_set.iter().cloned());
                if let Ok(Some(meet)) = p.with_equalities(&z) {
                    prop_assert!(faces.iter().any(|f| f.polytope.set_eq(&meet)));
                }
            }
        }
    }

    #[test]
    fn closure_interior_relations(p in arb_polytope()) {
        prop_assert!(p.relative_interior().is_subset_of(&p.closure().relative_interior()));
        prop_assert!(p.relative_interior().closure().set_eq(&p.closure()));
        prop_assert!(p.witness().len() == 2 && p.contains(&p.witness()).unwrap());
    }

    #[test]
    fn fiber_product_symmetric(p in arb_polytope(), q in arb_polytope()) {
        let f = IntAffineMap::coordinate_projection(2, &[0]);
        let g = IntAffineMap::coordinate_projection(2, &[1]);
        let pq = Polytope::fiber_product(&p, &f, &q, &g).unwrap();
        let qp = Polytope::fiber_product(&q, &g, &p, &f).unwrap();
        match (pq, qp) {
            (None, None) => {}
            (Some(a), Some(b)) => prop_assert!(b.permute(&[2, 3, 0, 1]).unwrap().set_eq(&a)),
            _ => prop_assert!(false, "emptiness disagrees"),
        }
    }

    #[test]
    fn pointed_closed_polytopes_have_vertices(p in arb_closed_polytope()) {
        if !p.contains_line() {
            prop_assert!(p.faces().iter().any(|f| f.dimension() == 0));
        }
    }
}

#[test]
fn fiber_product_associative() {
    let ray = Polytope::orthant(1);
    let id = IntAffineMap::identity(1);
    let ab = Polytope::fiber_product(&ray, &id, &ray, &IntAffineMap::coordinate_projection(1, &[0])).unwrap().unwrap();
    let left = Polytope::fiber_product(&ab, &IntAffineMap::coordinate_projection(2, &[1]), &ray, &id).unwrap().unwrap();
    let bc = Polytope::fiber_product(&ray, &id, &ray, &id).unwrap().unwrap();
    let right = Polytope::fiber_product(&ray, &id, &bc, &IntAffineMap::coordinate_projection(2, &[0])).unwrap().unwrap();
    assert!(left.set_eq(&right));
    assert_eq!(left.dimension(), 1);
}
