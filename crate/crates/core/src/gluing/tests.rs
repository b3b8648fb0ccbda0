use super::*;
use crate::curves::InternalEdge;
use crate::polytope::{rat, rat_vec};
use crate::Int;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plane() -> TropicalComplex {
    TropicalComplex::embedded(2, vec![Polytope::whole_space(2)]).unwrap()
}

fn ray(dir: &[Int]) -> Polytope {
    let n = dir.len();
    let mut cs = Vec::new();
    for i in 0..n {
        let f = IntAffineFunc::coordinate(n, i);
        cs.push(Halfspace::ge(if dir[i] < 0 { f.neg() } else { f.clone() }));
        if dir[i] == 0 {
            cs.push(Halfspace::ge(f.neg()));
        }
    }
    Polytope::new(n, cs).unwrap()
}

fn fan() -> TropicalComplex {
    let cells = vec![Polytope::point(&rat_vec(&[0, 0])), ray(&[1, 0]), ray(&[0, 1]), Polytope::orthant(2)];
    TropicalComplex::embedded(2, cells).unwrap()
}

fn int(c: usize, tail: usize, head: usize, u: &[Int]) -> InternalEdge {
    InternalEdge { tail, head, cell: c, u: u.to_vec() }
}

fn ext(c: usize, vertex: usize, u: &[Int]) -> ExternalEdge {
    ExternalEdge { vertex, cell: c, u: u.to_vec() }
}

fn two_vertex() -> CurveType {
    CurveType::new(
        vec![0, 0],
        vec![int(0, 0, 1, &[1, 0])],
        vec![ext(0, 0, &[-1, 1]), ext(0, 0, &[-1, -1]), ext(0, 1, &[1, 1]), ext(0, 1, &[1, -1])],
    )
    .unwrap()
}

fn chain() -> CurveType {
    CurveType::new(vec![0, 0, 0], vec![int(0, 0, 1, &[1, 0]), int(0, 1, 2, &[1, 1])], vec![ext(0, 0, &[-1, 0]), ext(0, 2, &[0, -1])]).unwrap()
}

fn star() -> CurveType {
    CurveType::new(
        vec![0, 0, 0, 0],
        vec![int(0, 0, 1, &[1, 0]), int(0, 0, 2, &[0, 1]), int(0, 3, 0, &[1, 1])],
        vec![ext(0, 1, &[-1, 0]), ext(0, 2, &[0, -1]), ext(0, 3, &[-1, -1])],
    )
    .unwrap()
}

#[test]
fn marked_dimensions() {
    let m = marked_moduli(&two_vertex(), &plane()).unwrap();
    assert_eq!(m.polytope.dimension(), 4);
    assert!(m.polytope.contains(&rat_vec(&[0, 0, 2, 0, 2, 1])).unwrap());
    assert!(!m.polytope.contains(&rat_vec(&[0, 0, 2, 0, 2, 2])).unwrap());
    assert_eq!(marked_moduli(&chain(), &plane()).unwrap().polytope.dimension(), 6);
    let pinned = CurveType::new(vec![0, 0], vec![int(1, 0, 1, &[1, 0])], vec![]).unwrap();
    assert!(matches!(marked_moduli(&pinned, &fan()), Err(Error::Empty)));
}

#[test]
fn cut_examples() {
    let pieces = cut(&two_vertex());
    assert_eq!(pieces.len(), 2);
    assert_eq!(pieces[0].half_edges[0].orientation, Orientation::Outgoing);
    assert_eq!(pieces[1].half_edges[0].orientation, Orientation::Incoming);
    assert_eq!(pieces[1].ends().len(), 2);
    let pieces = cut(&star());
    assert_eq!(pieces[0].half_edges.len(), 3);
    assert_eq!(pieces[0].half_edges[2].orientation, Orientation::Incoming);
    assert_eq!(pieces[3].half_edges[0].orientation, Orientation::Outgoing);
}

#[test]
fn cut_moduli_evaluation() {
    let pieces = cut(&two_vertex());
    let m = cut_moduli(&pieces[1], &plane()).unwrap();
    assert_eq!(m.dim(), 3);
    assert_eq!(m.evaluation[0].apply(&rat_vec(&[3, 1, 2])).unwrap(), rat_vec(&[1, 1]));
    assert_eq!(m.polytope.unwrap().dimension(), 3);

    // From the origin along the ray, and back from a point of the ray.
    let t = CurveType::new(vec![0, 1], vec![int(1, 0, 1, &[1, 0])], vec![]).unwrap();
    let pieces = cut(&t);
    let at_origin = cut_moduli(&pieces[0], &fan()).unwrap().polytope.unwrap();
    assert_eq!(at_origin.dimension(), 1);
    assert!(at_origin.contains(&rat_vec(&[0, 0, 5])).unwrap());
    let on_ray = cut_moduli(&pieces[1], &fan()).unwrap().polytope.unwrap();
    assert!(on_ray.contains(&rat_vec(&[3, 0, 2])).unwrap());
    assert!(!on_ray.contains(&rat_vec(&[3, 0, 3])).unwrap());
}

fn assert_glues(t: &CurveType, c: &TropicalComplex) -> GlueResult {
    let g = glue(t, c).unwrap();
    assert!(g.verified);
    assert!(g.dims.transverse);
    assert_eq!(g.dims.fiber_product, g.dims.marked);
    assert_eq!(g.dims.fiber_product, g.dims.cut_sum - g.dims.evaluation_conditions);
    g
}

#[test]
fn glue_examples() {
    let g = assert_glues(&two_vertex(), &plane());
    assert_eq!(g.dims.marked, 4);
    assert_eq!(g.dims.cut_sum, 6);
    let x = rat_vec(&[0, 0, 1, 2, 0, 1]);
    assert_eq!(g.dictionary.apply(&x).unwrap(), rat_vec(&[0, 0, 2, 0, 2, 1]));
    assert_glues(&chain(), &plane());
    assert_glues(&star(), &plane());
    let t = CurveType::new(vec![0, 1], vec![int(1, 0, 1, &[1, 0])], vec![]).unwrap();
    let g = assert_glues(&t, &fan());
    assert_eq!(g.dims.marked, 2);
}

/// A random tree in the plane with every direction nonzero and each vertex
/// balanced by one end.
fn random_tree(rng: &mut ChaCha8Rng) -> CurveType {
    let nv = rng.gen_range(1..=5);
    let mut internal = Vec::new();
    let mut balance = vec![[0 as Int; 2]; nv];
    for v in 1..nv {
        let p = rng.gen_range(0..v);
        let u = loop {
            let u = [rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
            if u != [0, 0] {
                break u;
            }
        };
        let (tail, head) = if rng.gen_bool(0.5) { (p, v) } else { (v, p) };
        balance[tail] = [balance[tail][0] - u[0], balance[tail][1] - u[1]];
        balance[head] = [balance[head][0] + u[0], balance[head][1] + u[1]];
        internal.push(int(0, tail, head, &u));
    }
    let external = (0..nv).filter(|&v| balance[v] != [0, 0]).map(|v| ext(0, v, &balance[v])).collect();
    CurveType::new(vec![0; nv], internal, external).unwrap()
}

#[test]
fn random_trees_glue() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..12 {
        assert_glues(&random_tree(&mut rng), &plane());
    }
}

#[test]
fn local_fans() {
    let c = fan();
    let f = local_fan(&c, 1, &rat_vec(&[1, 0])).unwrap();
    assert_eq!(f.cells().len(), 2);
    let line = Polytope::new(2, vec![Halfspace::ge(IntAffineFunc::coordinate(2, 1)), Halfspace::ge(IntAffineFunc::coordinate(2, 1).neg())]).unwrap();
    assert!(f.cells().iter().any(|p| p.set_eq(&line)));
    let upper = Polytope::new(2, vec![Halfspace::ge(IntAffineFunc::coordinate(2, 1))]).unwrap();
    assert!(f.cells().iter().any(|p| p.set_eq(&upper)));

    let f = local_fan(&c, 0, &rat_vec(&[0, 0])).unwrap();
    assert_eq!(f.cells().len(), 4);
    let f = local_fan(&c, 3, &[rat(1), rat(2)]).unwrap();
    assert!(f.cells()[0].set_eq(&Polytope::whole_space(2)));
    assert!(local_fan(&c, 1, &rat_vec(&[0, 0])).is_err());
}

#[test]
fn cut_edge_monoid_checks() {
    let m = cut_edge_monoids().unwrap();
    for c in &m.checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    assert!(m.fiber.contains(&[0, 1, 1]).unwrap());
    assert!(!m.fiber.contains(&[0, 1, 0]).unwrap());
}
