//! Polyhedral atlases, their tropical parts, morphisms and family criteria.

mod complex;
mod morphism;
pub(crate) mod param;

pub use complex::{dual_intersection_complex, trop_closure, tropical_part, verify_immersion, ImmersionCheck, TropicalComplex};
pub use morphism::{fiber, is_family, marked_point_model, node_model, AtlasMorphism, FamilyCheck};

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::monoid::dual_hilbert_basis;
use crate::polytope::{primitive_direction, Face, IntAffineMap, Polytope};
use crate::{IntMatrix, IntVec, RatVec};
use param::{transport, FaceParam, RatAffine};

/// Whether charts model explodable log schemes or exploded manifolds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Log,
    Exploded,
}

/// Identifies `face_a` of cell `a` with `face_b` of cell `b` through `map`,
/// an integral affine map between the ambient spaces.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub a: usize,
    pub face_a: Polytope,
    pub b: usize,
    pub face_b: Polytope,
    pub map: IntAffineMap,
}

#[derive(Clone, Debug)]
pub struct Atlas {
    charts: Vec<Polytope>,
    gluings: Vec<Gluing>,
    pub mode: Mode,
}

pub(crate) fn face_index(faces: &[Face], f: &Polytope) -> Option<usize> {
    faces.iter().position(|g| g.polytope.set_eq(f))
}

/// Checks each gluing and that composite identifications around cycles of
/// explicitly glued faces are the identity.
pub(crate) fn validate_gluings(cells: &[Polytope], gluings: &[Gluing]) -> Result<()> {
    let faces: Vec<Vec<Face>> = cells.iter().map(Polytope::faces).collect();
    let mut edges: HashMap<(usize, usize), Vec<((usize, usize), RatAffine, usize)>> = HashMap::new();
    let mut params: HashMap<(usize, usize), FaceParam> = HashMap::new();
    for (gi, g) in gluings.iter().enumerate() {
        for c in [g.a, g.b] {
            if c >= cells.len() {
                return Err(Error::DanglingReference(format!("gluing {gi} names cell {c}")));
            }
        }
        check_dim(cells[g.a].ambient_dim(), g.map.source_dim())?;
        check_dim(cells[g.b].ambient_dim(), g.map.target_dim())?;
        let ia = face_index(&faces[g.a], &g.face_a).ok_or(Error::NotAFace)?;
        let ib = face_index(&faces[g.b], &g.face_b).ok_or(Error::NotAFace)?;
        if !g.face_a.image(&g.map)?.set_eq(&g.face_b) {
            return Err(Error::InconsistentGluing(format!("gluing {gi} does not carry its face onto the target face")));
        }
        let (u, v) = ((g.a, ia), (g.b, ib));
        let pu = params.entry(u).or_insert_with(|| FaceParam::of(&faces[g.a][ia].polytope)).clone();
        let pv = params.entry(v).or_insert_with(|| FaceParam::of(&faces[g.b][ib].polytope)).clone();
        let t = transport(&pu, &g.map, &pv)
            .filter(RatAffine::is_lattice_iso)
            .ok_or_else(|| Error::InconsistentGluing(format!("gluing {gi} is not a lattice isomorphism of faces")))?;
        let inv = t.inverse().expect("lattice isomorphisms are invertible");
        edges.entry(u).or_default().push((v, t, gi));
        edges.entry(v).or_default().push((u, inv, gi));
    }
    let mut seen: HashMap<(usize, usize), RatAffine> = HashMap::new();
    let mut roots: Vec<(usize, usize)> = edges.keys().copied().collect();
    roots.sort();
    for root in roots {
        if seen.contains_key(&root) {
            continue;
        }
        seen.insert(root, RatAffine::identity(params[&root].dim()));
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let tu = seen[&u].clone();
            for (v, t, gi) in &edges[&u] {
                let tv = t.after(&tu);
                match seen.get(v) {
                    Some(existing) if *existing != tv => {
                        return Err(Error::InconsistentGluing(format!(
                            "identifications around the cycle through cell {} and cell {} (gluing {gi}) disagree",
                            u.0, v.0
                        )));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(*v, tv);
                        queue.push_back(*v);
                    }
                }
            }
        }
    }
    Ok(())
}

impl Atlas {
    pub fn new(charts: Vec<Polytope>, gluings: Vec<Gluing>, mode: Mode) -> Result<Atlas> {
        validate_gluings(&charts, &gluings)?;
        Ok(Atlas { charts, gluings, mode })
    }

    pub fn single(chart: Polytope) -> Atlas {
        Atlas { charts: vec![chart], gluings: Vec::new(), mode: Mode::Log }
    }

    pub fn charts(&self) -> &[Polytope] {
        &self.charts
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }
}

/// Representability verdicts for an atlas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Representability {
    pub explodable: bool,
    pub exploded_representable: bool,
}

/// An integral affine embedding of a pointed cone chart into an orthant,
/// `x -> (h_i . (x - apex))` over the dual Hilbert basis.
pub fn orthant_embedding(p: &Polytope) -> Result<Option<IntAffineMap>> {
    if p.contains_line() {
        return Ok(None);
    }
    let Some(apex) = p.cone_apex() else { return Ok(None) };
    let basis = dual_hilbert_basis(p)?;
    let m = IntMatrix::from_rows_with_cols(basis.generators.clone(), p.ambient_dim());
    let t: RatVec = basis
        .generators
        .iter()
        .map(|h| -crate::polytope::IntAffineFunc::linear(h.clone()).evaluate(&apex))
        .collect();
    let map = IntAffineMap::new(m, t)?;
    Ok(injective_on(&map, p).then_some(map))
}

pub fn is_log_representable(a: &Atlas) -> Result<Representability> {
    let mut explodable = true;
    for c in a.charts() {
        if orthant_embedding(c)?.is_none() {
            explodable = false;
        }
    }
    let exploded_representable = a.charts().iter().all(|c| !c.contains_line());
    Ok(Representability { explodable, exploded_representable })
}

/// Is the linear part of `map` injective on the directions of `p`?
pub fn injective_on(map: &IntAffineMap, p: &Polytope) -> bool {
    let dirs = p.direction_lattice();
    let images: Vec<RatVec> = dirs.iter().map(|d| crate::polytope::rat_vec(&map.matrix.mul_vec(d))).collect();
    crate::lattice::rank(&images) == dirs.len()
}

/// A point of an exploded manifold chart: a tropical coordinate in the chart
/// and an angular coordinate in `(C^*)^m` stored as (re, im) pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplodedPoint {
    pub chart: usize,
    pub tropical: RatVec,
    pub angular: Vec<(f64, f64)>,
}

impl ExplodedPoint {
    pub fn new(a: &Atlas, chart: usize, tropical: RatVec, angular: Vec<(f64, f64)>) -> Result<Self> {
        let p = a.charts().get(chart).ok_or_else(|| Error::DanglingReference(format!("chart {chart}")))?;
        check_dim(p.ambient_dim(), angular.len())?;
        if !p.contains(&tropical)? {
            return Err(Error::Invalid("tropical coordinate is outside the chart".into()));
        }
        if angular.iter().any(|(re, im)| *re == 0.0 && *im == 0.0) {
            return Err(Error::Invalid("angular coordinates must be nonzero".into()));
        }
        Ok(ExplodedPoint { chart, tropical, angular })
    }
}

/// The face of `p` whose relative interior contains `x`.
pub fn carrier_face(p: &Polytope, x: &[crate::Rational]) -> Result<Polytope> {
    let tight: Vec<_> = p
        .constraints()
        .iter()
        .filter(|h| num_traits::Zero::is_zero(&h.func.evaluate(x)))
        .map(|h| h.func.clone())
        .collect();
    p.with_equalities(&tight)?.ok_or(Error::Empty)
}

/// Lattice basis of the integer vectors tangent to the relative interior of
/// the face containing the point's tropical coordinate.
pub fn integral_vectors(a: &Atlas, pt: &ExplodedPoint) -> Result<Vec<IntVec>> {
    let p = a.charts().get(pt.chart).ok_or_else(|| Error::DanglingReference(format!("chart {}", pt.chart)))?;
    Ok(carrier_face(p, &pt.tropical)?.direction_lattice())
}

/// A family of points `T_Q -> chart` over an open cone `Q` with linear
/// tropical part, containing a given point at parameter `parameter`.
#[derive(Clone, Debug)]
pub struct PointFamily {
    pub cone: Polytope,
    pub map: IntAffineMap,
    pub parameter: RatVec,
    /// The family of all points with the same smooth part.
    pub canonical: bool,
}

/// Families of points through `pt`. Any open cone mapping linearly onto a
/// neighbourhood of the point will do; this lists the smallest one (the open
/// ray through the tropical coordinate) and the canonical one (the relative
/// interior of the carrier face). The chart must be a cone at the origin.
pub fn point_families(a: &Atlas, pt: &ExplodedPoint) -> Result<Vec<PointFamily>> {
    let p = a.charts().get(pt.chart).ok_or_else(|| Error::DanglingReference(format!("chart {}", pt.chart)))?;
    if !p.is_cone_at_origin() {
        return Err(Error::NotACone("point families need a cone chart at the origin".into()));
    }
    let n = p.ambient_dim();
    let mut out = Vec::new();
    let v = primitive_direction(&pt.tropical);
    if v.iter().any(|x| *x != 0) {
        let i = v.iter().position(|x| *x != 0).unwrap();
        let mu = &pt.tropical[i] / crate::polytope::rat(v[i]);
        let map = IntAffineMap::linear(IntMatrix::from_rows_with_cols(v.iter().map(|x| vec![*x]).collect(), 1));
        out.push(PointFamily { cone: Polytope::open_orthant(1), map, parameter: vec![mu], canonical: false });
    } else {
        out.push(PointFamily {
            cone: Polytope::whole_space(0),
            map: IntAffineMap::linear(IntMatrix::zeros(n, 0)),
            parameter: Vec::new(),
            canonical: false,
        });
    }
    let face = carrier_face(p, &pt.tropical)?.relative_interior();
    out.push(PointFamily { cone: face, map: IntAffineMap::identity(n), parameter: pt.tropical.clone(), canonical: true });
    Ok(out)
}
