//! Cutting curve types at internal edges, the moduli of the pieces and the
//! fiber-product identity recovering the moduli with a marked point on each
//! internal edge; tropical completion; the monoids of a cut edge.

mod monoids;

pub use monoids::{cut_edge_monoids, CutEdgeMonoids, MonoidCheck};

use serde::Serialize;

use crate::atlas::{face_index, TropicalComplex};
use crate::curves::{build_moduli, moduli_polytope, validate_type, CurveType, ExternalEdge, ModuliPolytope};
use crate::error::{check_dim, Error, Result};
use crate::lattice::rank;
use crate::polytope::{dot, Halfspace, IntAffineFunc, IntAffineMap, Polytope};
use crate::{IntMatrix, IntVec, RatVec, Rational};

/// `P_Gamma` with a point `0 < t_q < l_q` on each internal edge, in
/// coordinates `(p_v, l_q, t_q)`.
#[derive(Clone, Debug)]
pub struct MarkedModuli {
    pub moduli: ModuliPolytope,
    pub polytope: Polytope,
}

impl MarkedModuli {
    pub fn dim(&self) -> usize {
        self.moduli.dim() + self.moduli.edges
    }

    pub fn marked_index(&self, q: usize) -> usize {
        self.moduli.dim() + q
    }

    /// Forgets the marked points.
    pub fn forget(&self) -> IntAffineMap {
        IntAffineMap::coordinate_projection(self.dim(), &(0..self.moduli.dim()).collect::<Vec<_>>())
    }
}

pub fn marked_moduli(t: &CurveType, c: &TropicalComplex) -> Result<MarkedModuli> {
    let moduli = moduli_polytope(t, c)?;
    let base = moduli.polytope.clone().ok_or(Error::Empty)?;
    let d = moduli.dim();
    let k = moduli.edges;
    let mut cs: Vec<Halfspace> = base.constraints().iter().map(|h| Halfspace { func: h.func.embed(0, k), rel: h.rel }).collect();
    for q in 0..k {
        let tq = IntAffineFunc::coordinate(d + k, d + q);
        cs.push(Halfspace::gt(tq.clone()));
        cs.push(Halfspace::gt(moduli.length_fn(q).embed(0, k).add(&tq.neg())));
    }
    let polytope = Polytope::new(d + k, cs)?;
    Ok(MarkedModuli { moduli, polytope })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Outgoing,
    Incoming,
}

/// What is left of a cut internal edge at one of its ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfEdge {
    pub edge: usize,
    pub cell: usize,
    pub u: IntVec,
    pub orientation: Orientation,
}

/// The component containing `vertex` after cutting every internal edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutType {
    pub base: CurveType,
    pub vertex: usize,
    pub component: Vec<usize>,
    pub half_edges: Vec<HalfEdge>,
}

impl CutType {
    pub fn ends(&self) -> Vec<&ExternalEdge> {
        self.base.external().iter().filter(|e| e.vertex == self.vertex).collect()
    }
}

pub fn cut(t: &CurveType) -> Vec<CutType> {
    (0..t.vertices().len())
        .map(|v| {
            let half_edges = t
                .internal()
                .iter()
                .enumerate()
                .filter_map(|(q, e)| {
                    let orientation = if e.tail == v {
                        Orientation::Outgoing
                    } else if e.head == v {
                        Orientation::Incoming
                    } else {
                        return None;
                    };
                    Some(HalfEdge { edge: q, cell: e.cell, u: e.u.clone(), orientation })
                })
                .collect();
            CutType { base: t.clone(), vertex: v, component: vec![v], half_edges }
        })
        .collect()
}

/// Moduli of a cut piece in coordinates `(p_v, s_j)`, one cut length per
/// half-edge, with evaluation at the cut points.
#[derive(Clone, Debug)]
pub struct CutModuli {
    pub polytope: Option<Polytope>,
    pub n: usize,
    pub half_edges: Vec<HalfEdge>,
    pub evaluation: Vec<IntAffineMap>,
}

impl CutModuli {
    pub fn dim(&self) -> usize {
        self.n + self.half_edges.len()
    }
}

/// `ev_j = p +- s_j u_j`, required to lie in the relative interior of the
/// edge's cell; the rest of the half-open segment then does too.
pub fn cut_moduli(ct: &CutType, c: &TropicalComplex) -> Result<CutModuli> {
    let cell_v = ct.base.vertices()[ct.vertex];
    let ends: Vec<ExternalEdge> = ct.ends().into_iter().map(|e| ExternalEdge { vertex: 0, cell: e.cell, u: e.u.clone() }).collect();
    let local = CurveType::new(vec![cell_v], Vec::new(), ends)?;
    let check = validate_type(&local, c)?;
    if !check.valid {
        return Err(Error::Invalid(check.diagnostics.join("; ")));
    }
    let n = c.ambient_dim().expect("validated complexes are embedded");
    for h in &ct.half_edges {
        let cell = c.cells().get(h.cell).ok_or_else(|| Error::DanglingReference(format!("cell {}", h.cell)))?;
        check_dim(n, h.u.len())?;
        if face_index(&cell.faces(), &c.cells()[cell_v]).is_none() {
            return Err(Error::Invalid(format!("cell of vertex {} is not a face of the cell of edge {}", ct.vertex, h.edge)));
        }
    }
    let k = ct.half_edges.len();
    let d = n + k;
    let relints: Vec<Polytope> = c.cells().iter().map(Polytope::relative_interior).collect();
    let evaluation: Vec<IntAffineMap> = ct
        .half_edges
        .iter()
        .enumerate()
        .map(|(j, h)| {
            let sign = if h.orientation == Orientation::Outgoing { 1 } else { -1 };
            let m = IntMatrix::from_fn(n, d, |i, col| {
                if col == i {
                    1
                } else if col == n + j {
                    sign * h.u[i]
                } else {
                    0
                }
            });
            IntAffineMap::linear(m)
        })
        .collect();
    let Some(vertex_part) = build_moduli(&local, &relints, n)?.polytope else {
        return Ok(CutModuli { polytope: None, n, half_edges: ct.half_edges.clone(), evaluation });
    };
    let mut cs: Vec<Halfspace> = vertex_part.constraints().iter().map(|h| Halfspace { func: h.func.embed(0, k), rel: h.rel }).collect();
    for (j, h) in ct.half_edges.iter().enumerate() {
        cs.push(Halfspace::gt(IntAffineFunc::coordinate(d, n + j)));
        for g in relints[h.cell].constraints() {
            cs.push(Halfspace { func: evaluation[j].pull_back(&g.func), rel: g.rel });
        }
    }
    Ok(CutModuli { polytope: Polytope::try_new(d, cs)?, n, half_edges: ct.half_edges.clone(), evaluation })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlueDims {
    pub fiber_product: usize,
    pub marked: usize,
    pub cut_sum: usize,
    /// Sum of the dimensions of the edge cells.
    pub evaluation_conditions: usize,
    pub transverse: bool,
}

/// The product of the cut moduli cut down by `ev_out = ev_in` on every
/// internal edge, compared with the marked moduli through the dictionary
/// `p = p`, `l_q = s_out + s_in`, `t_q = s_out`.
#[derive(Clone, Debug)]
pub struct GlueResult {
    pub fiber_product: Option<Polytope>,
    pub marked: MarkedModuli,
    pub dictionary: IntAffineMap,
    pub verified: bool,
    pub dims: GlueDims,
}

pub fn glue(t: &CurveType, c: &TropicalComplex) -> Result<GlueResult> {
    let marked = marked_moduli(t, c)?;
    let pieces = cut(t);
    let cms: Vec<CutModuli> = pieces.iter().map(|p| cut_moduli(p, c)).collect::<Result<_>>()?;
    let polys: Vec<&Polytope> = cms.iter().map(|m| m.polytope.as_ref().ok_or(Error::Empty)).collect::<Result<_>>()?;
    let n = marked.moduli.n;
    let offsets: Vec<usize> = cms.iter().scan(0, |acc, m| {
        let o = *acc;
        *acc += m.dim();
        Some(o)
    }).collect();
    let total: usize = cms.iter().map(CutModuli::dim).sum();
    let lift = |v: usize, f: &IntAffineFunc| f.embed(offsets[v], total - offsets[v] - cms[v].dim());
    let mut cs: Vec<Halfspace> = Vec::new();
    for (v, p) in polys.iter().enumerate() {
        cs.extend(p.constraints().iter().map(|h| Halfspace { func: lift(v, &h.func), rel: h.rel }));
    }
    let product = Polytope::new(total, cs.clone())?;
    let slot = |v: usize, q: usize| cms[v].half_edges.iter().position(|h| h.edge == q).expect("cut keeps every edge at both ends");
    let mut conditions: Vec<IntAffineFunc> = Vec::new();
    for (q, e) in t.internal().iter().enumerate() {
        let (jo, ji) = (slot(e.tail, q), slot(e.head, q));
        for i in 0..n {
            let out = lift(e.tail, &cms[e.tail].evaluation[jo].component(i));
            let inc = lift(e.head, &cms[e.head].evaluation[ji].component(i));
            conditions.push(out.add(&inc.neg()));
        }
    }
    let fiber_product = product.with_equalities(&conditions)?;

    let d = marked.dim();
    let s_index = |v: usize, j: usize| offsets[v] + n + j;
    let mut dict: Vec<IntAffineFunc> = Vec::with_capacity(d);
    for v in 0..t.vertices().len() {
        for i in 0..n {
            dict.push(IntAffineFunc::coordinate(total, offsets[v] + i));
        }
    }
    let mut inverse = vec![IntAffineFunc::constant_fn(d, Rational::from_integer(0.into())); total];
    for v in 0..t.vertices().len() {
        for i in 0..n {
            inverse[offsets[v] + i] = IntAffineFunc::coordinate(d, marked.moduli.vertex_block(v).start + i);
        }
    }
    let mut marks = Vec::new();
    for (q, e) in t.internal().iter().enumerate() {
        let (so, si) = (s_index(e.tail, slot(e.tail, q)), s_index(e.head, slot(e.head, q)));
        dict.push(IntAffineFunc::coordinate(total, so).add(&IntAffineFunc::coordinate(total, si)));
        marks.push(IntAffineFunc::coordinate(total, so));
        let (l, tq) = (IntAffineFunc::coordinate(d, marked.moduli.length_index(q)), IntAffineFunc::coordinate(d, marked.marked_index(q)));
        inverse[so] = tq.clone();
        inverse[si] = l.add(&tq.neg());
    }
    dict.extend(marks);
    let dictionary = IntAffineMap::from_components(total, &dict)?;
    let inverse = IntAffineMap::from_components(d, &inverse)?;

    let verified = match &fiber_product {
        Some(f) => {
            let forward = marked.polytope.preimage(&dictionary)?.is_some_and(|pre| f.is_subset_of(&pre));
            let backward = f.preimage(&inverse)?.is_some_and(|pre| marked.polytope.is_subset_of(&pre));
            forward && backward
        }
        None => false,
    };
    let dirs = product.direction_lattice();
    let restricted: Vec<RatVec> = conditions
        .iter()
        .map(|f| dirs.iter().map(|d| Rational::from_integer(dot(&f.slope, d).into())).collect())
        .collect();
    // Both evaluations at an edge land in the span of its cell.
    let codim: usize = t.internal().iter().map(|e| c.cells()[e.cell].dimension()).sum();
    let dims = GlueDims {
        fiber_product: fiber_product.as_ref().map_or(0, Polytope::dimension),
        marked: marked.polytope.dimension(),
        cut_sum: polys.iter().map(|p| p.dimension()).sum(),
        evaluation_conditions: codim,
        transverse: rank(&restricted) == codim,
    };
    Ok(GlueResult { fiber_product, marked, dictionary, verified, dims })
}

/// Direction cones at `point` of all cells having `cell` as a face: the fan
/// left after completing at a point of the relative interior of `cell`.
pub fn local_fan(c: &TropicalComplex, cell: usize, point: &[Rational]) -> Result<TropicalComplex> {
    let n = c.ambient_dim().ok_or_else(|| Error::Invalid("local fans need an embedded complex".into()))?;
    let base = c.cells().get(cell).ok_or_else(|| Error::DanglingReference(format!("cell {cell}")))?;
    check_dim(n, point.len())?;
    if !base.relative_interior().contains(point)? {
        return Err(Error::Invalid("the point is not in the relative interior of the cell".into()));
    }
    let mut cones: Vec<Polytope> = Vec::new();
    for d in c.cells() {
        if face_index(&d.faces(), base).is_none() {
            continue;
        }
        let tight: Vec<Halfspace> = d
            .constraints()
            .iter()
            .filter(|h| num_traits::Zero::is_zero(&h.func.evaluate(point)))
            .map(|h| Halfspace::ge(IntAffineFunc::linear(h.func.slope.clone())))
            .collect();
        let cone = Polytope::new(n, tight)?;
        if !cones.iter().any(|k| k.set_eq(&cone)) {
            cones.push(cone);
        }
    }
    TropicalComplex::embedded(n, cones)
}

/// A point in the relative interior of a cell, for callers without one.
pub fn interior_point(p: &Polytope) -> RatVec {
    p.relative_interior().witness()
}

#[cfg(test)]
mod tests;
