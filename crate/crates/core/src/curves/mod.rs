//! Tropical curve types in a complex, their moduli polytopes, realizations and
//! universal families.

mod family;

pub use family::{is_universal, universal_family, CurveFamily, UniversalFamily};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::atlas::{face_index, TropicalComplex};
use crate::error::{Error, Result};
use crate::polytope::{dot, rat, Halfspace, IntAffineFunc, Polytope, Rel};
use crate::{IntVec, RatVec, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalEdge {
    pub tail: usize,
    pub head: usize,
    pub cell: usize,
    pub u: IntVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalEdge {
    pub vertex: usize,
    pub cell: usize,
    pub u: IntVec,
}

/// Combinatorial type: a cell for each vertex, oriented internal edges and
/// external ends, each with a cell and a constant integral direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveType {
    vertices: Vec<usize>,
    internal: Vec<InternalEdge>,
    external: Vec<ExternalEdge>,
}

impl CurveType {
    /// Rejects zero directions, loops (they would force `l u = 0`), edges to
    /// missing vertices and disconnected graphs.
    pub fn new(vertices: Vec<usize>, internal: Vec<InternalEdge>, external: Vec<ExternalEdge>) -> Result<Self> {
        let nv = vertices.len();
        if nv == 0 {
            return Err(Error::Invalid("a curve type needs a vertex".into()));
        }
        for (q, e) in internal.iter().enumerate() {
            if e.tail >= nv || e.head >= nv {
                return Err(Error::DanglingReference(format!("internal edge {q} names a missing vertex")));
            }
            if e.tail == e.head {
                return Err(Error::Invalid(format!("internal edge {q} is a loop")));
            }
            if e.u.iter().all(|x| *x == 0) {
                return Err(Error::Invalid(format!("internal edge {q} has zero direction")));
            }
        }
        for (k, e) in external.iter().enumerate() {
            if e.vertex >= nv {
                return Err(Error::DanglingReference(format!("external edge {k} names a missing vertex")));
            }
            if e.u.iter().all(|x| *x == 0) {
                return Err(Error::Invalid(format!("external edge {k} has zero direction")));
            }
        }
        let mut seen = vec![false; nv];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for e in &internal {
                for (a, b) in [(e.tail, e.head), (e.head, e.tail)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("the graph is not connected".into()));
        }
        Ok(CurveType { vertices, internal, external })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn internal(&self) -> &[InternalEdge] {
        &self.internal
    }

    pub fn external(&self) -> &[ExternalEdge] {
        &self.external
    }

    /// The same type with internal edge `q` oriented the other way.
    pub fn reversed(&self, q: usize) -> Result<CurveType> {
        let mut t = self.clone();
        let e = t.internal.get_mut(q).ok_or_else(|| Error::DanglingReference(format!("internal edge {q}")))?;
        std::mem::swap(&mut e.tail, &mut e.head);
        e.u = e.u.iter().map(|x| -x).collect();
        Ok(t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<EdgeJson> = self
            .internal
            .iter()
            .map(|e| EdgeJson::Internal { endpoints: [e.tail, e.head], cell: e.cell, u: e.u.clone() })
            .chain(self.external.iter().map(|e| EdgeJson::External { vertex: e.vertex, cell: e.cell, u: e.u.clone() }))
            .collect();
        let vertices: Vec<VertexJson> = self.vertices.iter().map(|c| VertexJson { cell: *c }).collect();
        serde_json::to_value(TypeJson { vertices, edges }).expect("curve types serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CurveType> {
        let t: TypeJson = serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        let mut internal = Vec::new();
        let mut external = Vec::new();
        for e in t.edges {
            match e {
                EdgeJson::Internal { endpoints: [tail, head], cell, u } => internal.push(InternalEdge { tail, head, cell, u }),
                EdgeJson::External { vertex, cell, u } => external.push(ExternalEdge { vertex, cell, u }),
            }
        }
        CurveType::new(t.vertices.into_iter().map(|v| v.cell).collect(), internal, external)
    }
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    cell: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum EdgeJson {
    Internal { endpoints: [usize; 2], cell: usize, u: IntVec },
    External { vertex: usize, cell: usize, u: IntVec },
}

#[derive(Serialize, Deserialize)]
struct TypeJson {
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeCheck {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

/// Type data is only read off embedded basic complexes.
fn complex_dim(c: &TropicalComplex) -> std::result::Result<usize, String> {
    let n = c.ambient_dim().ok_or("the complex is not embedded")?;
    if !c.is_basic_space() {
        return Err("the complex is not basic".into());
    }
    Ok(n)
}

fn cell(c: &TropicalComplex, i: usize) -> Result<&Polytope> {
    c.cells().get(i).ok_or_else(|| Error::DanglingReference(format!("cell {i}")))
}

/// Vertex cells are faces of the cells of their edges and every end recedes
/// in its direction.
pub fn validate_type(t: &CurveType, c: &TropicalComplex) -> Result<TypeCheck> {
    for &v in &t.vertices {
        cell(c, v)?;
    }
    for e in &t.internal {
        cell(c, e.cell)?;
    }
    for e in &t.external {
        cell(c, e.cell)?;
    }
    let mut diagnostics = Vec::new();
    let n = match complex_dim(c) {
        Ok(n) => n,
        Err(msg) => return Ok(TypeCheck { valid: false, diagnostics: vec![msg.to_string()] }),
    };
    let is_face = |v: usize, e: usize| face_index(&c.cells()[e].faces(), &c.cells()[t.vertices[v]]).is_some();
    for (q, e) in t.internal.iter().enumerate() {
        if e.u.len() != n {
            diagnostics.push(format!("internal edge {q}: direction has dimension {}", e.u.len()));
            continue;
        }
        for v in [e.tail, e.head] {
            if !is_face(v, e.cell) {
                diagnostics.push(format!("internal edge {q}: cell of vertex {v} is not a face of its cell"));
            }
        }
    }
    for (k, e) in t.external.iter().enumerate() {
        if e.u.len() != n {
            diagnostics.push(format!("external edge {k}: direction has dimension {}", e.u.len()));
            continue;
        }
        if !is_face(e.vertex, e.cell) {
            diagnostics.push(format!("external edge {k}: cell of vertex {} is not a face of its cell", e.vertex));
        }
        if !c.cells()[e.cell].closed_recession_cone().contains(&crate::polytope::rat_vec(&e.u))? {
            diagnostics.push(format!("external edge {k}: no infinite ray in direction {:?}", e.u));
        }
    }
    Ok(TypeCheck { valid: diagnostics.is_empty(), diagnostics })
}

/// `P_Gamma` in coordinates `(p_v for each vertex, l_q for each internal edge)`.
#[derive(Clone, Debug)]
pub struct ModuliPolytope {
    pub polytope: Option<Polytope>,
    /// Ambient dimension of the complex.
    pub n: usize,
    pub vertices: usize,
    pub edges: usize,
}

impl ModuliPolytope {
    pub fn dim(&self) -> usize {
        self.n * self.vertices + self.edges
    }

    pub fn vertex_block(&self, v: usize) -> std::ops::Range<usize> {
        v * self.n..(v + 1) * self.n
    }

    pub fn length_index(&self, q: usize) -> usize {
        self.n * self.vertices + q
    }

    pub fn is_empty(&self) -> bool {
        self.polytope.is_none()
    }

    /// `p_v` as a map from the moduli coordinates.
    pub fn position_map(&self, v: usize) -> crate::polytope::IntAffineMap {
        crate::polytope::IntAffineMap::coordinate_projection(self.dim(), &self.vertex_block(v).collect::<Vec<_>>())
    }

    pub fn length_fn(&self, q: usize) -> IntAffineFunc {
        IntAffineFunc::coordinate(self.dim(), self.length_index(q))
    }
}

/// Puts `f` on the block of `p_v` (and `l_q` with coefficient `lk`).
fn lift(m: &ModuliPolytope, f: &IntAffineFunc, v: usize, scale: i64, lk: Option<(usize, i64)>) -> IntAffineFunc {
    let mut slope = vec![0; m.dim()];
    for (j, s) in m.vertex_block(v).zip(&f.slope) {
        slope[j] = s * scale;
    }
    if let Some((q, k)) = lk {
        slope[m.length_index(q)] = k;
    }
    IntAffineFunc::new(slope, &f.constant * rat(scale))
}

/// The moduli polytope: `p_head - p_tail = l_q u_q`, `l_q > 0`, vertices in
/// the relative interiors of their cells and open edges in the relative
/// interiors of theirs. `polytope` is `None` when no curve has this type.
pub fn moduli_polytope(t: &CurveType, c: &TropicalComplex) -> Result<ModuliPolytope> {
    let check = validate_type(t, c)?;
    if !check.valid {
        return Err(Error::Invalid(check.diagnostics.join("; ")));
    }
    let n = c.ambient_dim().expect("validated complexes are embedded");
    let relints: Vec<Polytope> = c.cells().iter().map(Polytope::relative_interior).collect();
    build_moduli(t, &relints, n)
}

/// `moduli_polytope` for a type already known to be valid, given the
/// relative interiors of the cells.
pub(crate) fn build_moduli(t: &CurveType, relints: &[Polytope], n: usize) -> Result<ModuliPolytope> {
    let m = ModuliPolytope { polytope: None, n, vertices: t.vertices.len(), edges: t.internal.len() };
    let d = m.dim();
    let mut cs: Vec<Halfspace> = Vec::new();
    for (v, &cv) in t.vertices.iter().enumerate() {
        for h in relints[cv].constraints() {
            cs.push(Halfspace { func: lift(&m, &h.func, v, 1, None), rel: h.rel });
        }
    }
    for (q, e) in t.internal.iter().enumerate() {
        cs.push(Halfspace::gt(m.length_fn(q)));
        for i in 0..n {
            let mut slope = vec![0; d];
            slope[m.vertex_block(e.head).start + i] += 1;
            slope[m.vertex_block(e.tail).start + i] -= 1;
            slope[m.length_index(q)] = -e.u[i];
            let f = IntAffineFunc::linear(slope);
            cs.push(Halfspace::ge(f.clone()));
            cs.push(Halfspace::ge(f.neg()));
        }
        // Both endpoints lie in the closed cell, so by convexity the open
        // segment is in the relative interior once its midpoint is:
        // 2 h(p_tail + l u / 2) = 2 s.p_tail + (s.u) l + 2 c.
        for h in relints[e.cell].constraints() {
            let su = dot(&h.func.slope, &e.u);
            cs.push(Halfspace { func: lift(&m, &h.func, e.tail, 2, Some((q, su))), rel: h.rel });
        }
    }
    for e in &t.external {
        // The open ray p + t u, t > 0, stays in the relative interior iff each
        // constraint constant along u holds at p and the rest hold weakly.
        for h in relints[e.cell].constraints() {
            let rel = if dot(&h.func.slope, &e.u) == 0 { h.rel } else { Rel::Ge };
            cs.push(Halfspace { func: lift(&m, &h.func, e.vertex, 1, None), rel });
        }
    }
    let polytope = Polytope::try_new(d, cs)?;
    Ok(ModuliPolytope { polytope, ..m })
}

/// A curve of a given type: vertex positions and edge lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCurve {
    pub ty: CurveType,
    pub positions: Vec<RatVec>,
    pub lengths: RatVec,
}

impl TropicalCurve {
    pub fn coordinates(&self) -> RatVec {
        self.positions.iter().flatten().chain(&self.lengths).cloned().collect()
    }

    /// Endpoints of internal edge `q`.
    pub fn segment(&self, q: usize) -> (RatVec, RatVec) {
        let e = &self.ty.internal[q];
        (self.positions[e.tail].clone(), self.positions[e.head].clone())
    }
}

/// The curve with coordinates `m`, which must lie in `P_Gamma`.
pub fn realize(t: &CurveType, moduli: &ModuliPolytope, m: &[Rational]) -> Result<TropicalCurve> {
    crate::error::check_dim(moduli.dim(), m.len())?;
    let p = moduli.polytope.as_ref().ok_or(Error::Empty)?;
    if !p.contains(m)? {
        return Err(Error::Invalid("the point is outside the moduli polytope".into()));
    }
    let positions = (0..moduli.vertices).map(|v| m[moduli.vertex_block(v)].to_vec()).collect();
    let lengths = m[moduli.length_index(0)..].to_vec();
    Ok(TropicalCurve { ty: t.clone(), positions, lengths })
}

/// Positions propagated from vertex 0 along the edges, then checked against
/// `P_Gamma`.
pub fn realize_from_root(t: &CurveType, moduli: &ModuliPolytope, root: &[Rational], lengths: &[Rational]) -> Result<TropicalCurve> {
    crate::error::check_dim(moduli.n, root.len())?;
    crate::error::check_dim(moduli.edges, lengths.len())?;
    let mut pos: Vec<Option<RatVec>> = vec![None; moduli.vertices];
    pos[0] = Some(root.to_vec());
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        let pv = pos[v].clone().expect("queued vertices are placed");
        for (q, e) in t.internal.iter().enumerate() {
            let (other, sign) = if e.tail == v {
                (e.head, 1)
            } else if e.head == v {
                (e.tail, -1)
            } else {
                continue;
            };
            if pos[other].is_none() {
                let step = &lengths[q] * rat(sign);
                pos[other] = Some(pv.iter().zip(&e.u).map(|(x, u)| x + &step * rat(*u)).collect());
                queue.push_back(other);
            }
        }
    }
    let m: RatVec = pos.into_iter().flatten().flatten().chain(lengths.iter().cloned()).collect();
    realize(t, moduli, &m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EdgeDerivative {
    Internal { edge: usize, u: IntVec },
    External { edge: usize, u: IntVec },
}

/// The derivative of the curve along each edge, in the edge's orientation.
pub fn derivative_data(c: &TropicalCurve) -> Vec<EdgeDerivative> {
    c.ty.internal
        .iter()
        .enumerate()
        .map(|(q, e)| EdgeDerivative::Internal { edge: q, u: e.u.clone() })
        .chain(c.ty.external.iter().enumerate().map(|(k, e)| EdgeDerivative::External { edge: k, u: e.u.clone() }))
        .collect()
}
