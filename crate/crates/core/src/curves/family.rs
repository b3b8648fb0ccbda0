use itertools::Itertools;

use super::{moduli_polytope, CurveType, ModuliPolytope};
use crate::atlas::param::FaceParam;
use crate::atlas::{Atlas, AtlasMorphism, Gluing, Mode, TropicalComplex};
use crate::error::{Error, Result};
use crate::polytope::{rat_vec, Halfspace, IntAffineFunc, IntAffineMap, Polytope};
use crate::{IntMatrix, IntVec};

const MAX_MATCH_VERTICES: usize = 8;

/// The universal family over `P_Gamma`: one cell per vertex, one node-shaped
/// cell `0 <= t <= l_q` per internal edge and `t >= 0` per end.
#[derive(Clone, Debug)]
pub struct UniversalFamily {
    pub ty: CurveType,
    pub moduli: ModuliPolytope,
    pub total: TropicalComplex,
    pub projection: Vec<IntAffineMap>,
    pub evaluation: Vec<IntAffineMap>,
}

impl UniversalFamily {
    pub fn base(&self) -> &Polytope {
        self.moduli.polytope.as_ref().expect("universal families have nonempty bases")
    }

    pub fn projection_morphism(&self) -> Result<AtlasMorphism> {
        let source = Atlas::new(self.total.cells().to_vec(), self.total.attachments().to_vec(), Mode::Log)?;
        let maps = self.projection.iter().map(|m| (0, m.clone())).collect();
        AtlasMorphism::new(source, Atlas::single(self.base().clone()), maps)
    }

    /// The family as a candidate for `is_universal`.
    pub fn as_candidate(&self) -> CurveFamily {
        CurveFamily {
            ty: self.ty.clone(),
            base: self.base().clone(),
            positions: (0..self.moduli.vertices).map(|v| self.moduli.position_map(v)).collect(),
            lengths: (0..self.moduli.edges).map(|q| self.moduli.length_fn(q)).collect(),
        }
    }
}

pub fn universal_family(t: &CurveType, c: &TropicalComplex) -> Result<UniversalFamily> {
    let moduli = moduli_polytope(t, c)?;
    let base = moduli.polytope.clone().ok_or(Error::Empty)?;
    let d = moduli.dim();
    let n = moduli.n;
    let nv = moduli.vertices;
    let time = IntAffineFunc::coordinate(d + 1, d);
    let lifted: Vec<Halfspace> = base.constraints().iter().map(|h| Halfspace { func: h.func.embed(0, 1), rel: h.rel }).collect();
    let at = |f: Option<IntAffineFunc>| -> Result<IntAffineMap> {
        let mut comps: Vec<IntAffineFunc> = (0..d).map(|i| IntAffineFunc::coordinate(d, i)).collect();
        comps.push(f.unwrap_or_else(|| IntAffineFunc::constant_fn(d, num_traits::Zero::zero())));
        IntAffineMap::from_components(d, &comps)
    };
    let edge_eval = |v: usize, u: &IntVec| -> IntAffineMap {
        let block = moduli.vertex_block(v);
        IntAffineMap::linear(IntMatrix::from_fn(n, d + 1, |i, j| {
            if j == d {
                u[i]
            } else if j == block.start + i {
                1
            } else {
                0
            }
        }))
    };
    let mut cells = vec![base.clone(); nv];
    let mut evaluation: Vec<IntAffineMap> = (0..nv).map(|v| moduli.position_map(v)).collect();
    let mut attachments = Vec::new();
    let attach = |cells: &[Polytope], a: usize, b: usize, map: IntAffineMap, tight: IntAffineFunc| -> Result<Gluing> {
        let face_b = cells[b].with_equalities(&[tight])?.ok_or(Error::Empty)?;
        Ok(Gluing { a, face_a: base.clone(), b, face_b, map })
    };
    for (q, e) in t.internal().iter().enumerate() {
        let mut cs = lifted.clone();
        cs.push(Halfspace::ge(time.clone()));
        cs.push(Halfspace::ge(moduli.length_fn(q).embed(0, 1).add(&time.neg())));
        cells.push(Polytope::new(d + 1, cs)?);
        evaluation.push(edge_eval(e.tail, &e.u));
        let b = cells.len() - 1;
        attachments.push(attach(&cells, e.tail, b, at(None)?, time.clone())?);
        attachments.push(attach(&cells, e.head, b, at(Some(moduli.length_fn(q)))?, moduli.length_fn(q).embed(0, 1).add(&time.neg()))?);
    }
    for e in t.external() {
        let mut cs = lifted.clone();
        cs.push(Halfspace::ge(time.clone()));
        cells.push(Polytope::new(d + 1, cs)?);
        evaluation.push(edge_eval(e.vertex, &e.u));
        let b = cells.len() - 1;
        attachments.push(attach(&cells, e.vertex, b, at(None)?, time.clone())?);
    }
    let projection = cells
        .iter()
        .map(|cell| IntAffineMap::coordinate_projection(cell.ambient_dim(), &(0..d).collect::<Vec<_>>()))
        .collect();
    let total = TropicalComplex::new(cells, attachments)?;
    Ok(UniversalFamily { ty: t.clone(), moduli, total, projection, evaluation })
}

/// A family of curves of a type over `base`: vertex positions and internal
/// edge lengths as integral affine functions of the base point.
#[derive(Clone, Debug)]
pub struct CurveFamily {
    pub ty: CurveType,
    pub base: Polytope,
    pub positions: Vec<IntAffineMap>,
    pub lengths: Vec<IntAffineFunc>,
}

/// Is `f` an integral affine isomorphism from `src` onto `dst`?
fn is_lattice_iso_onto(f: &IntAffineMap, src: &Polytope, dst: &Polytope) -> Result<bool> {
    if !src.image(f)?.set_eq(dst) {
        return Ok(false);
    }
    let d1 = src.direction_lattice();
    let param = FaceParam::of(dst);
    if d1.len() != param.dim() {
        return Ok(false);
    }
    let mut cols = Vec::with_capacity(d1.len());
    for d in &d1 {
        match param.coords(&rat_vec(&f.matrix.mul_vec(d))) {
            Some(c) if c.iter().all(|x| x.is_integer()) => {
                cols.push(c.iter().map(|x| num_traits::ToPrimitive::to_i64(&x.to_integer()).unwrap_or(i64::MAX)).collect::<IntVec>())
            }
            _ => return Ok(false),
        }
    }
    if cols.is_empty() {
        return Ok(true);
    }
    Ok(IntMatrix::from_fn(cols.len(), cols.len(), |r, c| cols[c][r]).is_unimodular())
}

/// Assignments of the candidate's internal edges to `t`'s under the vertex
/// bijection `sigma`, allowing reversed orientation.
fn edge_matchings(cand: &CurveType, t: &CurveType, sigma: &[usize]) -> Vec<Vec<usize>> {
    fn go(i: usize, cand: &CurveType, t: &CurveType, sigma: &[usize], used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cand.internal().len() {
            out.push(cur.clone());
            return;
        }
        let e = &cand.internal()[i];
        let neg: IntVec = e.u.iter().map(|x| -x).collect();
        for (q, f) in t.internal().iter().enumerate() {
            if used[q] || f.cell != e.cell {
                continue;
            }
            let same = (sigma[e.tail], sigma[e.head]) == (f.tail, f.head) && e.u == f.u;
            let flipped = (sigma[e.head], sigma[e.tail]) == (f.tail, f.head) && neg == f.u;
            if same || flipped {
                used[q] = true;
                cur.push(q);
                go(i + 1, cand, t, sigma, used, cur, out);
                cur.pop();
                used[q] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, cand, t, sigma, &mut vec![false; t.internal().len()], &mut Vec::new(), &mut out);
    out
}

/// Does the candidate's classifying map to `P_Gamma` give an integral affine
/// isomorphism, for some identification of its type with `t`?
pub fn is_universal(candidate: &CurveFamily, t: &CurveType, c: &TropicalComplex) -> Result<bool> {
    let moduli = moduli_polytope(t, c)?;
    let Some(target) = &moduli.polytope else { return Ok(false) };
    let cand = &candidate.ty;
    let nv = t.vertices().len();
    if cand.vertices().len() != nv || cand.internal().len() != t.internal().len() || cand.external().len() != t.external().len() {
        return Ok(false);
    }
    if nv > MAX_MATCH_VERTICES {
        return Err(Error::ResourceBound { count: nv, limit: MAX_MATCH_VERTICES });
    }
    let src_dim = candidate.base.ambient_dim();
    let ends = |ty: &CurveType, relabel: &dyn Fn(usize) -> usize| -> Vec<(usize, usize, IntVec)> {
        ty.external().iter().map(|e| (relabel(e.vertex), e.cell, e.u.clone())).sorted().collect()
    };
    let target_ends = ends(t, &|v| v);
    for sigma in (0..nv).permutations(nv) {
        if (0..nv).any(|v| cand.vertices()[v] != t.vertices()[sigma[v]]) {
            continue;
        }
        if ends(cand, &|v| sigma[v]) != target_ends {
            continue;
        }
        for tau in edge_matchings(cand, t, &sigma) {
            let mut comps = vec![IntAffineFunc::constant_fn(src_dim, num_traits::Zero::zero()); moduli.dim()];
            for (v, &sv) in sigma.iter().enumerate() {
                for (k, j) in moduli.vertex_block(sv).enumerate() {
                    comps[j] = candidate.positions[v].component(k);
                }
            }
            for (q, &tq) in tau.iter().enumerate() {
                comps[moduli.length_index(tq)] = candidate.lengths[q].clone();
            }
            let phi = IntAffineMap::from_components(src_dim, &comps)?;
            if is_lattice_iso_onto(&phi, &candidate.base, target)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
