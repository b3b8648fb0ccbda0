//! Subdivisions of tropical complexes, star subdivisions of fans and the
//! induced subdivision of curve moduli.

mod induced;

pub use induced::{induced_type_refinement, InducedRefinement, DEFAULT_MAX_TYPES};

use serde::Serialize;

use crate::atlas::{injective_on, TropicalComplex};
use crate::error::{check_dim, Error, Result};
use crate::lattice::{rank, Relation};
use crate::polytope::{cone_from_rays, cone_rays, primitive_direction, rat_vec, IntAffineMap, Polytope};
use crate::{Int, IntVec};

/// Each refined cell lands in a named target cell by an integral affine map.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub target: TropicalComplex,
    pub refined: TropicalComplex,
    pub cell_map: Vec<(usize, IntAffineMap)>,
}

impl Subdivision {
    pub fn new(target: TropicalComplex, refined: TropicalComplex, cell_map: Vec<(usize, IntAffineMap)>) -> Result<Self> {
        check_dim(refined.cells().len(), cell_map.len())?;
        for (r, (t, m)) in cell_map.iter().enumerate() {
            let tc = target.cells().get(*t).ok_or_else(|| Error::DanglingReference(format!("target cell {t}")))?;
            check_dim(refined.cells()[r].ambient_dim(), m.source_dim())?;
            check_dim(tc.ambient_dim(), m.target_dim())?;
        }
        Ok(Subdivision { target, refined, cell_map })
    }

    pub fn identity(c: &TropicalComplex) -> Subdivision {
        let cell_map = c.cells().iter().enumerate().map(|(i, p)| (i, IntAffineMap::identity(p.ambient_dim()))).collect();
        Subdivision { target: c.clone(), refined: c.clone(), cell_map }
    }

    /// `inner` refines the refined complex of `outer`.
    pub fn compose(outer: &Subdivision, inner: &Subdivision) -> Result<Subdivision> {
        check_dim(outer.refined.cells().len(), inner.target.cells().len())?;
        let mut cell_map = Vec::with_capacity(inner.cell_map.len());
        for (t, m) in &inner.cell_map {
            let (t2, m2) = &outer.cell_map[*t];
            cell_map.push((*t2, m2.compose(m)?));
        }
        Subdivision::new(outer.target.clone(), inner.refined.clone(), cell_map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdivisionCheck {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

/// Containment and injectivity per cell, disjoint relative interiors inside
/// each target cell, and covering by facet pairing: every facet of a
/// top-dimensional piece is either on the boundary of its target cell or
/// shared with exactly one other piece.
pub fn validate_subdivision(s: &Subdivision) -> Result<SubdivisionCheck> {
    let mut diagnostics = Vec::new();
    let mut images = Vec::with_capacity(s.cell_map.len());
    for (r, (t, m)) in s.cell_map.iter().enumerate() {
        let cell = &s.refined.cells()[r];
        let img = cell.closure().image(m)?;
        if !img.is_subset_of(&s.target.cells()[*t].closure()) {
            diagnostics.push(format!("refined cell {r} is not inside target cell {t}"));
        }
        if !injective_on(m, cell) {
            diagnostics.push(format!("refined cell {r} is not mapped injectively"));
        }
        images.push(img);
    }
    for (t, target) in s.target.cells().iter().enumerate() {
        let closed = target.closure();
        let k = closed.dimension();
        let members: Vec<usize> = (0..images.len()).filter(|&r| s.cell_map[r].0 == t).collect();
        let full: Vec<usize> = members.iter().copied().filter(|&r| images[r].dimension() == k).collect();
        if full.is_empty() {
            diagnostics.push(format!("target cell {t} has no top-dimensional piece"));
            continue;
        }
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if let Some(meet) = images[a].relative_interior().intersect(&images[b].relative_interior())? {
                    diagnostics.push(format!("refined cells {a} and {b} overlap at {:?}", meet.witness()));
                }
            }
        }
        let eq = closed.implicit_equalities();
        let boundary: Vec<_> = (0..closed.constraints().len()).filter(|i| !eq.contains(i)).map(|i| closed.constraints()[i].func.clone()).collect();
        let facets: Vec<Vec<Polytope>> = full
            .iter()
            .map(|&r| images[r].faces().into_iter().filter(|f| f.dimension() + 1 == k).map(|f| f.polytope).collect())
            .collect();
        for (i, &a) in full.iter().enumerate() {
            for f in &facets[i] {
                let on_boundary = boundary.iter().any(|g| !f.meets(g, Relation::Gt));
                let shared = full
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .filter(|&(j, _)| facets[j].iter().any(|g| g.set_eq(f)))
                    .count();
                let ok = if on_boundary { shared == 0 } else { shared == 1 };
                if !ok {
                    diagnostics.push(format!(
                        "facet of refined cell {a} through {:?} is shared {shared} times (on boundary: {on_boundary})",
                        f.witness()
                    ));
                }
            }
        }
    }
    Ok(SubdivisionCheck { valid: diagnostics.is_empty(), diagnostics })
}

fn neg(v: &[Int]) -> IntVec {
    v.iter().map(|x| -x).collect()
}

/// Star subdivision of one cone containing `r`.
fn star_pieces(sigma: &Polytope, r: &IntVec) -> Result<Vec<Polytope>> {
    let n = sigma.ambient_dim();
    let gens = cone_rays(sigma);
    let in_lineality = |v: &IntVec| {
        let mut rows: Vec<_> = gens.lineality.iter().map(|l| rat_vec(l)).collect();
        let before = rank(&rows);
        rows.push(rat_vec(v));
        rank(&rows) == before
    };
    if gens.rays.is_empty() {
        return match gens.lineality.len() {
            1 => Ok(vec![cone_from_rays(std::slice::from_ref(r), n)?, cone_from_rays(&[neg(r)], n)?]),
            2 => {
                let w = gens
                    .lineality
                    .iter()
                    .find(|w| rank(&[rat_vec(r), rat_vec(w)]) == 2)
                    .expect("a plane has a direction off any line")
                    .clone();
                Ok(vec![cone_from_rays(&[r.clone(), neg(r), w.clone()], n)?, cone_from_rays(&[r.clone(), neg(r), neg(&w)], n)?])
            }
            d => Err(Error::Invalid(format!("star subdivision of a {d}-dimensional linear cell is not supported"))),
        };
    }
    if in_lineality(r) {
        return Ok(vec![sigma.clone()]);
    }
    let k = sigma.dimension();
    let mut out: Vec<Polytope> = Vec::new();
    for face in sigma.faces() {
        if face.dimension() + 1 != k || face.polytope.contains(&rat_vec(r))? {
            continue;
        }
        let g = cone_rays(&face.polytope);
        let mut rays: Vec<IntVec> = g.lineality.iter().flat_map(|l| [l.clone(), neg(l)]).collect();
        rays.extend(g.rays);
        rays.push(r.clone());
        let piece = cone_from_rays(&rays, n)?;
        if !out.iter().any(|p| p.set_eq(&piece)) {
            out.push(piece);
        }
    }
    Ok(out)
}

/// The star subdivision of a fan (an embedded complex of closed cones at the
/// origin) at the ray through `ray`.
pub fn stellar_subdivide(c: &TropicalComplex, ray: &[Int]) -> Result<Subdivision> {
    let n = c.ambient_dim().ok_or_else(|| Error::Invalid("stellar subdivision needs an embedded complex".into()))?;
    check_dim(n, ray.len())?;
    let r = primitive_direction(&rat_vec(ray));
    if r.iter().all(|x| *x == 0) {
        return Err(Error::Invalid("the ray must be nonzero".into()));
    }
    for (i, cell) in c.cells().iter().enumerate() {
        if !cell.is_closed() || !cell.is_cone_at_origin() {
            return Err(Error::NotACone(format!("cell {i} is not a closed cone at the origin")));
        }
    }
    let rv = rat_vec(&r);
    if !c.cells().iter().any(|cell| cell.contains(&rv).unwrap_or(false)) {
        return Err(Error::Invalid("the ray lies outside all cells".into()));
    }
    let mut cells = Vec::new();
    let mut cell_map = Vec::new();
    for (i, cell) in c.cells().iter().enumerate() {
        let pieces = if cell.contains(&rv)? { star_pieces(cell, &r)? } else { vec![cell.clone()] };
        for p in pieces {
            cells.push(p);
            cell_map.push((i, IntAffineMap::identity(n)));
        }
    }
    Subdivision::new(c.clone(), TropicalComplex::embedded(n, cells)?, cell_map)
}

/// Faces of the cells of an embedded complex, each listed once.
pub fn strata(c: &TropicalComplex) -> Vec<Polytope> {
    let mut out: Vec<Polytope> = Vec::new();
    for cell in c.cells() {
        for f in cell.faces() {
            if !out.iter().any(|g| g.set_eq(&f.polytope)) {
                out.push(f.polytope);
            }
        }
    }
    out.sort_by_key(|p| p.dimension());
    out
}

#[cfg(test)]
mod tests;
