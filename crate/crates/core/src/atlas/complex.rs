use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::param::{maps_agree_on, transport, FaceParam, RatAffine};
use super::{face_index, injective_on, validate_gluings, Atlas, Gluing};
use crate::error::{check_dim, Error, Result};
use crate::monoid::af_contains;
use crate::polytope::{Face, Halfspace, IntAffineFunc, IntAffineMap, Polytope};

/// Cells glued along faces by integral affine identifications.
#[derive(Clone, Debug)]
pub struct TropicalComplex {
    cells: Vec<Polytope>,
    attachments: Vec<Gluing>,
}

impl TropicalComplex {
    pub fn new(cells: Vec<Polytope>, attachments: Vec<Gluing>) -> Result<Self> {
        validate_gluings(&cells, &attachments)?;
        Ok(TropicalComplex { cells, attachments })
    }

    /// Cells in a common ambient space, attached by the identity wherever one
    /// cell is a face of another or two cells meet in a common face.
    pub fn embedded(dim: usize, cells: Vec<Polytope>) -> Result<Self> {
        for c in &cells {
            check_dim(dim, c.ambient_dim())?;
        }
        let faces: Vec<Vec<Face>> = cells.iter().map(Polytope::faces).collect();
        let id = IntAffineMap::identity(dim);
        let mut attachments = Vec::new();
        for i in 0..cells.len() {
            for j in 0..cells.len() {
                if i == j {
                    continue;
                }
                if face_index(&faces[j], &cells[i]).is_some() {
                    attachments.push(Gluing { a: i, face_a: cells[i].clone(), b: j, face_b: cells[i].clone(), map: id.clone() });
                    continue;
                }
                if i > j || face_index(&faces[i], &cells[j]).is_some() {
                    continue;
                }
                if let Some(meet) = cells[i].intersect(&cells[j])? {
                    if face_index(&faces[i], &meet).is_some() && face_index(&faces[j], &meet).is_some() {
                        attachments.push(Gluing { a: i, face_a: meet.clone(), b: j, face_b: meet, map: id.clone() });
                    }
                }
            }
        }
        Ok(TropicalComplex { cells, attachments })
    }

    pub fn cells(&self) -> &[Polytope] {
        &self.cells
    }

    pub fn attachments(&self) -> &[Gluing] {
        &self.attachments
    }

    /// All cells share one ambient space and every attachment is the identity.
    pub fn is_embedded(&self) -> bool {
        let Some(first) = self.cells.first() else { return true };
        let n = first.ambient_dim();
        self.cells.iter().all(|c| c.ambient_dim() == n) && self.attachments.iter().all(|g| g.map == IntAffineMap::identity(n))
    }

    pub fn ambient_dim(&self) -> Option<usize> {
        self.is_embedded().then(|| self.cells.first().map_or(0, Polytope::ambient_dim))
    }

    /// Each cell is identified with a face of any other cell in at most one
    /// way. Identifications of faces propagate to their subfaces.
    pub fn is_basic_space(&self) -> bool {
        let faces: Vec<Vec<Face>> = self.cells.iter().map(Polytope::faces).collect();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut nodes: Vec<(usize, usize)> = Vec::new();
        for (c, fs) in faces.iter().enumerate() {
            for f in 0..fs.len() {
                ids.insert((c, f), nodes.len());
                nodes.push((c, f));
            }
        }
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for g in &self.attachments {
            for sub in g.face_a.faces() {
                let Some(fa) = face_index(&faces[g.a], &sub.polytope) else { continue };
                let Ok(img) = sub.polytope.image(&g.map) else { return false };
                let Some(fb) = face_index(&faces[g.b], &img) else { return false };
                if g.a == g.b && fa == fb {
                    let p = FaceParam::of(&sub.polytope);
                    match transport(&p, &g.map, &p) {
                        Some(t) if t == RatAffine::identity(p.dim()) => {}
                        _ => return false,
                    }
                }
                let (x, y) = (find(&mut parent, ids[&(g.a, fa)]), find(&mut parent, ids[&(g.b, fb)]));
                parent[x] = y;
            }
        }
        let mut per_class: HashMap<usize, BTreeSet<(usize, usize)>> = HashMap::new();
        for (k, node) in nodes.iter().enumerate() {
            let r = find(&mut parent, k);
            per_class.entry(r).or_default().insert(*node);
        }
        per_class.values().all(|members| {
            let cells: BTreeSet<usize> = members.iter().map(|(c, _)| *c).collect();
            cells.len() == members.len()
        })
    }
}

/// One cell per chart, attached along the gluings.
pub fn tropical_part(a: &Atlas) -> Result<TropicalComplex> {
    TropicalComplex::new(a.charts().to_vec(), a.gluings().to_vec())
}

/// Replaces every cell and attached face by its closure.
pub fn trop_closure(c: &TropicalComplex) -> TropicalComplex {
    TropicalComplex {
        cells: c.cells.iter().map(Polytope::closure).collect(),
        attachments: c
            .attachments
            .iter()
            .map(|g| Gluing { a: g.a, face_a: g.face_a.closure(), b: g.b, face_b: g.face_b.closure(), map: g.map.clone() })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImmersionCheck {
    pub quasi_generated: bool,
    pub almost_generated: bool,
}

/// Checks a candidate per-cell map to `R^N`: injective on every cell
/// (`quasi_generated`) and additionally landing in `[0, inf)^N`
/// (`almost_generated`). The candidate must agree across attachments.
pub fn verify_immersion(c: &TropicalComplex, candidate: &[IntAffineMap]) -> Result<ImmersionCheck> {
    check_dim(c.cells.len(), candidate.len())?;
    let n = candidate.first().map_or(0, IntAffineMap::target_dim);
    for (cell, m) in c.cells.iter().zip(candidate) {
        check_dim(cell.ambient_dim(), m.source_dim())?;
        check_dim(n, m.target_dim())?;
    }
    for (gi, g) in c.attachments.iter().enumerate() {
        let composed = candidate[g.b].compose(&g.map)?;
        if !maps_agree_on(&g.face_a, &composed, &candidate[g.a])? {
            return Err(Error::InconsistentGluing(format!("candidate disagrees across attachment {gi}")));
        }
    }
    let quasi = c.cells.iter().zip(candidate).all(|(cell, m)| injective_on(m, cell));
    let mut in_orthant = true;
    for (cell, m) in c.cells.iter().zip(candidate) {
        for f in m.components() {
            if !af_contains(cell, &f)? {
                in_orthant = false;
            }
        }
    }
    Ok(ImmersionCheck { quasi_generated: quasi, almost_generated: quasi && in_orthant })
}

/// Vertex, one ray per component and one orthant `[0, inf)^S` per listed
/// intersection `S`, embedded in `R^components` along coordinate subspaces.
pub fn dual_intersection_complex(components: usize, intersections: &[Vec<usize>]) -> Result<TropicalComplex> {
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in intersections {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        if s.iter().any(|i| *i >= components) {
            return Err(Error::DanglingReference(format!("intersection {s:?} names a missing component")));
        }
        if s.len() >= 2 {
            sets.insert(s);
        }
    }
    for s in &sets {
        for skip in 0..s.len() {
            let sub: Vec<usize> = s.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, x)| *x).collect();
            if sub.len() >= 2 && !sets.contains(&sub) {
                return Err(Error::Invalid(format!("intersections are not closed under subsets: {sub:?} missing")));
            }
        }
    }
    let orthant = |s: &[usize]| -> Polytope {
        let n = components;
        let mut cs = Vec::new();
        for i in 0..n {
            let f = IntAffineFunc::coordinate(n, i);
            cs.push(Halfspace::ge(f.clone()));
            if !s.contains(&i) {
                cs.push(Halfspace::ge(f.neg()));
            }
        }
        Polytope::new(n, cs).expect("coordinate orthants are nonempty")
    };
    let mut cells = vec![orthant(&[])];
    cells.extend((0..components).map(|i| orthant(&[i])));
    cells.extend(sets.iter().map(|s| orthant(s)));
    TropicalComplex::embedded(components, cells)
}
