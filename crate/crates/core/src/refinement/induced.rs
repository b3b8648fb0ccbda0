use std::collections::HashMap;

use itertools::Itertools;

use super::{strata, Subdivision};
use crate::atlas::{face_index, TropicalComplex};
use crate::curves::{build_moduli, moduli_polytope, CurveType, ExternalEdge, InternalEdge, ModuliPolytope};
use crate::error::{Error, Result};
use crate::polytope::{IntAffineFunc, IntAffineMap, Polytope};
use crate::IntVec;

pub const DEFAULT_MAX_TYPES: usize = 10_000;

/// Refined types, their moduli and the subdivision of `closure(P_Gamma)` by
/// the images of their closures.
#[derive(Clone, Debug)]
pub struct InducedRefinement {
    /// The faces of the refined cells, which the refined types refer to.
    pub complex: TropicalComplex,
    pub types: Vec<CurveType>,
    pub moduli: Vec<ModuliPolytope>,
    /// `P_Gamma' -> P_Gamma`: original vertex positions and summed lengths.
    pub maps: Vec<IntAffineMap>,
    pub subdivision: Subdivision,
}

/// Where a path of pieces ends: at a vertex in a stratum, or in an end.
#[derive(Clone, Copy)]
enum End {
    Vertex(usize),
    Open,
}

#[derive(Clone, Debug)]
struct Chain {
    pieces: Vec<usize>,
    points: Vec<usize>,
}

struct Search {
    n: usize,
    relints: Vec<Polytope>,
    recession: Vec<Polytope>,
    face_of: Vec<Vec<bool>>,
}

impl Search {
    fn path_type(&self, start: usize, pieces: &[usize], points: &[usize], end: End, u: &IntVec) -> Result<Option<CurveType>> {
        let mut vertices = vec![start];
        vertices.extend(points);
        if let End::Vertex(w) = end {
            vertices.push(w);
        }
        let bounded = match end {
            End::Vertex(_) => pieces.len(),
            End::Open => pieces.len() - 1,
        };
        let internal = (0..bounded).map(|i| InternalEdge { tail: i, head: i + 1, cell: pieces[i], u: u.clone() }).collect();
        let external = match end {
            End::Open => vec![ExternalEdge { vertex: bounded, cell: pieces[bounded], u: u.clone() }],
            End::Vertex(_) => Vec::new(),
        };
        let t = CurveType::new(vertices, internal, external)?;
        // Face incidences hold by construction; only the end must recede.
        if let End::Open = end {
            if !self.recession[pieces[bounded]].contains(&crate::polytope::rat_vec(u))? {
                return Ok(None);
            }
        }
        if build_moduli(&t, &self.relints, self.n)?.is_empty() {
            return Ok(None);
        }
        Ok(Some(t))
    }

    /// All ways for a straight edge in direction `u` from a point of `start`
    /// to run through the allowed strata and finish at `end`.
    fn chains(&self, start: usize, end: End, u: &IntVec, allowed: &[usize]) -> Result<Vec<Chain>> {
        let mut out = Vec::new();
        let mut stack = vec![Chain { pieces: Vec::new(), points: Vec::new() }];
        while let Some(c) = stack.pop() {
            let last = *c.points.last().unwrap_or(&start);
            for &e in allowed {
                if c.pieces.contains(&e) || !self.face_of[last][e] {
                    continue;
                }
                let mut pieces = c.pieces.clone();
                pieces.push(e);
                let closes = match end {
                    End::Vertex(w) => self.face_of[w][e],
                    End::Open => true,
                };
                if closes && self.path_type(start, &pieces, &c.points, end, u)?.is_some() {
                    out.push(Chain { pieces: pieces.clone(), points: c.points.clone() });
                }
                for &x in allowed {
                    if x == e || x == last || x == start || c.points.contains(&x) || !self.face_of[x][e] {
                        continue;
                    }
                    let mut points = c.points.clone();
                    points.push(x);
                    if self.path_type(start, &pieces, &points[..points.len() - 1], End::Vertex(x), u)?.is_some() {
                        stack.push(Chain { pieces: pieces.clone(), points });
                    }
                }
            }
        }
        out.sort_by(|a, b| (&a.pieces, &a.points).cmp(&(&b.pieces, &b.points)));
        Ok(out)
    }
}

/// The curve types in the refined complex whose realizations are the
/// realizations of `t`, found by placing each vertex in a stratum and
/// threading each edge through strata, with two-valent vertices where edges
/// cross between strata. The subdivision must be embedded (identity cell
/// maps). More than `bound` candidate types aborts with `ResourceBound`.
pub fn induced_type_refinement(t: &CurveType, s: &Subdivision, bound: usize) -> Result<InducedRefinement> {
    let n = s.target.ambient_dim().ok_or_else(|| Error::Invalid("the target complex must be embedded".into()))?;
    if s.refined.ambient_dim() != Some(n) || s.cell_map.iter().any(|(_, m)| *m != IntAffineMap::identity(n)) {
        return Err(Error::Invalid("induced refinement needs an embedded subdivision with identity cell maps".into()));
    }
    let base = moduli_polytope(t, &s.target)?;
    let base_poly = base.polytope.clone().ok_or(Error::Empty)?;
    let cells = strata(&s.refined);
    let complex = TropicalComplex::embedded(n, cells.clone())?;
    let relints: Vec<Polytope> = cells.iter().map(Polytope::relative_interior).collect();
    let target_relints: Vec<Polytope> = s.target.cells().iter().map(Polytope::relative_interior).collect();
    let inside = |target: usize| -> Vec<usize> { (0..cells.len()).filter(|&i| relints[i].is_subset_of(&target_relints[target])).collect() };
    let face_of: Vec<Vec<bool>> = cells
        .iter()
        .map(|a| cells.iter().map(|b| face_index(&b.faces(), a).is_some()).collect())
        .collect();
    let recession = cells.iter().map(Polytope::closed_recession_cone).collect();
    let search = Search { n, relints: relints.clone(), recession, face_of };

    let vertex_options: Vec<Vec<usize>> = t.vertices().iter().map(|&c| inside(c)).collect();
    let internal_allowed: Vec<Vec<usize>> = t.internal().iter().map(|e| inside(e.cell)).collect();
    let external_allowed: Vec<Vec<usize>> = t.external().iter().map(|e| inside(e.cell)).collect();

    let mut cache: HashMap<(usize, Option<usize>, usize, bool), Vec<Chain>> = HashMap::new();
    let mut candidates: Vec<(Vec<usize>, Vec<Vec<Chain>>)> = Vec::new();
    let mut count = 0usize;
    for assignment in vertex_options.iter().map(|o| o.iter().copied()).multi_cartesian_product() {
        let mut options: Vec<Vec<Chain>> = Vec::new();
        for (q, e) in t.internal().iter().enumerate() {
            let key = (assignment[e.tail], Some(assignment[e.head]), q, true);
            if !cache.contains_key(&key) {
                let c = search.chains(assignment[e.tail], End::Vertex(assignment[e.head]), &e.u, &internal_allowed[q])?;
                cache.insert(key, c);
            }
            options.push(cache[&key].clone());
        }
        for (k, e) in t.external().iter().enumerate() {
            let key = (assignment[e.vertex], None, k, false);
            if !cache.contains_key(&key) {
                let c = search.chains(assignment[e.vertex], End::Open, &e.u, &external_allowed[k])?;
                cache.insert(key, c);
            }
            options.push(cache[&key].clone());
        }
        let combos = options.iter().map(Vec::len).product::<usize>();
        count += combos;
        if count > bound {
            return Err(Error::ResourceBound { count, limit: bound });
        }
        if combos > 0 {
            candidates.push((assignment, options));
        }
    }

    let mut types = Vec::new();
    let mut moduli = Vec::new();
    let mut maps = Vec::new();
    for (assignment, options) in candidates {
        let choices: Vec<Vec<Chain>> = if options.is_empty() {
            vec![Vec::new()]
        } else {
            options.iter().map(|o| o.iter().cloned()).multi_cartesian_product().collect()
        };
        for choice in choices {
            let (ty, groups) = assemble(t, &assignment, &choice)?;
            let m = build_moduli(&ty, &relints, n)?;
            if m.is_empty() {
                continue;
            }
            let mut comps: Vec<IntAffineFunc> = (0..t.vertices().len()).flat_map(|v| m.position_map(v).components()).collect();
            for g in &groups {
                let mut slope = vec![0; m.dim()];
                for &q in g {
                    slope[m.length_index(q)] = 1;
                }
                comps.push(IntAffineFunc::linear(slope));
            }
            maps.push(IntAffineMap::from_components(m.dim(), &comps)?);
            types.push(ty);
            moduli.push(m);
        }
    }
    let target = TropicalComplex::new(vec![base_poly.closure()], Vec::new())?;
    let refined = TropicalComplex::new(moduli.iter().map(|m| m.polytope.as_ref().expect("kept moduli are nonempty").closure()).collect(), Vec::new())?;
    let subdivision = Subdivision::new(target, refined, maps.iter().map(|f| (0, f.clone())).collect())?;
    Ok(InducedRefinement { complex, types, moduli, maps, subdivision })
}

/// Builds the refined type and, per original internal edge, the refined
/// internal edges making it up.
fn assemble(t: &CurveType, assignment: &[usize], choice: &[Chain]) -> Result<(CurveType, Vec<Vec<usize>>)> {
    let mut vertices = assignment.to_vec();
    let mut internal = Vec::new();
    let mut external = Vec::new();
    let mut groups = Vec::new();
    let mut thread = |from: usize, to: Option<usize>, chain: &Chain, u: &IntVec, vertices: &mut Vec<usize>| -> Vec<usize> {
        let mut ids = Vec::new();
        let mut prev = from;
        for (i, &piece) in chain.pieces.iter().enumerate() {
            let next = match chain.points.get(i) {
                Some(&x) => {
                    vertices.push(x);
                    Some(vertices.len() - 1)
                }
                None => to,
            };
            match next {
                Some(h) => {
                    ids.push(internal.len());
                    internal.push(InternalEdge { tail: prev, head: h, cell: piece, u: u.clone() });
                    prev = h;
                }
                None => external.push(ExternalEdge { vertex: prev, cell: piece, u: u.clone() }),
            }
        }
        ids
    };
    let nq = t.internal().len();
    for (q, e) in t.internal().iter().enumerate() {
        groups.push(thread(e.tail, Some(e.head), &choice[q], &e.u, &mut vertices));
    }
    for (k, e) in t.external().iter().enumerate() {
        thread(e.vertex, None, &choice[nq + k], &e.u, &mut vertices);
    }
    Ok((CurveType::new(vertices, internal, external)?, groups))
}
