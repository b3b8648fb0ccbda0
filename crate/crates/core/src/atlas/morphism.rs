use serde::Serialize;

use super::complex::TropicalComplex;
use super::param::{maps_agree_on, FaceParam};
use super::{face_index, Atlas};
use crate::error::{check_dim, Error, Result};
use crate::lattice::{cokernel_torsion, integer_kernel, rank, solve_particular};
use crate::monoid::{af_contains, hilbert::sign_normalize};
use crate::polytope::{rat_vec, Halfspace, IntAffineFunc, IntAffineMap, Polytope};
use crate::{Int, IntMatrix, IntVec, RatVec};

/// A map of atlases: each source chart goes to one target chart by an
/// integral affine map.
#[derive(Clone, Debug)]
pub struct AtlasMorphism {
    pub source: Atlas,
    pub target: Atlas,
    pub maps: Vec<(usize, IntAffineMap)>,
}

impl AtlasMorphism {
    /// Checks that each chart lands in its target chart and that the maps are
    /// compatible with the source gluings.
    pub fn new(source: Atlas, target: Atlas, maps: Vec<(usize, IntAffineMap)>) -> Result<Self> {
        check_dim(source.charts().len(), maps.len())?;
        for (i, (t, m)) in maps.iter().enumerate() {
            let tc = target.charts().get(*t).ok_or_else(|| Error::DanglingReference(format!("target chart {t}")))?;
            check_dim(source.charts()[i].ambient_dim(), m.source_dim())?;
            check_dim(tc.ambient_dim(), m.target_dim())?;
            if !source.charts()[i].image(m)?.is_subset_of(tc) {
                return Err(Error::Invalid(format!("chart {i} does not map into target chart {t}")));
            }
        }
        for (gi, g) in source.gluings().iter().enumerate() {
            let (ta, fa) = &maps[g.a];
            let (tb, fb) = &maps[g.b];
            let via_b = fb.compose(&g.map)?;
            let ok = if ta == tb {
                maps_agree_on(&g.face_a, &via_b, fa)?
            } else {
                let mut any = false;
                for h in target.gluings() {
                    if h.a == *ta && h.b == *tb {
                        any |= maps_agree_on(&g.face_a, &via_b, &h.map.compose(fa)?)?;
                    } else if h.a == *tb && h.b == *ta {
                        any |= maps_agree_on(&g.face_a, &h.map.compose(&via_b)?, fa)?;
                    }
                }
                any
            };
            if !ok {
                return Err(Error::InconsistentGluing(format!("chart maps disagree across source gluing {gi}")));
            }
        }
        Ok(AtlasMorphism { source, target, maps })
    }

    /// A single-chart morphism.
    pub fn single(source: Polytope, target: Polytope, map: IntAffineMap) -> Result<Self> {
        AtlasMorphism::new(Atlas::single(source), Atlas::single(target), vec![(0, map)])
    }
}

/// Outcome of the family criterion, with the reasons for failure and the
/// torsion of the cokernel on integral vectors when present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    pub is_family: bool,
    pub torsion: Vec<Int>,
    pub failures: Vec<String>,
}

/// Per chart: faces map onto faces, the map on integral vectors is onto with
/// torsion-free cokernel (so the dual monoid map is injective), and the
/// fibers are closed.
pub fn is_family(f: &AtlasMorphism) -> Result<FamilyCheck> {
    let mut failures = Vec::new();
    let mut torsion = Vec::new();
    for (i, (t, m)) in f.maps.iter().enumerate() {
        let p1 = &f.source.charts()[i];
        let p2 = &f.target.charts()[*t];
        let faces2 = p2.faces();
        for face in p1.faces() {
            if face_index(&faces2, &face.polytope.image(m)?).is_none() {
                failures.push(format!("chart {i}: a face does not map onto a face"));
                break;
            }
        }
        let d1 = p1.direction_lattice();
        let param2 = FaceParam { base: p2.witness(), dirs: p2.direction_lattice() };
        let mut cols: Vec<IntVec> = Vec::new();
        let mut integral = true;
        for d in &d1 {
            let img = rat_vec(&m.matrix.mul_vec(d));
            match param2.coords(&img) {
                Some(c) if c.iter().all(|x| x.is_integer()) => {
                    cols.push(c.iter().map(|x| num_traits::ToPrimitive::to_i64(&x.to_integer()).unwrap_or(i64::MAX)).collect())
                }
                _ => integral = false,
            }
        }
        if !integral {
            failures.push(format!("chart {i}: integral vectors do not map to integral vectors"));
            continue;
        }
        let k2 = param2.dim();
        let lattice_map = IntMatrix::from_fn(k2, d1.len(), |r, c| cols[c][r]);
        let rows: Vec<RatVec> = lattice_map.to_rows().iter().map(|r| rat_vec(r)).collect();
        if k2 > 0 && (d1.is_empty() || rank(&rows) < k2) {
            failures.push(format!("chart {i}: not surjective on integral vectors"));
        } else if k2 > 0 {
            let tors = cokernel_torsion(&lattice_map);
            if !tors.is_empty() {
                failures.push(format!("chart {i}: cokernel has torsion {tors:?}"));
                torsion.extend(tors);
            }
        }
        let complete = match p2.preimage(m)? {
            Some(pre) => match p1.closure().intersect(&pre)? {
                Some(c) => c.set_eq(p1),
                None => false,
            },
            None => false,
        };
        if !complete {
            failures.push(format!("chart {i}: fibers are not closed"));
        }
    }
    Ok(FamilyCheck { is_family: failures.is_empty(), torsion, failures })
}

/// The fiber over `t` in target chart `chart`, one cell per source chart that
/// meets it, written in integer kernel coordinates `x = x0 + K z`.
pub fn fiber(f: &AtlasMorphism, chart: usize, t: &[crate::Rational]) -> Result<TropicalComplex> {
    let target = f.target.charts().get(chart).ok_or_else(|| Error::DanglingReference(format!("target chart {chart}")))?;
    if !target.contains(t)? {
        return Err(Error::Invalid("the point is not in the target chart".into()));
    }
    let mut cells = Vec::new();
    for (i, (tc, m)) in f.maps.iter().enumerate() {
        if *tc != chart {
            continue;
        }
        let n = m.source_dim();
        let rows: Vec<RatVec> = m.matrix.to_rows().iter().map(|r| rat_vec(r)).collect();
        let rhs: RatVec = t.iter().zip(&m.translation).map(|(a, b)| a - b).collect();
        let Some(x0) = solve_particular(&rows, &rhs, n) else { continue };
        let kernel: Vec<IntVec> = integer_kernel(&m.matrix).into_iter().map(sign_normalize).collect();
        let k = kernel.len();
        let param = IntAffineMap::new(IntMatrix::from_fn(n, k, |r, c| kernel[c][r]), x0)?;
        if let Some(cell) = f.source.charts()[i].preimage(&param)? {
            cells.push(cell);
        }
    }
    TropicalComplex::new(cells, Vec::new())
}

/// `P' = {(x, t) : x in P, 0 <= t <= rho(x)}` over `P` by projection.
pub fn node_model(p: &Polytope, rho: &IntAffineFunc) -> Result<AtlasMorphism> {
    if !af_contains(p, rho)? {
        return Err(Error::Invalid("rho must be nonnegative on P".into()));
    }
    let m = p.ambient_dim();
    let mut cs: Vec<Halfspace> = p.constraints().iter().map(|h| Halfspace { func: h.func.embed(0, 1), rel: h.rel }).collect();
    let t = IntAffineFunc::coordinate(m + 1, m);
    cs.push(Halfspace::ge(t.clone()));
    cs.push(Halfspace::ge(rho.embed(0, 1).add(&t.neg())));
    let total = Polytope::new(m + 1, cs)?;
    let proj = IntAffineMap::coordinate_projection(m + 1, &(0..m).collect::<Vec<_>>());
    AtlasMorphism::single(total, p.clone(), proj)
}

/// `P x [0, inf)` over `P` by projection.
pub fn marked_point_model(p: &Polytope) -> Result<AtlasMorphism> {
    let m = p.ambient_dim();
    let total = p.product(&Polytope::orthant(1));
    let proj = IntAffineMap::coordinate_projection(m + 1, &(0..m).collect::<Vec<_>>());
    AtlasMorphism::single(total, p.clone(), proj)
}
