use crate::error::{Error, Result};
use crate::lattice::{extend_to_unimodular, primitive};
use crate::polytope::{cone_from_rays, cone_rays, dot, Halfspace, IntAffineFunc, Polytope};
use crate::{Int, IntVec};

/// Largest ambient dimension accepted by the enumeration.
pub const MAX_HILBERT_DIM: usize = 4;
/// Largest number of box points the enumeration will visit.
pub const MAX_HILBERT_CANDIDATES: usize = 2_000_000;

/// Hilbert basis of the lattice points of a closed cone. `units` is a lattice
/// basis of the unit group (the lattice points of the lineality space);
/// `generators` are irreducible modulo units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertBasis {
    pub generators: Vec<IntVec>,
    pub units: Vec<IntVec>,
}

/// Result of [`dual_hilbert_basis`]. `lineality` is a basis of the lattice
/// points of the lineality space of the input cone; these directions are
/// annihilated by every element of the dual monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBasis {
    pub generators: Vec<IntVec>,
    pub units: Vec<IntVec>,
    pub lineality: Vec<IntVec>,
}

/// Flips sign so the first nonzero entry is positive.
pub(crate) fn sign_normalize(v: IntVec) -> IntVec {
    match v.iter().find(|x| **x != 0) {
        Some(x) if *x < 0 => v.iter().map(|y| -y).collect(),
        _ => v,
    }
}

/// Hilbert basis of `C ∩ Z^n` for the closed cone `C = {slope . x >= 0}` given
/// by the constraints of `cone` (constants are ignored).
pub fn hilbert_basis(cone: &Polytope) -> Result<HilbertBasis> {
    let n = cone.ambient_dim();
    if n > MAX_HILBERT_DIM {
        return Err(Error::DimensionBound { found: n, bound: MAX_HILBERT_DIM });
    }
    let gens = cone_rays(cone);
    let units: Vec<IntVec> = gens.lineality.iter().cloned().map(sign_normalize).collect();
    let k = units.len();
    let w = extend_to_unimodular(&units, n);
    let slopes: Vec<IntVec> = cone.constraints().iter().map(|h| h.func.slope.clone()).collect();
    // Constraints on quotient coordinates c' where x = sum_j c'_j W_{k+j}.
    let rows: Vec<IntVec> = slopes.iter().map(|s| (k..n).map(|j| dot(s, w.row(j))).collect()).collect();
    let m = n - k;
    let quotient = Polytope::new(m, rows.iter().map(|r| Halfspace::ge(IntAffineFunc::linear(r.clone()))).collect())?;
    let rays = cone_rays(&quotient);
    debug_assert!(rays.lineality.is_empty());
    let in_cone = |c: &[Int]| rows.iter().all(|r| dot(r, c) >= 0);
    let points = enumerate_box(&rays.rays, m, in_cone)?;
    let generators = irreducibles(&points, &in_cone)
        .into_iter()
        .map(|c| (0..n).map(|i| (0..m).map(|j| c[j] * w.get(k + j, i)).sum()).collect())
        .collect();
    Ok(HilbertBasis { generators, units })
}

/// Nonzero lattice points of the cone inside the bounding box of the zonotope
/// spanned by the extreme rays.
fn enumerate_box(rays: &[IntVec], m: usize, in_cone: impl Fn(&[Int]) -> bool) -> Result<Vec<IntVec>> {
    let lo: Vec<Int> = (0..m).map(|i| rays.iter().map(|r| r[i].min(0)).sum()).collect();
    let hi: Vec<Int> = (0..m).map(|i| rays.iter().map(|r| r[i].max(0)).sum()).collect();
    let count = lo
        .iter()
        .zip(&hi)
        .try_fold(1usize, |acc, (l, h)| acc.checked_mul((h - l + 1) as usize))
        .unwrap_or(usize::MAX);
    if count > MAX_HILBERT_CANDIDATES {
        return Err(Error::ResourceBound { count, limit: MAX_HILBERT_CANDIDATES });
    }
    let mut out = Vec::new();
    if m == 0 {
        return Ok(out);
    }
    let mut cur = lo.clone();
    loop {
        if cur.iter().any(|x| *x != 0) && in_cone(&cur) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == m {
                return Ok(out);
            }
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
            i += 1;
        }
    }
}

/// Elements of `points` that are not `y + z` with `y` in `points` and `z` a
/// nonzero cone point. Sorted.
fn irreducibles(points: &[IntVec], in_cone: &impl Fn(&[Int]) -> bool) -> Vec<IntVec> {
    let mut out: Vec<IntVec> = points
        .iter()
        .filter(|x| {
            !points.iter().any(|y| {
                if y == *x {
                    return false;
                }
                let z: IntVec = x.iter().zip(y).map(|(a, b)| a - b).collect();
                in_cone(&z)
            })
        })
        .cloned()
        .collect();
    out.sort();
    out
}

/// Minimal generating set of the monoid of integral linear functions that are
/// nonnegative on `p`, where the closure of `p` is a cone. A cone with apex
/// away from the origin is treated through its recession cone.
pub fn dual_hilbert_basis(p: &Polytope) -> Result<DualBasis> {
    let n = p.ambient_dim();
    if n > MAX_HILBERT_DIM {
        return Err(Error::DimensionBound { found: n, bound: MAX_HILBERT_DIM });
    }
    if !p.closure().is_cone() {
        return Err(Error::NotACone("the closure has no apex".into()));
    }
    let slopes: Vec<IntVec> = p.constraints().iter().map(|h| primitive(&h.func.slope)).collect();
    let dual = cone_from_rays(&slopes, n)?;
    let hb = hilbert_basis(&dual)?;
    let lineality = p.lineality_basis().into_iter().map(sign_normalize).collect();
    Ok(DualBasis { generators: hb.generators, units: hb.units, lineality })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ge(slope: &[Int]) -> Halfspace {
        Halfspace::ge(IntAffineFunc::linear(slope.to_vec()))
    }

    #[test]
    fn quadrant() {
        let d = dual_hilbert_basis(&Polytope::orthant(2)).unwrap();
        assert_eq!(d.generators, vec![vec![0, 1], vec![1, 0]]);
        assert!(d.units.is_empty() && d.lineality.is_empty());
    }

    #[test]
    fn slanted_cone() {
        let c = cone_from_rays(&[vec![1, 0], vec![1, 2]], 2).unwrap();
        let d = dual_hilbert_basis(&c).unwrap();
        assert_eq!(d.generators, vec![vec![0, 1], vec![1, 0], vec![2, -1]]);
    }

    #[test]
    fn half_plane_reports_lineality() {
        let p = Polytope::new(2, vec![ge(&[0, 1])]).unwrap();
        let d = dual_hilbert_basis(&p).unwrap();
        assert_eq!(d.generators, vec![vec![0, 1]]);
        assert!(d.units.is_empty());
        assert_eq!(d.lineality, vec![vec![1, 0]]);
    }

    #[test]
    fn ray_in_plane_has_dual_units() {
        let c = cone_from_rays(&[vec![1, 1]], 2).unwrap();
        let d = dual_hilbert_basis(&c).unwrap();
        assert_eq!(d.units.len(), 1);
        assert_eq!(d.units[0][0] + d.units[0][1], 0);
        assert_eq!(d.generators.len(), 1);
        assert_eq!(d.generators[0][0] + d.generators[0][1], 1);
    }

    #[test]
    fn rejects_high_dimension_and_non_cones() {
        assert!(matches!(dual_hilbert_basis(&Polytope::orthant(5)), Err(Error::DimensionBound { .. })));
        assert!(matches!(dual_hilbert_basis(&Polytope::standard_simplex(2)), Err(Error::NotACone(_))));
    }

    #[test]
    fn cone_hilbert_basis_of_nonnormal_generators() {
        // cone{(1,0),(1,3)}: Hilbert basis (1,0),(1,1),(1,2),(1,3).
        let c = cone_from_rays(&[vec![1, 0], vec![1, 3]], 2).unwrap();
        let hb = hilbert_basis(&c).unwrap();
        assert_eq!(hb.generators, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]]);
    }
}
