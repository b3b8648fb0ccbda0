use std::collections::BTreeSet;

use itertools::Itertools;

use super::{dot, rat_vec, Halfspace, IntAffineFunc, Polytope};
use crate::error::{Error, Result};
use crate::lattice::{integer_kernel, rank, primitive};
use crate::{IntMatrix, IntVec};

/// Generators of a closed polyhedral cone: an integer basis of its lineality
/// space plus primitive extreme rays of its intersection with the orthogonal
/// complement of the lineality space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeGenerators {
    pub lineality: Vec<IntVec>,
    pub rays: Vec<IntVec>,
}

/// Rays of the closed cone `{slope . x >= 0}` over the constraints of `p`.
/// Constants of `p` are ignored, so this is the recession cone of its closure.
pub fn cone_rays(p: &Polytope) -> ConeGenerators {
    let n = p.ambient_dim();
    let slopes: Vec<IntVec> = p.constraints().iter().map(|h| h.func.slope.clone()).collect();
    let lineality = integer_kernel(&IntMatrix::from_rows_with_cols(slopes.clone(), n));
    let rows_rank = |rows: &[IntVec]| rank(&rows.iter().map(|r| rat_vec(r)).collect::<Vec<_>>());
    let e_rank = rows_rank(&lineality);
    let mut rays = BTreeSet::new();
    if n > e_rank {
        let k = n - 1 - e_rank;
        for subset in (0..slopes.len()).combinations(k) {
            let mut rows = lineality.clone();
            rows.extend(subset.iter().map(|&i| slopes[i].clone()));
            if rows_rank(&rows) != n - 1 {
                continue;
            }
            let ker = integer_kernel(&IntMatrix::from_rows_with_cols(rows, n));
            let v = primitive(&ker[0]);
            for cand in [v.clone(), v.iter().map(|x| -x).collect::<IntVec>()] {
                if slopes.iter().all(|s| dot(s, &cand) >= 0) {
                    rays.insert(cand);
                }
            }
        }
    }
    ConeGenerators { lineality, rays: rays.into_iter().collect() }
}

/// The closed cone `{sum l_i r_i : l_i >= 0}` spanned by integer rays.
pub fn cone_from_rays(rays: &[IntVec], dim: usize) -> Result<Polytope> {
    if rays.iter().any(|r| r.len() != dim) {
        return Err(Error::Invalid("ray of the wrong length".into()));
    }
    let eqs = if rays.is_empty() {
        (0..dim).map(|i| { let mut v = vec![0; dim]; v[i] = 1; v }).collect()
    } else {
        integer_kernel(&IntMatrix::from_rows_with_cols(rays.to_vec(), dim))
    };
    let d = dim - eqs.len();
    let mut cs: Vec<Halfspace> = Vec::new();
    for w in &eqs {
        cs.push(Halfspace::ge(IntAffineFunc::linear(w.clone())));
        cs.push(Halfspace::ge(IntAffineFunc::linear(w.iter().map(|x| -x).collect())));
    }
    let mut normals = BTreeSet::new();
    if d > 0 {
        for subset in (0..rays.len()).combinations(d - 1) {
            let mut rows = eqs.clone();
            rows.extend(subset.iter().map(|&i| rays[i].clone()));
            let ker = integer_kernel(&IntMatrix::from_rows_with_cols(rows, dim));
            if ker.len() != 1 {
                continue;
            }
            let h = primitive(&ker[0]);
            let vals: Vec<_> = rays.iter().map(|r| dot(&h, r)).collect();
            if vals.iter().all(|v| *v >= 0) && vals.iter().any(|v| *v > 0) {
                normals.insert(h);
            } else if vals.iter().all(|v| *v <= 0) && vals.iter().any(|v| *v < 0) {
                normals.insert(h.iter().map(|x| -x).collect());
            }
        }
    }
    cs.extend(normals.into_iter().map(|h| Halfspace::ge(IntAffineFunc::linear(h))));
    Polytope::new(dim, cs)
}
