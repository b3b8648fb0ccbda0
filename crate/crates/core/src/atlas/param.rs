//! Affine parametrizations of faces and the rational affine maps they induce
//! between identified faces.

use num_traits::{One, Zero};

use crate::lattice::{rational_kernel, solve_particular};
use crate::polytope::{rat_vec, IntAffineMap, Polytope};
use crate::{IntVec, RatVec, Rational};

/// `z -> base + dirs^T z`, with `dirs` a basis of the direction lattice.
#[derive(Clone, Debug)]
pub(crate) struct FaceParam {
    pub base: RatVec,
    pub dirs: Vec<IntVec>,
}

impl FaceParam {
    pub fn of(p: &Polytope) -> FaceParam {
        FaceParam { base: p.witness(), dirs: p.direction_lattice() }
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn point(&self, z: &[Rational]) -> RatVec {
        let mut x = self.base.clone();
        for (d, zi) in self.dirs.iter().zip(z) {
            for (xj, dj) in x.iter_mut().zip(d) {
                *xj += zi * Rational::from_integer((*dj).into());
            }
        }
        x
    }

    /// Coordinates of a vector `v` in the direction basis, if it lies in the span.
    pub fn coords(&self, v: &[Rational]) -> Option<RatVec> {
        let n = v.len();
        let rows: Vec<RatVec> = (0..n).map(|j| self.dirs.iter().map(|d| Rational::from_integer(d[j].into())).collect()).collect();
        solve_particular(&rows, v, self.dim())
    }
}

/// `z -> m z + c` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RatAffine {
    pub m: Vec<RatVec>,
    pub c: RatVec,
}

impl RatAffine {
    pub fn identity(k: usize) -> Self {
        let m = (0..k).map(|i| (0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        RatAffine { m, c: vec![Rational::zero(); k] }
    }

    pub fn apply(&self, z: &[Rational]) -> RatVec {
        self.m
            .iter()
            .zip(&self.c)
            .map(|(row, ci)| row.iter().zip(z).fold(ci.clone(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// `self o inner`.
    pub fn after(&self, inner: &RatAffine) -> RatAffine {
        let k = inner.m.first().map_or(0, |r| r.len());
        let m = self
            .m
            .iter()
            .map(|row| (0..k).map(|j| row.iter().zip(&inner.m).map(|(a, r)| a * &r[j]).sum()).collect())
            .collect();
        let c = self.apply(&inner.c);
        RatAffine { m, c }
    }

    pub fn inverse(&self) -> Option<RatAffine> {
        let k = self.m.len();
        let mut cols = Vec::with_capacity(k);
        for j in 0..k {
            let e: RatVec = (0..k).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
            cols.push(solve_particular(&self.m, &e, k)?);
        }
        if !rational_kernel(&self.m, k).is_empty() {
            return None;
        }
        let m: Vec<RatVec> = (0..k).map(|i| (0..k).map(|j| cols[j][i].clone()).collect()).collect();
        let neg_c: RatVec = self.c.iter().map(|x| -x).collect();
        let c = RatAffine { m: m.clone(), c: vec![Rational::zero(); k] }.apply(&neg_c);
        Some(RatAffine { m, c })
    }

    /// Integer matrix with determinant +-1.
    pub fn is_lattice_iso(&self) -> bool {
        if !self.m.iter().flatten().all(|x| x.is_integer()) {
            return false;
        }
        let ints: Vec<IntVec> = self
            .m
            .iter()
            .map(|r| r.iter().map(|x| num_traits::ToPrimitive::to_i64(&x.to_integer()).unwrap_or(i64::MAX)).collect())
            .collect();
        if ints.is_empty() {
            return true;
        }
        crate::IntMatrix::from_rows(ints).is_unimodular()
    }
}

/// The map `g` restricted to the faces, in their parameters; `None` if `g`
/// does not carry the affine hull of `a` into that of `b`, or changes dimension.
pub(crate) fn transport(a: &FaceParam, g: &IntAffineMap, b: &FaceParam) -> Option<RatAffine> {
    if a.dim() != b.dim() {
        return None;
    }
    let k = a.dim();
    let gx0 = g.apply(&a.base).ok()?;
    let diff: RatVec = gx0.iter().zip(&b.base).map(|(x, y)| x - y).collect();
    let c = b.coords(&diff)?;
    let mut cols = Vec::with_capacity(k);
    for d in &a.dirs {
        let img = g.matrix.mul_vec(d);
        cols.push(b.coords(&rat_vec(&img))?);
    }
    let m = (0..k).map(|i| (0..k).map(|j| cols[j][i].clone()).collect()).collect();
    Some(RatAffine { m, c })
}

/// Do two affine maps agree on the affine hull of `p`?
pub(crate) fn maps_agree_on(p: &Polytope, f: &IntAffineMap, g: &IntAffineMap) -> crate::error::Result<bool> {
    let param = FaceParam::of(p);
    let mut probes = vec![param.base.clone()];
    for i in 0..param.dim() {
        let mut z = vec![Rational::zero(); param.dim()];
        z[i] = Rational::one();
        probes.push(param.point(&z));
    }
    for x in probes {
        if f.apply(&x)? != g.apply(&x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::rat;
    use crate::IntMatrix;

    #[test]
    fn transport_between_rays() {
        let ray = Polytope::orthant(1);
        let pa = FaceParam::of(&ray);
        let flip = IntAffineMap::new(IntMatrix::from_rows(vec![vec![-1]]), vec![rat(0)]).unwrap();
        let t = transport(&pa, &flip, &pa).unwrap();
        assert!(t.is_lattice_iso());
        assert_eq!(t.after(&t), RatAffine::identity(1));
        assert_eq!(t.inverse().unwrap(), t);
        let double = IntAffineMap::linear(IntMatrix::from_rows(vec![vec![2]]));
        assert!(!transport(&pa, &double, &pa).unwrap().is_lattice_iso());
    }
}
