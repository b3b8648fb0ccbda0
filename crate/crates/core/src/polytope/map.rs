use num_traits::Zero;

use super::{rat, IntAffineFunc};
use crate::error::{check_dim, Result};
use crate::{Int, IntMatrix, RatVec, Rational};

/// An integral affine map `x -> A x + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntAffineMap {
    pub matrix: IntMatrix,
    pub translation: RatVec,
}

impl IntAffineMap {
    pub fn new(matrix: IntMatrix, translation: RatVec) -> Result<Self> {
        check_dim(matrix.rows(), translation.len())?;
        Ok(IntAffineMap { matrix, translation })
    }

    pub fn linear(matrix: IntMatrix) -> Self {
        let t = vec![Rational::zero(); matrix.rows()];
        IntAffineMap { matrix, translation: t }
    }

    pub fn identity(n: usize) -> Self {
        IntAffineMap::linear(IntMatrix::identity(n))
    }

    /// Builds a map from its component functions.
    pub fn from_components(source_dim: usize, comps: &[IntAffineFunc]) -> Result<Self> {
        for c in comps {
            check_dim(source_dim, c.dim())?;
        }
        let m = IntMatrix::from_rows_with_cols(comps.iter().map(|c| c.slope.clone()).collect(), source_dim);
        Ok(IntAffineMap { matrix: m, translation: comps.iter().map(|c| c.constant.clone()).collect() })
    }

    /// Projection onto the listed coordinates.
    pub fn coordinate_projection(source_dim: usize, coords: &[usize]) -> Self {
        let m = IntMatrix::from_fn(coords.len(), source_dim, |i, j| Int::from(coords[i] == j));
        IntAffineMap::linear(m)
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    /// The `i`-th coordinate function.
    pub fn component(&self, i: usize) -> IntAffineFunc {
        IntAffineFunc::new(self.matrix.row(i).to_vec(), self.translation[i].clone())
    }

    pub fn components(&self) -> Vec<IntAffineFunc> {
        (0..self.target_dim()).map(|i| self.component(i)).collect()
    }

    pub fn apply(&self, x: &[Rational]) -> Result<RatVec> {
        check_dim(self.source_dim(), x.len())?;
        Ok((0..self.target_dim()).map(|i| self.component(i).evaluate(x)).collect())
    }

    /// `f o self`.
    pub fn pull_back(&self, f: &IntAffineFunc) -> IntAffineFunc {
        let n = self.source_dim();
        let mut slope = vec![0; n];
        let mut constant = f.constant.clone();
        for (i, a) in f.slope.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, s) in slope.iter_mut().enumerate() {
                *s += a * self.matrix.get(i, j);
            }
            constant += rat(*a) * &self.translation[i];
        }
        IntAffineFunc::new(slope, constant)
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &IntAffineMap) -> Result<IntAffineMap> {
        check_dim(self.source_dim(), inner.target_dim())?;
        let comps: Vec<IntAffineFunc> = self.components().iter().map(|f| inner.pull_back(f)).collect();
        IntAffineMap::from_components(inner.source_dim(), &comps)
    }

    /// The linear part has full column rank.
    pub fn is_injective(&self) -> bool {
        let rows: Vec<RatVec> = self.matrix.to_rows().iter().map(|r| super::rat_vec(r)).collect();
        self.target_dim() >= self.source_dim()
            && (self.source_dim() == 0 || crate::lattice::rank(&rows) == self.source_dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_pull_back() {
        // f(x) = x - 1, g(x, y) = x + 2y
        let f = IntAffineMap::new(IntMatrix::from_rows(vec![vec![1]]), vec![rat(-1)]).unwrap();
        let g = IntAffineMap::linear(IntMatrix::from_rows(vec![vec![1, 2]]));
        let h = f.compose(&g).unwrap();
        assert_eq!(h.apply(&[rat(3), rat(1)]).unwrap(), vec![rat(4)]);
        let pulled = g.pull_back(&IntAffineFunc::from_ints(&[3], 1));
        assert_eq!(pulled, IntAffineFunc::from_ints(&[3, 6], 1));
    }

    #[test]
    fn injectivity() {
        assert!(IntAffineMap::identity(2).is_injective());
        assert!(!IntAffineMap::linear(IntMatrix::from_rows(vec![vec![1, 1]])).is_injective());
    }
}
