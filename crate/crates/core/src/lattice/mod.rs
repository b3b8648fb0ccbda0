//! Exact integer and rational linear algebra.
//!
//! Everything else in the crate is built on the routines here: Smith normal
//! form, lattice saturation and kernels over the integers, rank and kernels
//! over the rationals, and Fourier–Motzkin feasibility for systems mixing
//! strict and non-strict inequalities.

mod field;
mod linsys;
mod matrix;
mod snf;

pub use field::{rank, rational_kernel, solve_particular, to_primitive_integer};
pub use linsys::{Constraint, LinearSystem, Relation};
pub use matrix::Matrix;
pub use snf::{cokernel_is_torsion_free, cokernel_torsion, smith_normal_form, SnfDecomposition};

use crate::scalar::ExactInt;

/// Basis (as rows) of the saturation of the lattice spanned by `generators`:
/// all integer vectors some positive multiple of which lies in the span.
///
/// `dim` is the ambient rank, needed when `generators` is empty.
pub fn saturate_lattice<T: ExactInt>(generators: &[Vec<T>], dim: usize) -> Vec<Vec<T>> {
    if generators.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(generators.to_vec());
    let snf = smith_normal_form(&m);
    let r = snf.rank();
    // U M V = D, so the rational row space of M is spanned by the first r rows
    // of V^{-1}; those rows extend to a basis of Z^n, hence span a saturated
    // sublattice.
    let vinv = snf.v.unimodular_inverse().expect("SNF transform is unimodular");
    debug_assert_eq!(vinv.cols(), dim);
    (0..r).map(|i| vinv.row(i).to_vec()).collect()
}

/// Basis (as vectors) of `{x in Z^cols : M x = 0}`. Always saturated.
pub fn integer_kernel<T: ExactInt>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// Extends a basis of a saturated sublattice to a unimodular matrix whose
/// first rows are a basis of the same sublattice. Returns the matrix `W`
/// (rows = new basis); coordinates of `x` in that basis are `x * W^{-1}`.
pub fn extend_to_unimodular<T: ExactInt>(basis: &[Vec<T>], dim: usize) -> Matrix<T> {
    if basis.is_empty() {
        return Matrix::identity(dim);
    }
    let snf = smith_normal_form(&Matrix::from_rows(basis.to_vec()));
    snf.v.unimodular_inverse().expect("SNF transform is unimodular")
}

/// Greatest common divisor of the entries (0 for the zero vector).
pub fn content<T: ExactInt>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |g, x| g.gcd(x))
}

/// Divides an integer vector by its content. The zero vector is unchanged.
pub fn primitive<T: ExactInt>(v: &[T]) -> Vec<T> {
    let g = content(v);
    if g.is_zero() {
        v.to_vec()
    } else {
        v.iter().map(|x| x.clone() / g.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice_contains(basis: &[Vec<i64>], v: &[i64]) -> bool {
        // v in Z-span of basis iff appending v does not change the SNF divisors.
        if basis.is_empty() {
            return v.iter().all(|x| *x == 0);
        }
        let a = smith_normal_form(&Matrix::from_rows(basis.to_vec())).elementary_divisors();
        let mut with = basis.to_vec();
        with.push(v.to_vec());
        let b = smith_normal_form(&Matrix::from_rows(with)).elementary_divisors();
        a == b
    }

    #[test]
    fn saturation_examples() {
        let s = saturate_lattice(&[vec![2i64, 0], vec![0, 2]], 2);
        assert_eq!(s.len(), 2);
        assert!(lattice_contains(&s, &[1, 0]) && lattice_contains(&s, &[0, 1]));

        let s = saturate_lattice(&[vec![1i64, 1]], 2);
        assert_eq!(s.len(), 1);
        assert_eq!(primitive(&s[0]).iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1]);

        let s = saturate_lattice(&[vec![2i64, 2]], 2);
        assert_eq!(s.len(), 1);
        assert!(lattice_contains(&s, &[1, 1]));
        assert!(!lattice_contains(&s, &[1, 0]));
    }

    #[test]
    fn kernel_of_sum_map() {
        let k = integer_kernel(&Matrix::from_rows(vec![vec![1i64, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0] + k[0][1], 0);
        assert_eq!(k[0][0].abs(), 1);
    }

    #[test]
    fn extension_is_unimodular_and_starts_with_basis() {
        let w = extend_to_unimodular(&[vec![1i64, 1, 0]], 3);
        assert!(w.is_unimodular());
        assert!(lattice_contains(&[w.row(0).to_vec()], &[1, 1, 0]));
    }
}
