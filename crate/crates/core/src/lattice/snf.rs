use super::Matrix;
use crate::scalar::ExactInt;

/// `D = U * M * V` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: ExactInt> SnfDecomposition<T> {
    /// Diagonal entries of `D` (all of them, zeros included).
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Nonzero diagonal entries.
    pub fn elementary_divisors(&self) -> Vec<T> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

/// Smith normal form by repeated smallest-pivot elimination.
///
/// The pivot is the nonzero entry of least absolute value in the trailing
/// submatrix, ties broken in row-major order, so the result is deterministic.
pub fn smith_normal_form<T: ExactInt>(m: &Matrix<T>) -> SnfDecomposition<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| x.abs() < d.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = d.get(i, t).clone() / p.clone();
                if !q.is_zero() {
                    let f = -q;
                    d.add_row_multiple(i, t, &f);
                    u.add_row_multiple(i, t, &f);
                }
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = d.get(t, j).clone() / p.clone();
                if !q.is_zero() {
                    let f = -q;
                    d.add_col_multiple(j, t, &f);
                    v.add_col_multiple(j, t, &f);
                }
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // d_t must divide every remaining entry.
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(d.get(i, j).clone() % p.clone()).is_zero())
            });
            match offender {
                Some(i) => {
                    let one = T::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish<T: ExactInt>(u: Matrix<T>, d: Matrix<T>, v: Matrix<T>) -> SnfDecomposition<T> {
    SnfDecomposition { u, d, v }
}

/// True iff every nonzero elementary divisor of `m` is 1, i.e. the cokernel
/// `Z^rows / im(m)` has no torsion.
pub fn cokernel_is_torsion_free<T: ExactInt>(m: &Matrix<T>) -> bool {
    smith_normal_form(m).elementary_divisors().iter().all(|x| x.is_one())
}

/// Torsion part of the cokernel as a list of cyclic orders (each > 1).
pub fn cokernel_torsion<T: ExactInt>(m: &Matrix<T>) -> Vec<T> {
    smith_normal_form(m)
        .elementary_divisors()
        .into_iter()
        .filter(|x| !x.is_one())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(rows)
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let snf = smith_normal_form(&m(vec![vec![2, 0], vec![0, 3]]));
        assert_eq!(snf.diagonal(), vec![1, 6]);
        assert_eq!(&(&snf.u * &m(vec![vec![2, 0], vec![0, 3]])) * &snf.v, snf.d);
    }

    #[test]
    fn identity_is_fixed() {
        let snf = smith_normal_form(&Matrix::<i64>::identity(3));
        assert_eq!(snf.d, Matrix::identity(3));
    }

    #[test]
    fn two_four_six_eight() {
        let a = m(vec![vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![2, 4]);
        assert!(snf.u.is_unimodular() && snf.v.is_unimodular());
    }

    #[test]
    fn torsion_examples() {
        assert!(cokernel_is_torsion_free(&Matrix::<i64>::identity(2)));
        assert!(!cokernel_is_torsion_free(&m(vec![vec![2]])));
        assert_eq!(cokernel_torsion(&m(vec![vec![2]])), vec![2]);
        // Column (1,1): a rank-one map Z -> Z^2 with free cokernel.
        assert!(cokernel_is_torsion_free(&m(vec![vec![1], vec![1]])));
    }

    #[test]
    fn rectangular_and_zero() {
        let snf = smith_normal_form(&Matrix::<i64>::zeros(2, 3));
        assert_eq!(snf.rank(), 0);
        let a = m(vec![vec![4, 6, 2]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![2]);
        assert_eq!(&(&snf.u * &a) * &snf.v, snf.d);
    }

    #[test]
    fn works_over_bigint() {
        use num_bigint::BigInt;
        let a = Matrix::from_rows(vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(6), BigInt::from(8)],
        ]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }
}
