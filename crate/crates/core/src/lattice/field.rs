use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::ExactField;

/// Reduced row echelon form in place; returns pivot columns.
fn rref<F: ExactField>(rows: &mut Vec<Vec<F>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = F::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let v = rows[i][j].clone() - f.clone() * rows[r][j].clone();
                    rows[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a list of equal-length rows.
pub fn rank<F: ExactField>(rows: &[Vec<F>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let cols = first.len();
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

/// Basis of `{x : rows . x = 0}` over the field.
pub fn rational_kernel<F: ExactField>(rows: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `A x = b`, or `None` if the system is inconsistent.
/// Free variables are set to zero.
pub fn solve_particular<F: ExactField>(a: &[Vec<F>], b: &[F], cols: usize) -> Option<Vec<F>> {
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols + 1);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

/// Scales a rational vector by a positive factor to the primitive integer
/// vector on the same ray. The zero vector maps to zeros.
pub fn to_primitive_integer<F: ExactField>(v: &[F]) -> Vec<F::Int> {
    let l = v.iter().fold(F::Int::one(), |acc, x| acc.lcm(&x.denom_int()));
    let ints: Vec<F::Int> = v
        .iter()
        .map(|x| x.numer_int() * (l.clone() / x.denom_int()))
        .collect();
    let g = ints.iter().fold(F::Int::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / g.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn rank_and_kernel() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        assert_eq!(rank(&rows), 1);
        let k = rational_kernel(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Q = rows[0].iter().zip(v).map(|(a, b)| *a * *b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn particular_solution() {
        let a = vec![vec![q(1), q(1)]];
        let x = solve_particular(&a, &[q(3)], 2).unwrap();
        assert_eq!(x[0] + x[1], q(3));
        let a = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        assert!(solve_particular(&a, &[q(1), q(2)], 2).is_none());
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![Q::new(1, 2), Q::new(-3, 4)];
        assert_eq!(to_primitive_integer(&v), vec![2, -3]);
    }
}
