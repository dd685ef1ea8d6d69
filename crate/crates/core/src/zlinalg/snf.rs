//! Smith normal form with unimodular transforms.
//!
//! Pivoting picks the entry of smallest absolute value in the active
//! submatrix, clears its row and column by Euclidean reduction, and repairs
//! the divisibility chain by folding offending rows into the pivot row.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Result of [`smith_normal_form`]: `u * m * v == s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_rank`, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut rank = 0;

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_pivot(&a, t) else {
                return finish(u, a, v, rank);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            for i in t + 1..rows {
                if !a[(i, t)].is_zero() {
                    let q = -a[(i, t)].div_floor(&pivot);
                    a.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !a[(t, j)].is_zero() {
                    let q = -a[(t, j)].div_floor(&pivot);
                    a.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                }
            }
            let dirty = (t + 1..rows).any(|i| !a[(i, t)].is_zero())
                || (t + 1..cols).any(|j| !a[(t, j)].is_zero());
            if dirty {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        rank += 1;
    }
    finish(u, a, v, rank)
}

fn finish(u: IntMatrix, s: IntMatrix, v: IntMatrix, rank: usize) -> Smith {
    Smith { u, s, v, rank }
}

fn smallest_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Integer basis of `{ x : m x = 0 }`, returned as columns.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let cols = m.cols();
    snf.v.slice(0..cols, snf.rank..cols)
}

/// Solves `m x = b` over the integers, if a solution exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    IntegerSolver::new(m).solve(b)
}

/// A Smith form kept around to solve `m x = b` for many right-hand sides.
#[derive(Clone, Debug)]
pub struct IntegerSolver {
    snf: Smith,
    cols: usize,
}

impl IntegerSolver {
    pub fn new(m: &IntMatrix) -> Self {
        IntegerSolver {
            snf: smith_normal_form(m),
            cols: m.cols(),
        }
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let snf = &self.snf;
        assert_eq!(b.len(), snf.u.cols());
        let ub = snf.u.mul_vec(b);
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, c) in ub.iter().enumerate() {
            if i < snf.rank {
                let d = &snf.s[(i, i)];
                let (q, r) = c.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(snf.v.mul_vec(&y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let snf = smith_normal_form(m);
        assert_eq!(&(&snf.u * m) * &snf.v, snf.s);
        assert!(snf.u.is_unimodular());
        assert!(snf.v.is_unimodular());
        snf
    }

    #[test]
    fn identity_is_fixed() {
        let i = IntMatrix::identity(3);
        let snf = check(&i);
        assert_eq!(snf.s, i);
        assert_eq!(snf.u, i);
        assert_eq!(snf.v, i);
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2, |det| = 8, so d2 = 4.
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let snf = check(&m);
        assert_eq!(snf.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_matrix() {
        let m = IntMatrix::zeros(2, 3);
        let snf = check(&m);
        assert!(snf.s.is_zero());
        assert_eq!(snf.rank, 0);
    }

    #[test]
    fn kernel_and_solve() {
        let m = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 2, 2]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!((&m * &k).is_zero());
        let x = solve_integer(&m, &[BigInt::from(1), BigInt::from(4)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![BigInt::from(1), BigInt::from(4)]);
        assert!(solve_integer(&m, &[BigInt::from(0), BigInt::from(1)]).is_none());
    }
}
