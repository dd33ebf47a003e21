use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `S`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }
}

/// Smith normal form with `U·A·V = S`.
///
/// Pivot: smallest nonzero absolute value in the active block, ties broken
/// in row-major order.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for k in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_pivot(&s, k) else {
                return finish(u, s, v);
            };
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
            s.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let mut dirty = false;
            for i in k + 1..m {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let f = -(&s[(i, k)] / &s[(k, k)]);
                s.add_row(i, k, &f);
                u.add_row(i, k, &f);
                dirty |= !s[(i, k)].is_zero();
            }
            for j in k + 1..n {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let f = -(&s[(k, j)] / &s[(k, k)]);
                s.add_col(j, k, &f);
                v.add_col(j, k, &f);
                dirty |= !s[(k, j)].is_zero();
            }
            if dirty {
                continue;
            }

            let p = s[(k, k)].clone();
            let bad = (k + 1..m).find(|&i| (k + 1..n).any(|j| !s[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::from(1);
                    s.add_row(k, i, &one);
                    u.add_row(k, i, &one);
                }
                None => break,
            }
        }
        if s[(k, k)].is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
    }
    finish(u, s, v)
}

fn finish(u: IntMatrix, s: IntMatrix, v: IntMatrix) -> SnfResult {
    SnfResult { u, s, v }
}

fn smallest_pivot(s: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..s.rows() {
        for j in k..s.cols() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => x.abs() < s[(bi, bj)].abs(),
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SnfResult {
        let r = snf(a);
        assert_eq!(r.u.mul(a).mul(&r.v), r.s);
        assert_eq!(r.u.det().abs(), BigInt::from(1));
        assert_eq!(r.v.det().abs(), BigInt::from(1));
        let d = r.diagonal();
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]) || w[0].is_zero() && w[1].is_zero());
        }
        assert!(d.iter().all(|x| !x.is_negative()));
        r
    }

    #[test]
    fn one_by_one() {
        let r = check(&IntMatrix::from_rows(&[vec![-7]]));
        assert_eq!(r.diagonal(), vec![BigInt::from(7)]);
    }

    #[test]
    fn identity_is_fixed() {
        let i = IntMatrix::identity(2);
        let r = check(&i);
        assert_eq!(r.s, i);
        assert_eq!(r.u, i);
        assert_eq!(r.v, i);
    }

    #[test]
    fn homology_sphere_matrix() {
        let a = IntMatrix::from_rows(&[vec![-5, -24, -6], vec![-6, -29, -7], vec![-6, -28, -9]]);
        let r = check(&a);
        assert_eq!(r.diagonal(), vec![BigInt::from(1); 3]);
    }

    #[test]
    fn divisibility_fix_up() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(check(&a).diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        let b = IntMatrix::from_rows(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 0]]);
        assert_eq!(
            check(&b).diagonal(),
            vec![BigInt::from(2), BigInt::from(12), BigInt::from(0)]
        );
    }

    #[test]
    fn rectangular_and_zero() {
        check(&IntMatrix::from_rows(&[vec![2, 4, 6], vec![1, 1, 1]]));
        let z = check(&IntMatrix::zeros(2, 3));
        assert_eq!(z.diagonal(), vec![BigInt::from(0); 2]);
    }
}
