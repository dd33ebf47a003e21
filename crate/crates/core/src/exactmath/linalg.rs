use num_bigint::BigInt;
use num_traits::Signed;

use super::{IntMatrix, Rational};
use crate::error::{Error, Result};

pub type RatMatrix = Vec<Vec<Rational>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SignatureTriple {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl SignatureTriple {
    pub fn signature(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }
}

pub fn to_rational(q: &IntMatrix) -> RatMatrix {
    q.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(Rational::int).collect())
        .collect()
}

/// Row-reduce `[m | rhs]`; returns the reduced rows and pivot columns.
fn reduce(mut a: RatMatrix, cols: usize) -> (RatMatrix, Vec<usize>) {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..a[i].len() {
                    let v = &f * &a[r][j];
                    a[i][j] -= &v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (a, pivots)
}

pub fn rank(m: &RatMatrix) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    reduce(m.clone(), cols).1.len()
}

/// Exact solve of `Q b = r`; `None` when inconsistent. Free variables are set to zero.
pub fn solve_rational(q: &IntMatrix, r: &[BigInt]) -> Option<Vec<Rational>> {
    assert!(q.is_square(), "solve_rational needs a square matrix");
    assert_eq!(q.rows(), r.len(), "dimension mismatch");
    let rhs: Vec<Rational> = r.iter().cloned().map(Rational::int).collect();
    solve_rational_matrix(&to_rational(q), &rhs)
}

pub fn solve_rational_matrix(q: &RatMatrix, rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = q.len();
    let cols = q.first().map_or(0, Vec::len);
    let aug: RatMatrix = q
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut row = row.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let (red, pivots) = reduce(aug, cols);
    for row in red.iter().skip(pivots.len()).take(n - pivots.len()) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut b = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        b[c] = red[i][cols].clone();
    }
    Some(b)
}

/// Inertia by symmetric Gaussian elimination.
///
/// When every remaining diagonal entry vanishes but some `a_ij != 0`, the
/// basis vector `e_i` is replaced by `e_i + e_j`, giving diagonal `2 a_ij`.
pub fn signature_congruence(a: &RatMatrix) -> Result<SignatureTriple> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::NotSymmetric);
    }
    for i in 0..n {
        for j in 0..i {
            if a[i][j] != a[j][i] {
                return Err(Error::NotSymmetric);
            }
        }
    }
    let mut m = a.clone();
    let mut out = SignatureTriple::default();
    while !m.is_empty() {
        let k = m.len();
        if let Some(p) = (0..k).find(|&i| !m[i][i].is_zero()) {
            let d = m[p][p].clone();
            if d.is_positive() {
                out.n_plus += 1;
            } else {
                out.n_minus += 1;
            }
            let mut next = Vec::with_capacity(k - 1);
            for i in (0..k).filter(|&i| i != p) {
                let f = &m[i][p] / &d;
                let row: Vec<Rational> = (0..k)
                    .filter(|&j| j != p)
                    .map(|j| &m[i][j] - &(&f * &m[p][j]))
                    .collect();
                next.push(row);
            }
            m = next;
            continue;
        }
        let pair = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .find(|&(i, j)| !m[i][j].is_zero());
        let Some((i, j)) = pair else {
            out.n_zero += k;
            break;
        };
        for c in 0..k {
            let v = m[j][c].clone();
            m[i][c] += &v;
        }
        for row in m.iter_mut() {
            let v = row[j].clone();
            row[i] += &v;
        }
    }
    Ok(out)
}

/// Inertia of a generalized linking matrix via its column-rescaled
/// symmetric form `A_ij = Q_ij / q_j`.
pub fn signature_generalized(q: &IntMatrix, denoms: &[BigInt]) -> Result<SignatureTriple> {
    signature_congruence(&rescale(q, denoms)?)
}

/// `A_ij = Q_ij / q_j`, checked symmetric.
pub fn rescale(q: &IntMatrix, denoms: &[BigInt]) -> Result<RatMatrix> {
    if !q.is_square() || q.rows() != denoms.len() {
        return Err(Error::MalformedQ("dimension mismatch".into()));
    }
    if denoms.iter().any(|d| !d.is_positive()) {
        return Err(Error::MalformedQ("denominators must be positive".into()));
    }
    let n = q.rows();
    let a: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rational::new(q[(i, j)].clone(), denoms[j].clone()))
                .collect()
        })
        .collect();
    for i in 0..n {
        for j in 0..i {
            if a[i][j] != a[j][i] {
                return Err(Error::MalformedQ(format!(
                    "rescaled entries ({i},{j}) differ"
                )));
            }
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::q as rat;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn sym(rows: &[Vec<i64>]) -> RatMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::int(x)).collect())
            .collect()
    }

    #[test]
    fn solve_cancellation_matrix() {
        let t = -4;
        let q = IntMatrix::from_rows(&[vec![1 + t, t], vec![t, -1 + t]]);
        assert_eq!(
            solve_rational(&q, &ints(&[1, 1])).unwrap(),
            vec![rat(1, 1), rat(-1, 1)]
        );
    }

    #[test]
    fn solve_trivial_cases() {
        let q = IntMatrix::from_rows(&[vec![-7]]);
        assert_eq!(solve_rational(&q, &ints(&[3])).unwrap(), vec![rat(-3, 7)]);
        let z = IntMatrix::from_rows(&[vec![0]]);
        assert!(solve_rational(&z, &ints(&[1])).is_none());
        assert_eq!(solve_rational(&z, &ints(&[0])).unwrap(), vec![rat(0, 1)]);
    }

    #[test]
    fn congruence_basics() {
        let t = signature_congruence(&sym(&[vec![2, 0], vec![0, -3]])).unwrap();
        assert_eq!((t.n_plus, t.n_minus, t.n_zero), (1, 1, 0));
        let h = signature_congruence(&sym(&[vec![0, 1], vec![1, 0]])).unwrap();
        assert_eq!((h.n_plus, h.n_minus, h.n_zero), (1, 1, 0));
        let z = signature_congruence(&sym(&[vec![0, 0], vec![0, 0]])).unwrap();
        assert_eq!(z.n_zero, 2);
        assert!(signature_congruence(&sym(&[vec![0, 1], vec![2, 0]])).is_err());
    }

    #[test]
    fn cancellation_pair_signature_zero() {
        for t in -6..=3 {
            let q = IntMatrix::from_rows(&[vec![1 + t, t], vec![t, -1 + t]]);
            assert_eq!(
                signature_generalized(&q, &ints(&[1, 1]))
                    .unwrap()
                    .signature(),
                0
            );
        }
    }

    #[test]
    fn generalized_rejects_bad_input() {
        let q = IntMatrix::from_rows(&[vec![1, 2], vec![3, 1]]);
        assert!(signature_generalized(&q, &ints(&[1, 1])).is_err());
        let q = IntMatrix::from_rows(&[vec![1]]);
        assert!(signature_generalized(&q, &ints(&[0])).is_err());
    }

    #[test]
    fn thm_1_1_matrix_is_negative_definite() {
        let q11 = IntMatrix::from_rows(&[vec![-5, -24, -6], vec![-6, -29, -7], vec![-6, -28, -9]]);
        let s = signature_generalized(&q11, &ints(&[1, 4, 1])).unwrap();
        assert_eq!((s.n_plus, s.n_minus, s.n_zero), (0, 3, 0));
    }

    #[test]
    fn thm_1_3_matrix_signature() {
        // t = -3, q = (1, 2, 1): chain K(+1), K_1(-1/2), K_{1,1}(-1) on tb = t.
        let t = -3i64;
        let q = IntMatrix::from_rows(&[
            vec![1 + t, 2 * t, t],
            vec![t, 2 * (t - 1) - 1, t - 1],
            vec![t, 2 * (t - 1), t - 3],
        ]);
        assert_eq!(
            signature_generalized(&q, &ints(&[1, 2, 1]))
                .unwrap()
                .signature(),
            -1
        );
    }
}
