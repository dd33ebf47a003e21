//! Independent reference computations used by the acceptance criteria.

use num_bigint::BigInt;

use crate::exactmath::{RatMatrix, Rational, SignatureTriple};

/// Polynomial with rational coefficients, lowest degree first.
type Poly = Vec<Rational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
    p
}

fn derivative(p: &[Rational]) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as i64)
            .collect(),
    )
}

fn rem(a: &[Rational], b: &[Rational]) -> Poly {
    let mut r = trim(a.to_vec());
    let lead = b.last().expect("division by the zero polynomial").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            let v = &f * c;
            r[shift + i] -= &v;
        }
        r = trim(r);
    }
    r
}

fn gcd(a: &[Rational], b: &[Rational]) -> Poly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn sign_at_zero(p: &[Rational]) -> i32 {
    p.first().map_or(0, Rational::signum)
}

fn sign_at_infinity(p: &[Rational], negative: bool) -> i32 {
    let s = p.last().map_or(0, Rational::signum);
    if negative && (p.len() - 1) % 2 == 1 {
        -s
    } else {
        s
    }
}

fn changes(signs: impl Iterator<Item = i32>) -> usize {
    let v: Vec<i32> = signs.filter(|&s| s != 0).collect();
    v.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct roots in `(0, ∞)` and `(-∞, 0)` of a polynomial with `p(0) ≠ 0`.
fn sturm_counts(p: &[Rational]) -> (usize, usize) {
    let mut seq = vec![trim(p.to_vec()), derivative(p)];
    while !seq.last().unwrap().is_empty() {
        let n = seq.len();
        let r: Poly = rem(&seq[n - 2], &seq[n - 1])
            .into_iter()
            .map(|c| -c)
            .collect();
        seq.push(r);
    }
    seq.pop();
    let at0 = changes(seq.iter().map(|s| sign_at_zero(s)));
    let pos_inf = changes(seq.iter().map(|s| sign_at_infinity(s, false)));
    let neg_inf = changes(seq.iter().map(|s| sign_at_infinity(s, true)));
    (at0 - pos_inf, neg_inf - at0)
}

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier.
pub fn charpoly(a: &RatMatrix) -> Vec<Rational> {
    let n = a.len();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut m: RatMatrix = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let am = mul(a, &m);
        let tr = (0..n).fold(Rational::zero(), |acc, i| acc + &am[i][i]);
        c[n - k] = -tr / Rational::int(k as i64);
    }
    c
}

fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Inertia of a symmetric rational matrix from Sturm sequences of its
/// characteristic polynomial, counting multiplicities through the chain
/// `p, gcd(p, p'), ...`.
pub fn sturm_inertia(a: &RatMatrix) -> SignatureTriple {
    let mut p = trim(charpoly(a));
    let zero = p.iter().take_while(|c| c.is_zero()).count();
    p.drain(..zero);
    let (mut plus, mut minus) = (0, 0);
    while p.len() > 1 {
        let (pp, mm) = sturm_counts(&p);
        plus += pp;
        minus += mm;
        p = gcd(&p, &derivative(&p));
    }
    SignatureTriple {
        n_plus: plus,
        n_minus: minus,
        n_zero: zero,
    }
}

/// Rational tb of a Legendrian meridian in `U(p/q)`, recomputed from the
/// Seifert framing of the surgery torus.
pub fn meridian_tb_oracle(r: &Rational, t: i64) -> Rational {
    let p = r.numer().clone();
    let q = r.denom().clone();
    let top: BigInt = &p + &q * t;
    Rational::int(-1) - Rational::new(q, top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::q;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::int(x)).collect())
            .collect()
    }

    #[test]
    fn charpoly_of_small_matrices() {
        assert_eq!(
            charpoly(&m(&[&[2, 1], &[1, 2]])),
            vec![q(3, 1), q(-4, 1), q(1, 1)]
        );
    }

    #[test]
    fn repeated_and_zero_eigenvalues() {
        let s = sturm_inertia(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]]));
        assert_eq!((s.n_plus, s.n_minus, s.n_zero), (2, 0, 1));
        let s = sturm_inertia(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!((s.n_plus, s.n_minus, s.n_zero), (1, 1, 0));
        let s = sturm_inertia(&m(&[&[-2, 0], &[0, -2]]));
        assert_eq!((s.n_plus, s.n_minus, s.n_zero), (0, 2, 0));
    }
}
