use num_bigint::BigInt;
use num_traits::Signed;

use super::Rational;
use crate::error::{Error, Result};

/// Negative continued fraction `r = (r_1 + 1) - 1/(r_2 - 1/(... - 1/r_n))`
/// with every `r_i <= -2`.
///
/// The shift on the first entry makes `|2 + r_i|` the stabilization count of
/// the i-th push-off in the transformation lemma.
pub fn negcf(r: &Rational) -> Result<Vec<BigInt>> {
    if !r.is_negative() {
        return Err(Error::Domain(format!("negcf needs r < 0, got {r}")));
    }
    let mut out = Vec::new();
    let a = r.floor();
    if r.is_integer() {
        out.push(a - 1);
        return Ok(out);
    }
    out.push(&a - 1);
    let mut y = -(r - &Rational::int(a)).recip();
    loop {
        let a = y.floor();
        if y.is_integer() {
            out.push(a);
            return Ok(out);
        }
        out.push(a.clone());
        y = -(y - Rational::int(a)).recip();
    }
}

/// Inverse of [`negcf`].
pub fn bracket(entries: &[BigInt]) -> Rational {
    assert!(!entries.is_empty(), "empty bracket");
    let mut acc: Option<Rational> = None;
    for (i, e) in entries.iter().enumerate().rev() {
        let head = if i == 0 {
            Rational::int(e + 1)
        } else {
            Rational::int(e.clone())
        };
        acc = Some(match acc {
            None => head,
            Some(tail) => head - tail.recip(),
        });
    }
    acc.unwrap()
}

/// Display form `(r_1 + 1, r_2, ..., r_n)`, i.e. the plain expansion
/// `a_1 - 1/(a_2 - ...)`.
pub fn negcf_display(entries: &[BigInt]) -> Vec<BigInt> {
    let mut v = entries.to_vec();
    if let Some(first) = v.first_mut() {
        *first += 1;
    }
    v
}

/// Stabilization increments `|2 + r_i|`.
pub fn stabilization_increments(entries: &[BigInt]) -> Vec<u64> {
    entries
        .iter()
        .map(|e| {
            let v = (e + BigInt::from(2)).abs();
            u64::try_from(v).expect("stabilization count fits in u64")
        })
        .collect()
}

/// Whether every entry satisfies `r_i <= -2`.
pub fn admissible(entries: &[BigInt]) -> bool {
    !entries.is_empty() && entries.iter().all(|e| e <= &BigInt::from(-2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::q;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn minus_eleven_ninths() {
        let e = negcf(&q(-11, 9)).unwrap();
        assert_eq!(e, ints(&[-3, -2, -2, -2, -3]));
        assert_eq!(negcf_display(&e), ints(&[-2, -2, -2, -2, -3]));
        assert_eq!(stabilization_increments(&e), vec![1, 0, 0, 0, 1]);
        assert_eq!(bracket(&e), q(-11, 9));
    }

    #[test]
    fn small_cases() {
        assert_eq!(negcf(&q(-1, 1)).unwrap(), ints(&[-2]));
        assert_eq!(negcf(&q(-1, 2)).unwrap(), ints(&[-2, -2]));
        assert_eq!(negcf(&q(-2, 1)).unwrap(), ints(&[-3]));
        assert!(negcf(&q(0, 1)).is_err());
        assert!(negcf(&q(3, 2)).is_err());
    }

    // Oracle: brute force over short tuples of entries <= -2.
    #[test]
    fn brute_force_uniqueness() {
        let range: Vec<i64> = (-6..=-2).collect();
        let mut seen = std::collections::HashMap::new();
        for len in 1..=3usize {
            let mut idx = vec![0usize; len];
            loop {
                let t: Vec<BigInt> = idx.iter().map(|&i| BigInt::from(range[i])).collect();
                let v = bracket(&t);
                assert!(
                    seen.insert(v.clone(), t.clone()).is_none(),
                    "two expansions of {v}"
                );
                assert_eq!(negcf(&v).unwrap(), t);
                let mut p = 0;
                loop {
                    if p == len {
                        break;
                    }
                    idx[p] += 1;
                    if idx[p] < range.len() {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == len {
                    break;
                }
            }
        }
    }
}
