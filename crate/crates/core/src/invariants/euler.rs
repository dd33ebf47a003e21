use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::calculus::ExpansionChain;
use crate::error::{Error, Result};

/// Images of the chain meridians as multiples of the meridian `μ` of the
/// original knot, derived from the relations of the expanded chain.
///
/// With `a_i` the tb and `ε_i` the sign of entry `i`, column `j` of the
/// linking matrix gives `μ_j = -ε_j (a_j μ + Σ_{i<j} (a_i - a_j) μ_i)`.
pub fn meridian_images_exact(chain: &ExpansionChain) -> Vec<BigInt> {
    let chain = chain.expand();
    let a: Vec<BigInt> = (0..chain.len())
        .map(|i| BigInt::from(chain.tb(i)))
        .collect();
    let mut c: Vec<BigInt> = Vec::with_capacity(a.len());
    for j in 0..a.len() {
        let eps = BigInt::from(chain.entries[j].sign());
        let mut acc = a[j].clone();
        for i in 0..j {
            acc += (&a[i] - &a[j]) * &c[i];
        }
        c.push(-eps * acc);
    }
    c
}

/// The displayed meridian images for a chain of `l` leading `(+1)` entries
/// followed by `m - l` stabilized `(-1)` entries. `s[i]` is the increment
/// of entry `i + 1` (one-based in the displays). When `l = 0` the displays
/// are written for an unstabilized first entry, so `t` is replaced by the
/// tb of that entry.
pub fn meridian_images(l: usize, m: usize, t: i64, s: &[u64]) -> Result<Vec<BigInt>> {
    if m == 0 || l > m || s.len() != m {
        return Err(Error::Domain(format!(
            "inconsistent meridian parameters l={l} m={m} |s|={}",
            s.len()
        )));
    }
    let t = if l == 0 {
        BigInt::from(t) - s[0]
    } else {
        BigInt::from(t)
    };
    let one = BigInt::one();
    let si = |i: usize| BigInt::from(s[i - 1]);
    let mut out = Vec::with_capacity(m);
    if l == m {
        let mut pow = one.clone();
        for _ in 1..m {
            out.push(-&t * &pow);
            pow *= &one + &t;
        }
        out.push(pow);
        return Ok(out);
    }
    if l == 0 {
        out.push(t.clone());
        let mut prod = &one - &t;
        for i in 2..m {
            out.push((&t - si(i)) * &prod);
            prod *= &one - &t + si(i);
        }
        if m >= 2 {
            out.push(prod);
        }
        return Ok(out);
    }
    let mut pow = one.clone();
    for _ in 1..=l {
        out.push(-&t * &pow);
        pow *= &one + &t;
    }
    let mut prod = pow;
    for i in l + 1..m {
        out.push((&t - si(i)) * &prod);
        prod *= &one - &t + si(i);
    }
    out.push(prod);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EulerCase {
    TwoEntries,
    Reciprocal,
    Negative,
    Mixed,
}

impl EulerCase {
    pub fn number(self) -> u8 {
        match self {
            EulerCase::TwoEntries => 1,
            EulerCase::Reciprocal => 2,
            EulerCase::Negative => 3,
            EulerCase::Mixed => 4,
        }
    }
}

/// `e(ξ) = e_K μ + e_L`; `e_K` in the basis of the original meridian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerCoefficient {
    pub e_k: BigInt,
    pub basis: String,
    pub case: EulerCase,
}

/// Which closed-form case applies to a chain shape.
pub fn euler_case(l: usize, m: usize, s: &[u64]) -> Result<EulerCase> {
    if m == 0 || l > m || s.len() != m {
        return Err(Error::Domain(format!("no closed form for l={l} m={m}")));
    }
    if l == m {
        Ok(EulerCase::Reciprocal)
    } else if m == 2 {
        Ok(EulerCase::TwoEntries)
    } else if l == 0 && s.iter().skip(2).all(|&x| x == 0) {
        Ok(EulerCase::Reciprocal)
    } else if l == 0 {
        Ok(EulerCase::Negative)
    } else if m > 2 {
        Ok(EulerCase::Mixed)
    } else {
        Err(Error::Domain(format!("no closed form for l={l} m={m}")))
    }
}

/// The closed forms, transcribed literally. `rots[i]` is the rotation number
/// of entry `i + 1`, `r` that of the base knot, `first_sign` the sign of the
/// first entry. For `l = 0` the formulas refer to the first chain entry, so
/// its tb `t - s_1` and rotation `rots[0]` stand in for `t` and `r`.
pub fn euler_closed_form(
    t: i64,
    r: i64,
    rots: &[i64],
    l: usize,
    s: &[u64],
    first_sign: i64,
) -> Result<EulerCoefficient> {
    let m = rots.len();
    let case = euler_case(l, m, s)?;
    let (tt, rr) = if l == 0 {
        (BigInt::from(t) - s[0], BigInt::from(rots[0]))
    } else {
        (BigInt::from(t), BigInt::from(r))
    };
    let one = BigInt::one();
    let ri = |i: usize| BigInt::from(rots[i - 1]);
    let si = |i: usize| BigInt::from(s[i - 1]);
    let e_k = match case {
        EulerCase::TwoEntries => -BigInt::from(first_sign) * &tt * (ri(1) - ri(2)) + ri(2),
        EulerCase::Reciprocal => rr,
        EulerCase::Negative => {
            let mut bracket = BigInt::zero();
            let mut prod_m = one.clone();
            for k in 2..m {
                prod_m *= &one - &tt + si(k);
            }
            bracket += ri(m) * prod_m;
            bracket += ri(2) * (&tt - si(2));
            for i in 3..m {
                let mut p = one.clone();
                for k in 2..i {
                    p *= &one - &tt + si(k);
                }
                bracket += ri(i) * (&tt - si(i)) * p;
            }
            &rr * &tt + (&one - &tt) * bracket
        }
        EulerCase::Mixed => {
            let mut bracket = -rr.clone();
            let mut prod_m = one.clone();
            for k in l + 1..m {
                prod_m *= &one - &tt + si(k);
            }
            bracket += ri(m) * prod_m;
            bracket += ri(l + 1) * (&tt - si(2));
            for i in l + 2..m {
                let mut p = one.clone();
                for k in l + 1..i {
                    p *= &one - &tt + si(k);
                }
                bracket += ri(i) * (&tt - si(i)) * p;
            }
            let mut pow = one.clone();
            for _ in 0..l {
                pow *= &one + &tt;
            }
            &rr + pow * bracket
        }
    };
    Ok(EulerCoefficient {
        e_k,
        basis: "μ".into(),
        case,
    })
}

/// Chain shape `(l, m, s)` of an expanded chain.
pub fn chain_shape(chain: &ExpansionChain) -> (usize, usize, Vec<u64>) {
    let e = chain.expand();
    let l = e.entries.iter().take_while(|x| x.sign() > 0).count();
    (l, e.len(), e.increments())
}

/// `e_K = Σ r_i c_i` from the exact meridian images.
pub fn euler_from_images(chain: &ExpansionChain) -> Option<BigInt> {
    let rots = chain.expand().rots()?;
    let c = meridian_images_exact(chain);
    Some(rots.iter().zip(&c).map(|(r, c)| BigInt::from(*r) * c).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn displayed_images() {
        let t = -5;
        assert_eq!(
            meridian_images(1, 2, t, &[0, 0]).unwrap(),
            ints(&[-t, 1 + t])
        );
        assert_eq!(
            meridian_images(0, 2, t, &[0, 0]).unwrap(),
            ints(&[t, 1 - t])
        );
        assert_eq!(
            meridian_images(3, 3, t, &[0, 0, 0]).unwrap(),
            ints(&[-t, -t * (1 + t), (1 + t) * (1 + t)])
        );
        assert!(meridian_images(3, 2, t, &[0, 0]).is_err());
    }

    #[test]
    fn case_selection() {
        assert_eq!(euler_case(2, 2, &[0, 0]).unwrap(), EulerCase::Reciprocal);
        assert_eq!(euler_case(1, 2, &[0, 1]).unwrap(), EulerCase::TwoEntries);
        assert_eq!(euler_case(0, 3, &[1, 0, 0]).unwrap(), EulerCase::Reciprocal);
        assert_eq!(euler_case(0, 3, &[1, 0, 1]).unwrap(), EulerCase::Negative);
        assert_eq!(euler_case(1, 3, &[0, 1, 1]).unwrap(), EulerCase::Mixed);
    }

    #[test]
    fn closed_form_small_cases() {
        // case (1) at t = -1 with a leading (+1): e_K = r_1
        let e = euler_closed_form(-1, 0, &[3, 2], 1, &[0, 1], 1).unwrap();
        assert_eq!(e.e_k, BigInt::from(3));
        let e = euler_closed_form(-4, 2, &[2, 2, 2, 2], 4, &[0; 4], 1).unwrap();
        assert_eq!(e.e_k, BigInt::from(2));
    }
}
