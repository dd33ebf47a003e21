use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmath::{snf, IntMatrix};

/// `H_1 = Z^k / (column span of Q)`, in Smith coordinates `y = U x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    u: IntMatrix,
    diag: Vec<BigInt>,
    /// Indices of the non-unit invariant factors.
    keep: Vec<usize>,
}

impl Presentation {
    pub fn of(q: &IntMatrix) -> Presentation {
        let r = snf(q);
        let k = q.rows();
        let mut diag = r.diagonal();
        diag.resize(k, BigInt::zero());
        let keep = (0..k).filter(|&i| !diag[i].is_one()).collect();
        Presentation { u: r.u, diag, keep }
    }

    /// Non-unit invariant factors; `0` marks a free summand.
    pub fn factors(&self) -> Vec<BigInt> {
        self.keep.iter().map(|&i| self.diag[i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.u.rows()
    }

    pub fn unimodular(&self) -> &IntMatrix {
        &self.u
    }

    pub fn is_finite(&self) -> bool {
        self.keep.iter().all(|&i| !self.diag[i].is_zero())
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.factors().iter().product())
    }

    /// Class of `Σ x_i μ_i`.
    pub fn class_of(&self, x: &[BigInt]) -> HomologyClass {
        let y = self.u.mul_vec(x);
        let factors = self.factors();
        let coords = self
            .keep
            .iter()
            .zip(&factors)
            .map(|(&i, d)| reduce(&y[i], d))
            .collect();
        HomologyClass { coords, factors }
    }

    pub fn meridian(&self, i: usize) -> HomologyClass {
        let mut x = vec![BigInt::zero(); self.rank()];
        x[i] = BigInt::one();
        self.class_of(&x)
    }

    /// Class of the sum of the given meridians.
    pub fn meridian_sum(&self, idx: &[usize]) -> HomologyClass {
        let mut x = vec![BigInt::zero(); self.rank()];
        for &i in idx {
            x[i] += 1;
        }
        self.class_of(&x)
    }
}

fn reduce(v: &BigInt, d: &BigInt) -> BigInt {
    if d.is_zero() {
        v.clone()
    } else {
        v.mod_floor(d)
    }
}

/// An element of `H_1` in canonical coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomologyClass {
    pub coords: Vec<BigInt>,
    pub factors: Vec<BigInt>,
}

impl HomologyClass {
    pub fn zero(factors: Vec<BigInt>) -> HomologyClass {
        HomologyClass {
            coords: vec![BigInt::zero(); factors.len()],
            factors,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigInt) -> HomologyClass {
        let coords = self
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(c, d)| reduce(&(c * k), d))
            .collect();
        HomologyClass {
            coords,
            factors: self.factors.clone(),
        }
    }

    pub fn add(&self, other: &HomologyClass) -> HomologyClass {
        assert_eq!(self.factors, other.factors, "classes in different groups");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(&self.factors)
            .map(|((a, b), d)| reduce(&(a + b), d))
            .collect();
        HomologyClass {
            coords,
            factors: self.factors.clone(),
        }
    }

    pub fn neg(&self) -> HomologyClass {
        self.scale(&BigInt::from(-1))
    }

    /// Order of the class, `None` if it has infinite order.
    pub fn order(&self) -> Option<BigInt> {
        let mut acc = BigInt::one();
        for (c, d) in self.coords.iter().zip(&self.factors) {
            if d.is_zero() {
                if !c.is_zero() {
                    return None;
                }
                continue;
            }
            acc = acc.lcm(&(d / c.gcd(d)));
        }
        Some(acc)
    }

    /// The `λ` (reduced modulo the order of `generator`) with
    /// `self = λ · generator`, if any.
    pub fn multiple_of(&self, generator: &HomologyClass) -> Option<BigInt> {
        assert_eq!(
            self.factors, generator.factors,
            "classes in different groups"
        );
        // A free coordinate pins λ exactly.
        for ((c, g), d) in self.coords.iter().zip(&generator.coords).zip(&self.factors) {
            if d.is_zero() && !g.is_zero() {
                if !c.is_multiple_of(g) {
                    return None;
                }
                let lam = c / g;
                return (generator.scale(&lam) == *self).then_some(lam);
            }
        }
        let ord = generator.order()?;
        let n = ord.to_u64()?;
        let mut cur = HomologyClass::zero(self.factors.clone());
        for lam in 0..n {
            if cur == *self {
                return Some(BigInt::from(lam));
            }
            cur = cur.add(generator);
        }
        None
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(c, d)| {
                if d.is_zero() {
                    format!("{c} in Z")
                } else {
                    format!("{c} mod {d}")
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Group description such as `Z/7 + Z`.
pub fn group_name(factors: &[BigInt]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    factors
        .iter()
        .map(|d| {
            if d.is_zero() {
                "Z".to_string()
            } else {
                format!("Z/{}", d.abs())
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn cyclic_group_classes() {
        let p = Presentation::of(&IntMatrix::from_rows(&[vec![-7]]));
        assert_eq!(p.factors(), vec![b(7)]);
        let mu = p.meridian(0);
        let e = p.class_of(&[b(4)]);
        assert_eq!(e.multiple_of(&mu), Some(b(4)));
        assert_eq!(mu.order(), Some(b(7)));
        assert_eq!(e.add(&e.neg()), HomologyClass::zero(vec![b(7)]));
    }

    #[test]
    fn free_summand() {
        let p = Presentation::of(&IntMatrix::from_rows(&[vec![0]]));
        assert_eq!(p.factors(), vec![b(0)]);
        assert!(!p.is_finite());
        let e = p.class_of(&[b(3)]);
        assert_eq!(e.order(), None);
        assert_eq!(e.multiple_of(&p.meridian(0)), Some(b(3)));
        assert_eq!(group_name(&p.factors()), "Z");
    }

    #[test]
    fn trivial_group() {
        let p = Presentation::of(&IntMatrix::from_rows(&[vec![-3, -4], vec![-4, -5]]));
        assert!(p.factors().is_empty());
        assert!(p.class_of(&[b(5), b(-2)]).is_zero());
        assert_eq!(p.order(), Some(b(1)));
    }
}
