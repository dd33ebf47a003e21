use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn int(n: impl Into<BigInt>) -> Rational {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rational {
        Rational(BigRational::zero())
    }

    pub fn one() -> Rational {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Rational {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// `Some(n)` when the value is `1/n` or `-1/n` for a positive integer `n`.
    pub fn reciprocal_n(&self) -> Option<BigInt> {
        if self.0.numer().abs().is_one() {
            Some(self.0.denom().clone())
        } else {
            None
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Always `p/q`, even for integers.
    pub fn canonical(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn from_big(r: BigRational) -> Rational {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational `{0}`")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| err())?;
                let q: BigInt = q.trim().parse().map_err(|_| err())?;
                if q.is_zero() {
                    return Err(err());
                }
                Ok(Rational::new(p, q))
            }
            None => Ok(Rational::int(s.parse::<BigInt>().map_err(|_| err())?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::int(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<i64> for Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                Rational(self.0.$method(BigRational::from_integer(rhs.into())))
            }
        }
        impl<'a> $trait<i64> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                Rational((&self.0).$method(BigRational::from_integer(rhs.into())))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// Shorthand for tests and tables: `q(-11, 9)`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_sign_and_gcd() {
        let r = q(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(q(0, -5).canonical(), "0/1");
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("-7/4".parse::<Rational>().unwrap(), q(-7, 4));
        assert_eq!("3".parse::<Rational>().unwrap(), q(3, 1));
        assert_eq!("4/-6".parse::<Rational>().unwrap().to_string(), "-2/3");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!(q(-5, 1).to_string(), "-5");
        assert_eq!(q(-5, 1).canonical(), "-5/1");
    }

    #[test]
    fn floor_rounds_down() {
        assert_eq!(q(-11, 9).floor(), BigInt::from(-2));
        assert_eq!(q(11, 9).floor(), BigInt::from(1));
        assert_eq!(q(-2, 1).floor(), BigInt::from(-2));
    }

    #[test]
    fn reciprocal_detection() {
        assert_eq!(q(-1, 4).reciprocal_n(), Some(BigInt::from(4)));
        assert_eq!(q(1, 1).reciprocal_n(), Some(BigInt::from(1)));
        assert_eq!(q(2, 3).reciprocal_n(), None);
    }
}
