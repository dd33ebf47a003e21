use std::fmt;

use crate::calculus::transform;
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::invariants::meridian_rational_tb;
use crate::knotdata::LegendrianComponent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TightnessStatus {
    Tight,
    Overtwisted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Certificate {
    NegativeCoefficient,
    BennequinViolation,
    MixedStabilization,
    WrongFirstStabilization,
    LanternReductionToTight,
    StabilizedPositiveSurgery,
}

impl Certificate {
    pub fn status(self) -> TightnessStatus {
        match self {
            Certificate::NegativeCoefficient | Certificate::LanternReductionToTight => {
                TightnessStatus::Tight
            }
            _ => TightnessStatus::Overtwisted,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Certificate::NegativeCoefficient => "negative-coefficient",
            Certificate::BennequinViolation => "bennequin-violation",
            Certificate::MixedStabilization => "mixed-stabilization",
            Certificate::WrongFirstStabilization => "wrong-first-stabilization",
            Certificate::LanternReductionToTight => "lantern-reduction-to-tight",
            Certificate::StabilizedPositiveSurgery => "stabilized-positive-surgery",
        }
    }
}

impl fmt::Display for TightnessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TightnessStatus::Tight => "tight",
            TightnessStatus::Overtwisted => "overtwisted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightnessVerdict {
    pub status: TightnessStatus,
    pub certificate: Certificate,
    /// Rational tb of the Legendrian meridian, for Bennequin certificates.
    pub meridian_tb: Option<Rational>,
}

impl TightnessVerdict {
    fn of(certificate: Certificate) -> TightnessVerdict {
        TightnessVerdict {
            status: certificate.status(),
            certificate,
            meridian_tb: None,
        }
    }

    pub fn is_tight(&self) -> bool {
        self.status == TightnessStatus::Tight
    }
}

/// Whether the transformation lemma applied to `U(r)`, `tb(U) = t`,
/// stabilizes any push-off.
pub fn chain_has_stabilizations(t: i64, r: &Rational) -> Result<bool> {
    let u = LegendrianComponent::unknot("U", t, 0, r.clone());
    Ok(transform(&u, None)?.total_stabs() > 0)
}

/// Tight/overtwisted decision for contact `r`-surgery on a Legendrian unknot
/// of tb `t` stabilized `plus` times positively and `minus` times negatively.
pub fn unknot_tightness(
    t: i64,
    plus: u64,
    minus: u64,
    r: &Rational,
    first_stab_sign: Option<i8>,
) -> Result<TightnessVerdict> {
    if r.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    if t > -1 || (plus + minus) as i64 != -1 - t {
        return Err(Error::Domain(format!(
            "stabilization counts {plus}+{minus} do not match tb {t} of an unknot"
        )));
    }
    if let Some(s) = first_stab_sign {
        if s != 1 && s != -1 {
            return Err(Error::Domain(
                "first stabilization sign must be +1 or -1".into(),
            ));
        }
    }
    if r.is_negative() {
        return Ok(TightnessVerdict::of(Certificate::NegativeCoefficient));
    }
    let minus_t = Rational::int(-t);
    if *r < minus_t {
        let p = r
            .numer()
            .try_into()
            .map_err(|_| Error::Domain("coefficient too large".into()))?;
        let q = r
            .denom()
            .try_into()
            .map_err(|_| Error::Domain("coefficient too large".into()))?;
        let tbq = meridian_rational_tb(p, q, t)?;
        debug_assert!(tbq > Rational::int(-1));
        return Ok(TightnessVerdict {
            meridian_tb: Some(tbq),
            ..TightnessVerdict::of(Certificate::BennequinViolation)
        });
    }
    if plus > 0 && minus > 0 {
        return Ok(TightnessVerdict::of(Certificate::MixedStabilization));
    }
    if plus + minus == 0 {
        return Ok(TightnessVerdict::of(Certificate::LanternReductionToTight));
    }
    let sign = if plus > 0 { 1 } else { -1 };
    if !chain_has_stabilizations(t, r)? {
        return Err(Error::Domain(format!(
            "U({r}) with tb {t} should stabilize its chain"
        )));
    }
    match first_stab_sign {
        None => Err(Error::IncompleteSigns(format!(
            "U({r}) with tb {t} needs the sign of its first chain stabilization"
        ))),
        Some(s) if s == sign => Ok(TightnessVerdict::of(Certificate::LanternReductionToTight)),
        Some(_) => Ok(TightnessVerdict::of(Certificate::WrongFirstStabilization)),
    }
}

/// Verdict for a non-unknot surgery when it follows from the coefficient sign
/// and whether the knot is stabilized; `None` when neither criterion applies.
pub fn knot_tightness(coeff: &Rational, stabilized: bool) -> Option<TightnessVerdict> {
    if coeff.is_negative() {
        Some(TightnessVerdict::of(Certificate::NegativeCoefficient))
    } else if stabilized {
        Some(TightnessVerdict::of(Certificate::StabilizedPositiveSurgery))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::q;

    #[test]
    fn listed_examples() {
        let v = unknot_tightness(-1, 0, 0, &q(1, 2), None).unwrap();
        assert_eq!(v.status, TightnessStatus::Overtwisted);
        assert_eq!(v.certificate, Certificate::BennequinViolation);
        assert_eq!(v.meridian_tb, Some(Rational::int(1)));

        let v = unknot_tightness(-3, 1, 1, &Rational::int(4), None).unwrap();
        assert_eq!(v.certificate, Certificate::MixedStabilization);

        let v = unknot_tightness(-3, 2, 0, &q(7, 2), Some(1)).unwrap();
        assert_eq!(v.status, TightnessStatus::Tight);
        assert_eq!(v.certificate, Certificate::LanternReductionToTight);
        let v = unknot_tightness(-3, 2, 0, &q(7, 2), Some(-1)).unwrap();
        assert_eq!(v.certificate, Certificate::WrongFirstStabilization);
    }

    #[test]
    fn errors() {
        assert!(unknot_tightness(-2, 0, 0, &Rational::one(), None).is_err());
        assert_eq!(
            unknot_tightness(-2, 1, 0, &Rational::zero(), None),
            Err(Error::ZeroCoefficient)
        );
        assert!(matches!(
            unknot_tightness(-3, 2, 0, &Rational::int(3), None),
            Err(Error::IncompleteSigns(_))
        ));
    }

    #[test]
    fn boundary_values() {
        // r = -t exactly is past the Bennequin region.
        let v = unknot_tightness(-2, 0, 1, &Rational::int(2), Some(-1)).unwrap();
        assert!(v.is_tight());
        let v = unknot_tightness(-1, 0, 0, &Rational::one(), None).unwrap();
        assert!(v.is_tight());
        let v = unknot_tightness(-4, 3, 0, &q(-5, 3), None).unwrap();
        assert_eq!(v.certificate, Certificate::NegativeCoefficient);
    }
}
