//! Tightness of unknot surgeries, the closed-form classification families and
//! brute-force enumeration of single-knot contact surgeries.

mod bounds;
mod engine;
mod families;
mod tightness;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::knotdata::{torus_label, K5A1, LEFT_TREFOIL, NEG_K5A1, RIGHT_TREFOIL, UNKNOT};

pub use bounds::{
    cs_bounds, neg_sigma_tight_d3, obstruction, sigma_tight_d3, xi_nm, CsBounds, Interval,
    Obstruction, Structure, XiReport,
};
pub use engine::{
    engine_at, enumerate_manifold, family_value_set, manifold_keys, realized, tight_lens_classes,
    verify_family, Cs1Entry, PointCheck, VerifyReport,
};
pub use families::{
    family, family_eval, family_surgery_description, family_values, registry, template_for_key,
    FamilyRecord, FamilyValue, SurgeryTemplate, Target,
};
pub use tightness::{
    chain_has_stabilizations, knot_tightness, unknot_tightness, Certificate, TightnessStatus,
    TightnessVerdict,
};

/// Named integer parameters of a family point.
pub type Params = BTreeMap<String, i64>;

/// Builds [`Params`] from `(name, value)` pairs.
pub fn params(pairs: &[(&str, i64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Manifold {
    Sigma2311,
    NegSigma2311,
    /// `L(4m+3, 4)`.
    Lens(u32),
}

impl Manifold {
    /// Order of `H_1`, or `None` for homology spheres.
    pub fn modulus(self) -> Option<i64> {
        match self {
            Manifold::Lens(m) => Some(4 * i64::from(m) + 3),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<Manifold> {
        match s {
            "Sigma2311" | "sigma" => Ok(Manifold::Sigma2311),
            "NegSigma2311" | "-sigma" => Ok(Manifold::NegSigma2311),
            _ => {
                let inner = s
                    .strip_prefix("Lens(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| s.strip_prefix("lens"))
                    .ok_or_else(|| Error::Domain(format!("unknown manifold `{s}`")))?;
                let m: u32 = inner
                    .trim_start_matches("m=")
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad lens parameter in `{s}`")))?;
                if m == 0 {
                    return Err(Error::Domain("lens spaces need m >= 1".into()));
                }
                Ok(Manifold::Lens(m))
            }
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::Sigma2311 => f.write_str("Sigma(2,3,11)"),
            Manifold::NegSigma2311 => f.write_str("-Sigma(2,3,11)"),
            Manifold::Lens(m) => write!(f, "L({},4)", 4 * m + 3),
        }
    }
}

/// Which contact surgery number a single-knot diagram bounds by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// `cs`
    Rational,
    /// `cs_Z`
    Integer,
    /// `cs_{1/Z}`
    Reciprocal,
    /// `cs_{±1}`
    PlusMinusOne,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [
        Flavor::Rational,
        Flavor::Integer,
        Flavor::Reciprocal,
        Flavor::PlusMinusOne,
    ];

    /// Most restrictive flavor a coefficient belongs to.
    pub fn of(coeff: &Rational) -> Flavor {
        if coeff.abs() == Rational::one() {
            Flavor::PlusMinusOne
        } else if coeff.is_integer() {
            Flavor::Integer
        } else if coeff.reciprocal_n().is_some() {
            Flavor::Reciprocal
        } else {
            Flavor::Rational
        }
    }

    /// Whether a diagram of flavor `self` shows `target = 1`.
    pub fn certifies(self, target: Flavor) -> bool {
        match self {
            Flavor::PlusMinusOne => true,
            Flavor::Integer => matches!(target, Flavor::Integer | Flavor::Rational),
            Flavor::Reciprocal => matches!(target, Flavor::Reciprocal | Flavor::Rational),
            Flavor::Rational => target == Flavor::Rational,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Rational => "cs",
            Flavor::Integer => "cs_Z",
            Flavor::Reciprocal => "cs_1/Z",
            Flavor::PlusMinusOne => "cs_pm1",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which single-knot surgery description a point comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    /// K5a1 with topological coefficient `-1`.
    K5a1,
    /// Left trefoil with topological coefficient `-1/2`.
    LeftTrefoil,
    /// `-K5a1` with topological coefficient `+1`.
    NegK5a1,
    /// Right trefoil with topological coefficient `1/2`.
    RightTrefoil,
    /// `T(2,-(2m+1))` with topological coefficient `-(4m+3)`.
    Torus,
    /// Unknot `U_k`, coefficient `-(4m+3)/(4-k(4m+3))`.
    Standard(i64),
    /// Unknot `U*_k`, coefficient `-(4m+3)/(m+1-k(4m+3))`.
    Dual(i64),
}

/// A concrete single-knot surgery: knot type, tb, and (for lens spaces) `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateKey {
    pub source: Source,
    pub m: i64,
    pub t: i64,
}

impl TemplateKey {
    pub fn manifold(&self) -> Manifold {
        match self.source {
            Source::K5a1 | Source::LeftTrefoil => Manifold::Sigma2311,
            Source::NegK5a1 | Source::RightTrefoil => Manifold::NegSigma2311,
            _ => Manifold::Lens(self.m as u32),
        }
    }

    pub fn knot_label(&self) -> String {
        match self.source {
            Source::K5a1 => K5A1.into(),
            Source::LeftTrefoil => LEFT_TREFOIL.into(),
            Source::NegK5a1 => NEG_K5A1.into(),
            Source::RightTrefoil => RIGHT_TREFOIL.into(),
            Source::Torus => torus_label(self.m as u32),
            Source::Standard(_) | Source::Dual(_) => UNKNOT.into(),
        }
    }

    pub fn topological(&self) -> Rational {
        let n = 4 * self.m + 3;
        match self.source {
            Source::K5a1 => Rational::int(-1),
            Source::LeftTrefoil => Rational::new(-1, 2),
            Source::NegK5a1 => Rational::one(),
            Source::RightTrefoil => Rational::new(1, 2),
            Source::Torus => Rational::int(-n),
            Source::Standard(k) => Rational::new(-n, 4 - k * n),
            Source::Dual(k) => Rational::new(-n, self.m + 1 - k * n),
        }
    }

    /// Contact coefficient: topological minus tb.
    pub fn coeff(&self) -> Rational {
        self.topological() - self.t
    }

    /// Multiple of the standard meridian `μ` that the knot's meridian maps to.
    pub fn meridian_factor(&self) -> i64 {
        match self.source {
            Source::Torus => 2 * (self.m + 1),
            Source::Standard(_) => 1,
            Source::Dual(_) => self.m + 1,
            _ => 0,
        }
    }
}

impl fmt::Display for TemplateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis = match self.source {
            Source::Standard(k) => format!(" U_{k}"),
            Source::Dual(k) => format!(" U*_{k}"),
            _ => String::new(),
        };
        write!(
            f,
            "{}{} tb={} coeff={}",
            self.knot_label(),
            basis,
            self.t,
            self.coeff()
        )
    }
}

/// Grid limits for enumeration and family sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub m_max: i64,
    /// Lowest tb visited on lens spaces.
    pub tb_min: i64,
    /// Lowest tb visited on the Brieskorn spheres.
    pub sigma_tb_min: i64,
    pub k_abs: i64,
    pub n_abs: i64,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds {
            m_max: 3,
            tb_min: -12,
            sigma_tb_min: -20,
            k_abs: 4,
            n_abs: 4,
        }
    }
}

impl Bounds {
    /// Applies `key=value` overrides separated by commas or whitespace.
    pub fn with_overrides(mut self, items: &str) -> Result<Bounds> {
        for item in items
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
        {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("bound `{item}` is not key=value")))?;
            let v: i64 = v
                .parse()
                .map_err(|_| Error::Domain(format!("bound `{item}` needs an integer")))?;
            match k {
                "m" | "m_max" => self.m_max = v,
                "tb" | "tb_min" => self.tb_min = -v.abs(),
                "sigma_tb" | "sigma_tb_min" => self.sigma_tb_min = -v.abs(),
                "k" | "k_abs" => self.k_abs = v.abs(),
                "n" | "n_abs" => self.n_abs = v.abs(),
                _ => return Err(Error::Domain(format!("unknown bound `{k}`"))),
            }
        }
        if self.m_max < 1 {
            return Err(Error::Domain("bound m must be at least 1".into()));
        }
        Ok(self)
    }
}

/// `min(e, -e)` in `Z_n`, the class representative under orientation reversal.
pub fn canonical_euler(e: &BigInt, modulus: Option<i64>) -> BigInt {
    match modulus {
        None => BigInt::from(0),
        Some(n) => {
            let n = BigInt::from(n);
            let e = e.mod_floor(&n);
            let f = (&n - &e).mod_floor(&n);
            e.min(f)
        }
    }
}
