//! First homology, Euler class and d3 of contact surgery diagrams.

mod euler;
mod homology;
mod reduce;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use euler::{
    chain_shape, euler_case, euler_closed_form, euler_from_images, meridian_images,
    meridian_images_exact, EulerCase, EulerCoefficient,
};
pub use homology::{group_name, HomologyClass, Presentation};
pub use reduce::{expand_reciprocals, reduce, Reduction, SignPolicy};

use crate::error::{Error, Result};
use crate::exactmath::{
    signature_generalized, solve_rational, IntMatrix, Rational, SignatureTriple,
};
use crate::knotdata::ContactSurgeryDiagram;

/// `Q_ii = p_i`, `Q_ij = q_j l_ij` for coefficients `±1/n_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedLinkingMatrix {
    pub q: IntMatrix,
    /// The denominators `q_i`, equal to `n_i`.
    pub denoms: Vec<BigInt>,
    pub n: Vec<BigInt>,
    pub signs: Vec<i64>,
}

impl GeneralizedLinkingMatrix {
    pub fn signature(&self) -> SignatureTriple {
        signature_generalized(&self.q, &self.denoms)
            .expect("generalized linking matrices rescale symmetrically")
    }
}

pub fn build_q(d: &ContactSurgeryDiagram) -> Result<GeneralizedLinkingMatrix> {
    let k = d.len();
    let mut n = Vec::with_capacity(k);
    let mut signs = Vec::with_capacity(k);
    for c in &d.components {
        let ni = c.coeff.reciprocal_n().ok_or_else(|| {
            Error::Domain(format!(
                "{} has coefficient {}; expand it first",
                c.name, c.coeff
            ))
        })?;
        n.push(ni);
        signs.push(i64::from(c.coeff.signum()));
    }
    let mut q = IntMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            q[(i, j)] = if i == j {
                BigInt::from(signs[i]) + &n[i] * d.components[i].tb
            } else {
                &n[j] * d.linking[i][j]
            };
        }
    }
    Ok(GeneralizedLinkingMatrix {
        q,
        denoms: n.clone(),
        n,
        signs,
    })
}

/// Invariant factors of the generalized linking matrix and the Smith data
/// relating canonical coordinates to meridians.
pub fn h1(d: &ContactSurgeryDiagram) -> Result<Presentation> {
    let reduced = reduce(d, &SignPolicy::Enumerate)?;
    Ok(Presentation::of(&build_q(&reduced[0].diagram)?.q))
}

/// Euler class of a diagram with `±1/n` coefficients: replace each by push-offs,
/// take `Σ r_i μ_i`. Also returns the class of each input component's meridian.
pub fn euler_via_expansion(
    d: &ContactSurgeryDiagram,
) -> Result<(Presentation, HomologyClass, Vec<HomologyClass>)> {
    let (x, groups) = expand_reciprocals(d)?;
    let q = build_q(&x)?;
    let pres = Presentation::of(&q.q);
    let r: Vec<BigInt> = x.components.iter().map(|c| BigInt::from(c.rot)).collect();
    let e = pres.class_of(&r);
    let mer = groups.iter().map(|g| pres.meridian_sum(g)).collect();
    Ok((pres, e, mer))
}

/// Torsion test and d3 for a diagram with `±1/n` coefficients.
pub fn d3_reduced(d: &ContactSurgeryDiagram) -> Result<Option<Rational>> {
    let g = build_q(d)?;
    let r: Vec<BigInt> = d.components.iter().map(|c| BigInt::from(c.rot)).collect();
    let Some(b) = solve_rational(&g.q, &r) else {
        return Ok(None);
    };
    let sigma = g.signature().signature();
    let mut sum = Rational::zero();
    for i in 0..d.len() {
        let ni = Rational::int(g.n[i].clone());
        sum += &ni * &b[i] * d.components[i].rot;
        sum += (Rational::int(3) - ni) * g.signs[i];
    }
    Ok(Some(sum / 4 - Rational::new(3 * sigma, 4)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    /// Non-unit invariant factors of `H_1`.
    pub h1: Vec<BigInt>,
    pub euler: HomologyClass,
    pub euler_torsion: bool,
    pub d3: Option<Rational>,
    /// Rotation vector of the reduced diagram.
    pub rots: Vec<i64>,
    /// Meridian classes of the original components.
    pub meridians: Vec<HomologyClass>,
    pub expansion_trace: String,
}

impl InvariantReport {
    /// `λ` with `e = λ μ_i`, when the Euler class is a multiple of that meridian.
    pub fn euler_in_meridian(&self, i: usize) -> Option<BigInt> {
        self.euler.multiple_of(&self.meridians[i])
    }
}

pub fn report(red: &Reduction) -> Result<InvariantReport> {
    let g = build_q(&red.diagram)?;
    let pres = Presentation::of(&g.q);
    let (_, euler, mer_exp) = euler_via_expansion(&red.diagram)?;
    let meridians = red
        .groups
        .iter()
        .map(|grp| {
            grp.iter()
                .fold(HomologyClass::zero(euler.factors.clone()), |acc, &i| {
                    acc.add(&mer_exp[i])
                })
        })
        .collect();
    let d3 = d3_reduced(&red.diagram)?;
    Ok(InvariantReport {
        h1: pres.factors(),
        euler,
        euler_torsion: d3.is_some(),
        d3,
        rots: red.rots(),
        meridians,
        expansion_trace: red.trace(),
    })
}

/// One report per stabilization-sign assignment allowed by `policy`.
pub fn invariants(d: &ContactSurgeryDiagram, policy: &SignPolicy) -> Result<Vec<InvariantReport>> {
    reduce(d, policy)?.iter().map(report).collect()
}

/// Single report for a fully determined diagram.
pub fn d3(d: &ContactSurgeryDiagram, signs: &[i8]) -> Result<InvariantReport> {
    let mut v = invariants(d, &SignPolicy::Explicit(signs.to_vec()))?;
    Ok(v.remove(0))
}

/// Connected sum: homology classes concatenate, d3 adds.
pub fn connected_sum(
    a: (&HomologyClass, &Rational),
    b: (&HomologyClass, &Rational),
) -> (HomologyClass, Rational) {
    let mut coords = a.0.coords.clone();
    coords.extend(b.0.coords.iter().cloned());
    let mut factors = a.0.factors.clone();
    factors.extend(b.0.factors.iter().cloned());
    (HomologyClass { coords, factors }, a.1 + b.1)
}

/// Rational tb of a Legendrian meridian in `U(p/q)`, `U` of tb `t`:
/// `-1 - q/(p + q t)`.
pub fn meridian_rational_tb(p: i64, q: i64, t: i64) -> Result<Rational> {
    if q <= 0 {
        return Err(Error::Domain("q must be positive".into()));
    }
    let den = BigInt::from(p) + BigInt::from(q) * t;
    if den.is_zero() {
        return Err(Error::Domain("p + qt = 0".into()));
    }
    Ok(Rational::int(-1) - Rational::new(q, den))
}

/// Whether `|H_1|` is finite with no 2-torsion constraint checks.
pub fn is_rational_homology_sphere(p: &Presentation) -> bool {
    p.factors().iter().all(|d| d.is_positive())
}
