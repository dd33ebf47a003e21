use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use super::engine::{engine_at, enumerate_manifold, realized, tight_lens_classes};
use super::families::{family_eval, registry, FamilyRecord, FamilyValue, Target};
use super::{
    canonical_euler, params, Bounds, Flavor, Manifold, Params, Source, TemplateKey, TightnessStatus,
};
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::invariants::{connected_sum, d3 as d3_of, HomologyClass};
use crate::knotdata::{Atlas, ContactSurgeryDiagram, LegendrianComponent};

/// Why a lens family cannot contain a given `(e, d3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obstruction {
    /// Finitely many points at fixed `m`; the grid was searched completely.
    Finite,
    /// Every member has `d3 < 0`.
    NegativeD3,
    /// Every member has `d3 <= 7`.
    D3AtMost7,
    /// Every member has `d3 < m + 3`.
    D3BelowMPlus3,
    /// Only shifts by an even `N` occur.
    EvenN,
    /// `d3` determines `k` up to finitely many values, all searched.
    SolvedForK,
}

impl Obstruction {
    pub fn name(self) -> &'static str {
        match self {
            Obstruction::Finite => "finite-grid",
            Obstruction::NegativeD3 => "negative-d3",
            Obstruction::D3AtMost7 => "d3-at-most-7",
            Obstruction::D3BelowMPlus3 => "d3-below-m+3",
            Obstruction::EvenN => "even-N",
            Obstruction::SolvedForK => "solved-for-k",
        }
    }

    /// Whether the obstruction rules out `(d3, N)` at `m`.
    pub fn excludes(self, m: i64, d3: &Rational, n: i64) -> bool {
        match self {
            Obstruction::Finite | Obstruction::SolvedForK => true,
            Obstruction::NegativeD3 => !d3.is_negative(),
            Obstruction::D3AtMost7 => *d3 > Rational::int(7),
            Obstruction::D3BelowMPlus3 => *d3 >= Rational::int(m + 3),
            Obstruction::EvenN => n.is_odd(),
        }
    }
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Obstruction attached to an overtwisted lens family.
pub fn obstruction(id: &str) -> Option<Obstruction> {
    let row = id
        .strip_prefix("Table1-")
        .and_then(|r| r.parse::<u32>().ok());
    match (id, row) {
        ("T1.7-1", _) | (_, Some(1 | 4 | 5 | 12 | 13 | 17 | 24 | 25 | 26 | 29 | 30)) => {
            Some(Obstruction::Finite)
        }
        ("T1.7-2", _) | (_, Some(2)) => Some(Obstruction::SolvedForK),
        (_, Some(3 | 6 | 9 | 20 | 23)) => Some(Obstruction::NegativeD3),
        (_, Some(7 | 8 | 10 | 11 | 15 | 22 | 28)) => Some(Obstruction::D3AtMost7),
        (_, Some(16 | 18 | 19 | 21)) => Some(Obstruction::D3BelowMPlus3),
        (_, Some(14 | 27)) => Some(Obstruction::EvenN),
        _ => None,
    }
}

fn lens_ot_records() -> Vec<FamilyRecord> {
    registry()
        .into_iter()
        .filter(|r| {
            r.target == Target::Lens && !r.tight && r.id != "Table1-1" && r.id != "Table1-2"
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiReport {
    pub m: u32,
    pub n: i64,
    /// Canonical Euler class in `Z_{4m+3}`.
    pub euler: BigInt,
    pub d3: Rational,
    /// Family points with the same `(e, d3)`.
    pub witnesses: Vec<(String, Params)>,
    /// Families ruled out, with the reason.
    pub excluded: Vec<(String, Obstruction)>,
    /// Families neither matched nor ruled out.
    pub unresolved: Vec<String>,
    pub cs_gt_1: bool,
}

/// Tight base structure `ξ^m` on `L(4m+3, 4)`: `(-1)`-surgery on a Hopf-linked
/// pair of unknots with tb `-3` and `-m`.
fn base_structure(m: u32) -> Result<(HomologyClass, Rational)> {
    let m = i64::from(m);
    let r2 = if m.is_odd() { 0 } else { 1 };
    let d = ContactSurgeryDiagram::new(
        vec![
            LegendrianComponent::unknot("A", -3, 0, Rational::int(-1)),
            LegendrianComponent::unknot("B", -m, r2, Rational::int(-1)),
        ],
        vec![vec![0, 1], vec![1, 0]],
    );
    let rep = d3_of(&d, &[])?;
    let d3 = rep
        .d3
        .ok_or_else(|| Error::Domain("base structure has non-torsion Euler class".into()))?;
    Ok((rep.euler, d3))
}

/// `ξ^m # ξ_N`, where `ξ_N` is the structure on `S^3` with `d3 = N`, and
/// whether it is shown to have contact surgery number greater than one.
pub fn xi_nm(m: u32, n: i64, bounds: &Bounds) -> Result<XiReport> {
    if m == 0 {
        return Err(Error::Domain("xi_Nm needs m >= 1".into()));
    }
    let (base_e, base_d3) = base_structure(m)?;
    let (_, d3) = connected_sum(
        (&base_e, &base_d3),
        (&HomologyClass::zero(Vec::new()), &Rational::int(n)),
    );
    let mer = HomologyClass {
        coords: vec![BigInt::from(1)],
        factors: base_e.factors.clone(),
    };
    let modulus = 4 * i64::from(m) + 3;
    let raw = if base_e.is_zero() {
        BigInt::from(0)
    } else {
        base_e
            .multiple_of(&mer)
            .or_else(|| base_e.coords.first().cloned())
            .ok_or_else(|| Error::Domain("Euler class outside the cyclic group".into()))?
    };
    let euler = canonical_euler(&raw, Some(modulus));
    let target = FamilyValue {
        euler: euler.clone(),
        d3: Some(d3.clone()),
    };

    let mi = i64::from(m);
    let mut witnesses = Vec::new();
    let mut excluded = Vec::new();
    let mut unresolved = Vec::new();
    for rec in lens_ot_records() {
        let points = if obstruction(rec.id) == Some(Obstruction::SolvedForK) {
            solve_for_k(mi, &d3)
        } else {
            rec.grid(mi, bounds)
        };
        let hit = points
            .into_iter()
            .find(|p| rec.eval_unchecked(p).canonical(Some(modulus)) == target);
        match (hit, obstruction(rec.id)) {
            (Some(p), _) => witnesses.push((rec.id.to_string(), p)),
            (None, Some(o)) if o.excludes(mi, &d3, n) => excluded.push((rec.id.to_string(), o)),
            _ => unresolved.push(rec.id.to_string()),
        }
    }
    let cs_gt_1 = witnesses.is_empty() && unresolved.is_empty();
    Ok(XiReport {
        m,
        n,
        euler,
        d3,
        witnesses,
        excluded,
        unresolved,
        cs_gt_1,
    })
}

/// Every point of the second cs_Z list whose d3 can equal `target`.
///
/// With `j = -(k+1) >= m+1` the d3 is `-j^2/N + j + 1/2 - m`, which decreases
/// for `j > N/2`; the scan stops once it drops below the target.
fn solve_for_k(m: i64, target: &Rational) -> Vec<Params> {
    let n = 4 * m + 3;
    let mut out = Vec::new();
    let mut j = m + 1;
    loop {
        let v = Rational::new(-j * j, n) + Rational::int(j - m) + Rational::new(1, 2);
        if 2 * j > n && v < *target {
            break;
        }
        if v == *target {
            for s in [1, -1] {
                out.push(params(&[("m", m), ("k", -j - 1), ("s", s)]));
            }
        }
        j += 1;
    }
    out
}

/// Which contact structure bounds are requested for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    /// The tight structure on a Brieskorn sphere.
    Tight,
    /// A tight structure on a lens space, by Euler class.
    TightLens(BigInt),
    /// An overtwisted structure by `(e, d3)`.
    Overtwisted { euler: BigInt, d3: Rational },
}

/// `lo <= cs <= hi`; `hi` absent when no upper bound is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: u32,
    pub hi: Option<u32>,
    pub citation: String,
}

impl Interval {
    fn exact(v: u32, citation: &str) -> Interval {
        Interval {
            lo: v,
            hi: Some(v),
            citation: citation.to_string(),
        }
    }

    fn range(lo: u32, hi: Option<u32>, citation: &str) -> Interval {
        Interval {
            lo,
            hi,
            citation: citation.to_string(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.hi == Some(self.lo)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) if h == self.lo => write!(f, "{}", self.lo),
            Some(h) => write!(f, "[{}, {}]", self.lo, h),
            None => write!(f, "[{}, ?]", self.lo),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsBounds {
    pub manifold: Manifold,
    pub per_flavor: BTreeMap<Flavor, Interval>,
    pub notes: Vec<String>,
}

impl CsBounds {
    pub fn get(&self, f: Flavor) -> &Interval {
        &self.per_flavor[&f]
    }
}

/// `d3` of the tight structure on `Σ(2,3,11)`.
pub fn sigma_tight_d3() -> Rational {
    Rational::int(2)
}

/// `d3` of the tight structure on `-Σ(2,3,11)`, from contact `(-1/2)`-surgery
/// on the right trefoil with tb `1`.
pub fn neg_sigma_tight_d3(atlas: &Atlas) -> Result<Rational> {
    let key = TemplateKey {
        source: Source::RightTrefoil,
        m: 0,
        t: 1,
    };
    engine_at(&key, atlas)?
        .into_iter()
        .find_map(|e| e.d3)
        .ok_or_else(|| Error::Domain("tight structure without d3".into()))
}

/// Known bounds on every flavor of contact surgery number.
pub fn cs_bounds(
    manifold: Manifold,
    structure: &Structure,
    bounds: &Bounds,
    atlas: &Atlas,
) -> Result<CsBounds> {
    let mut per = BTreeMap::new();
    let mut notes = Vec::new();
    match (manifold, structure) {
        (Manifold::Sigma2311, Structure::Tight) => {
            let all = enumerate_manifold(manifold, bounds, atlas)?;
            let d = sigma_tight_d3();
            let hit = all.iter().any(|e| e.d3.as_ref() == Some(&d));
            let lo = if hit { 1 } else { 2 };
            if hit {
                notes.push(format!(
                    "d3 = {d} is realized by a single-knot surgery within bounds"
                ));
            } else {
                notes.push(format!(
                    "d3 = {d} is absent from all {} enumerated single-knot surgeries",
                    all.len()
                ));
            }
            per.insert(
                Flavor::Rational,
                Interval::range(lo, Some(2), "tight Σ(2,3,11): cs = 2"),
            );
            per.insert(
                Flavor::Reciprocal,
                Interval::range(lo, Some(3), "tight Σ(2,3,11): cs_1/Z <= 3"),
            );
            per.insert(
                Flavor::Integer,
                Interval::range(lo, Some(4), "tight Σ(2,3,11): cs_Z <= 4"),
            );
            per.insert(
                Flavor::PlusMinusOne,
                Interval::range(lo, Some(4), "tight Σ(2,3,11): cs_pm1 <= 4"),
            );
        }
        (Manifold::NegSigma2311, Structure::Tight) => {
            per.insert(
                Flavor::Rational,
                Interval::exact(1, "tight -Σ(2,3,11): (-1/2)-surgery on the right trefoil"),
            );
            per.insert(
                Flavor::Reciprocal,
                Interval::exact(1, "tight -Σ(2,3,11): (-1/2)-surgery on the right trefoil"),
            );
            per.insert(
                Flavor::Integer,
                Interval::exact(2, "tight -Σ(2,3,11): cs_Z = 2"),
            );
            per.insert(
                Flavor::PlusMinusOne,
                Interval::exact(2, "tight -Σ(2,3,11): cs_pm1 = 2"),
            );
        }
        (Manifold::Sigma2311 | Manifold::NegSigma2311, Structure::Overtwisted { euler, d3 }) => {
            if euler != &BigInt::from(0) {
                return Err(Error::Domain("homology spheres only carry e = 0".into()));
            }
            let all = enumerate_manifold(manifold, bounds, atlas)?;
            let v = FamilyValue {
                euler: BigInt::from(0),
                d3: Some(d3.clone()),
            };
            let upper = if manifold == Manifold::Sigma2311 {
                Some(3)
            } else {
                None
            };
            for f in Flavor::ALL {
                let ot = realized(&all, f, Some(TightnessStatus::Overtwisted));
                let unknown = realized(&all, f, None);
                let iv = if ot.contains(&v) || unknown.contains(&v) {
                    Interval::exact(1, "realized by a single-knot surgery")
                } else {
                    let hi = match f {
                        Flavor::Reciprocal | Flavor::PlusMinusOne => upper,
                        _ => None,
                    };
                    Interval::range(2, hi, "no single-knot surgery within bounds")
                };
                per.insert(f, iv);
            }
        }
        (Manifold::Lens(m), Structure::TightLens(e)) => {
            let n = 4 * i64::from(m) + 3;
            let e = canonical_euler(e, Some(n));
            let engine = tight_lens_classes(m, atlas)?;
            let listed: BTreeSet<BigInt> = (0..i64::from(m))
                .map(|l| {
                    let v = family_eval("T1.5", &params(&[("m", i64::from(m)), ("l", l)]))?;
                    Ok(canonical_euler(&v.euler, Some(n)))
                })
                .collect::<Result<_>>()?;
            if engine != listed {
                notes.push(format!(
                    "engine tight classes {:?} differ from the closed-form list {:?}",
                    engine.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    listed.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                ));
            }
            if engine.contains(&e) {
                for f in Flavor::ALL {
                    per.insert(
                        f,
                        Interval::exact(1, "(-1)-surgery on T(2,-(2m+1)) at maximal tb"),
                    );
                }
            } else {
                per.insert(
                    Flavor::PlusMinusOne,
                    Interval::exact(2, "tight lens class off the (-1)-surgery list"),
                );
                per.insert(
                    Flavor::Integer,
                    Interval::exact(2, "tight lens class off the (-1)-surgery list"),
                );
                per.insert(
                    Flavor::Rational,
                    Interval::range(1, Some(2), "bounded by cs_Z"),
                );
                per.insert(
                    Flavor::Reciprocal,
                    Interval::range(1, Some(2), "bounded by cs_pm1"),
                );
            }
        }
        (Manifold::Lens(m), Structure::Overtwisted { euler, d3 }) => {
            let mi = i64::from(m);
            let n = 4 * mi + 3;
            let v = FamilyValue {
                euler: canonical_euler(euler, Some(n)),
                d3: Some(d3.clone()),
            };
            let in_list = |id: &str, pts: Vec<Params>| -> Result<bool> {
                for p in pts {
                    if family_eval(id, &p)?.canonical(Some(n)) == v {
                        return Ok(true);
                    }
                }
                Ok(false)
            };
            let first = in_list(
                "T1.7-1",
                (-1..=mi).map(|k| params(&[("m", mi), ("k", k)])).collect(),
            )?;
            let second = in_list("T1.7-2", solve_for_k(mi, d3))?;
            let all = enumerate_manifold(manifold, bounds, atlas)?;
            let any = realized(&all, Flavor::Rational, None).contains(&v);
            let recip = realized(&all, Flavor::Reciprocal, None).contains(&v);
            let pm = if first {
                Interval::exact(1, "first (-1)/(+1) list")
            } else {
                Interval::range(2, Some(3), "not in the first list; three-component bound")
            };
            let z = if first || second {
                Interval::exact(1, "integer surgery lists")
            } else {
                Interval::range(2, None, "not in the integer surgery lists")
            };
            per.insert(Flavor::PlusMinusOne, pm);
            per.insert(Flavor::Integer, z);
            per.insert(
                Flavor::Reciprocal,
                if first || recip {
                    Interval::exact(1, "realized by a reciprocal single-knot surgery")
                } else {
                    Interval::range(2, Some(3), "bounded by cs_pm1")
                },
            );
            per.insert(
                Flavor::Rational,
                if first || second || any {
                    Interval::exact(1, "realized by a single-knot surgery")
                } else {
                    Interval::range(2, None, "no single-knot surgery within bounds")
                },
            );
        }
        _ => {
            return Err(Error::Domain(format!(
                "no bounds for {manifold} with this structure"
            )))
        }
    }
    Ok(CsBounds {
        manifold,
        per_flavor: per,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_xi_values() {
        let b = Bounds::default();
        let r = xi_nm(1, 7, &b).unwrap();
        assert_eq!(
            (r.euler.clone(), r.d3.clone()),
            (BigInt::from(0), Rational::new(15, 2))
        );
        assert!(r.cs_gt_1, "{r:?}");

        let r = xi_nm(2, 0, &b).unwrap();
        assert_eq!(r.euler, BigInt::from(1));
        assert_eq!(r.d3, Rational::new(1, 2) - Rational::new(1, 11));

        let r = xi_nm(1, 0, &b).unwrap();
        assert_eq!(r.d3, Rational::new(1, 2));
        assert!(!r.cs_gt_1);
        assert!(r.witnesses.iter().any(|(id, _)| id == "Table1-4"));
    }

    #[test]
    fn neg_sigma_tight() {
        let b = cs_bounds(
            Manifold::NegSigma2311,
            &Structure::Tight,
            &Bounds::default(),
            &Atlas::standard(),
        )
        .unwrap();
        assert_eq!(
            b.get(Flavor::Rational),
            &Interval::exact(1, b.get(Flavor::Rational).citation.as_str())
        );
        assert_eq!(b.get(Flavor::Integer).lo, 2);
    }

    #[test]
    fn lens_tight_off_list() {
        let b = cs_bounds(
            Manifold::Lens(1),
            &Structure::TightLens(BigInt::from(1)),
            &Bounds::default(),
            &Atlas::standard(),
        )
        .unwrap();
        assert_eq!(b.get(Flavor::PlusMinusOne).lo, 2);
        assert!(b.get(Flavor::Integer).is_exact());
    }
}
