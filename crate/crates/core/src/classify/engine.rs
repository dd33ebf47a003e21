use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use super::families::{family, family_values, FamilyValue};
use super::{
    canonical_euler, knot_tightness, unknot_tightness, Bounds, Flavor, Manifold, Source,
    TemplateKey, TightnessStatus, TightnessVerdict,
};
use crate::calculus::replace_reciprocal;
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::invariants::{d3_reduced, euler_from_images, reduce, SignPolicy};
use crate::knotdata::{Atlas, ContactSurgeryDiagram, LegendrianComponent};

/// One realized contact structure with surgery number one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cs1Entry {
    pub manifold: Manifold,
    /// Canonical representative in `[0, (4m+3)/2]`; `0` on homology spheres.
    pub euler: BigInt,
    pub d3: Option<Rational>,
    pub flavor: Flavor,
    pub key: TemplateKey,
    pub rot: i64,
    /// Rotation numbers of the `(±1)` push-off chain.
    pub chain_rots: Vec<i64>,
    pub tightness: Option<TightnessVerdict>,
}

impl Cs1Entry {
    pub fn value(&self) -> FamilyValue {
        FamilyValue {
            euler: self.euler.clone(),
            d3: self.d3.clone(),
        }
    }

    pub fn status(&self) -> Option<TightnessStatus> {
        self.tightness.as_ref().map(|v| v.status)
    }

    fn sort_key(&self) -> (FamilyValue, Flavor, TemplateKey, i64, Vec<i64>) {
        (
            self.value(),
            self.flavor,
            self.key,
            self.rot,
            self.chain_rots.clone(),
        )
    }
}

/// Every `(e, d3)` obtained from the single-knot surgery `key`, one entry per
/// rotation number and stabilization choice.
pub fn engine_at(key: &TemplateKey, atlas: &Atlas) -> Result<Vec<Cs1Entry>> {
    let coeff = key.coeff();
    if coeff.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let label = key.knot_label();
    let entry = atlas.lookup(&label)?;
    let manifold = key.manifold();
    let modulus = manifold.modulus();
    let flavor = Flavor::of(&coeff);
    let mut out = Vec::new();
    for rot in atlas.realizations(&label, key.t)? {
        let d = ContactSurgeryDiagram::single(LegendrianComponent::new(
            "K",
            &label,
            key.t,
            rot,
            coeff.clone(),
        ));
        for red in reduce(&d, &SignPolicy::Enumerate)? {
            let d3 = d3_reduced(&red.diagram)?;
            let chain = match &red.chains[0] {
                Some(c) => c.clone(),
                None => replace_reciprocal(&d.components[0])?,
            };
            let euler = match modulus {
                None => BigInt::from(0),
                Some(n) => {
                    let ek = euler_from_images(&chain).ok_or_else(|| {
                        Error::IncompleteSigns("chain without rotation numbers".into())
                    })?;
                    canonical_euler(
                        &(ek * key.meridian_factor()).mod_floor(&BigInt::from(n)),
                        modulus,
                    )
                }
            };
            let tightness = match key.source {
                Source::Standard(_) | Source::Dual(_) => {
                    let plus = (-1 - key.t + rot) / 2;
                    let minus = (-1 - key.t - rot) / 2;
                    let first = chain.signs.as_ref().and_then(|s| s.first().copied());
                    unknot_tightness(key.t, plus as u64, minus as u64, &coeff, first).ok()
                }
                _ => knot_tightness(&coeff, key.t < entry.max_tb()),
            };
            out.push(Cs1Entry {
                manifold,
                euler,
                d3,
                flavor,
                key: *key,
                rot,
                chain_rots: red.rots(),
                tightness,
            });
        }
    }
    Ok(out)
}

/// The single-knot surgeries enumerated for a manifold within `bounds`.
pub fn manifold_keys(
    manifold: Manifold,
    bounds: &Bounds,
    atlas: &Atlas,
) -> Result<Vec<TemplateKey>> {
    let mut keys = Vec::new();
    let mut push_range = |source: Source, m: i64, lo: i64, hi: i64| {
        for t in lo..=hi {
            let k = TemplateKey { source, m, t };
            if !k.coeff().is_zero() {
                keys.push(k);
            }
        }
    };
    match manifold {
        Manifold::Sigma2311 | Manifold::NegSigma2311 => {
            let sources = if manifold == Manifold::Sigma2311 {
                [Source::K5a1, Source::LeftTrefoil]
            } else {
                [Source::NegK5a1, Source::RightTrefoil]
            };
            for s in sources {
                let max = atlas
                    .lookup(
                        &TemplateKey {
                            source: s,
                            m: 0,
                            t: 0,
                        }
                        .knot_label(),
                    )?
                    .max_tb();
                push_range(s, 0, bounds.sigma_tb_min, max);
            }
        }
        Manifold::Lens(m) => {
            let m = i64::from(m);
            let torus = TemplateKey {
                source: Source::Torus,
                m,
                t: 0,
            }
            .knot_label();
            let max = atlas.lookup(&torus)?.max_tb();
            push_range(Source::Torus, m, bounds.tb_min, max);
            for k in -bounds.k_abs..=bounds.k_abs {
                push_range(Source::Standard(k), m, bounds.tb_min, -1);
                push_range(Source::Dual(k), m, bounds.tb_min, -1);
            }
        }
    }
    Ok(keys)
}

/// All realized structures on `manifold`, deduplicated by
/// `(e, d3, flavor, tightness)` under `e ↦ -e`, in canonical order.
pub fn enumerate_manifold(
    manifold: Manifold,
    bounds: &Bounds,
    atlas: &Atlas,
) -> Result<Vec<Cs1Entry>> {
    let keys = manifold_keys(manifold, bounds, atlas)?;
    let batches: Vec<Vec<Cs1Entry>> = keys
        .par_iter()
        .map(|k| engine_at(k, atlas))
        .collect::<Result<_>>()?;
    Ok(dedup(batches.into_iter().flatten()))
}

fn dedup(entries: impl Iterator<Item = Cs1Entry>) -> Vec<Cs1Entry> {
    let mut best: BTreeMap<(FamilyValue, Flavor, Option<TightnessStatus>), Cs1Entry> =
        BTreeMap::new();
    for e in entries {
        let k = (e.value(), e.flavor, e.status());
        match best.get(&k) {
            Some(old) if old.sort_key() <= e.sort_key() => {}
            _ => {
                best.insert(k, e);
            }
        }
    }
    best.into_values().collect()
}

/// `(e, d3)` values whose `target` surgery number is shown to be one by some
/// entry, restricted to a tightness status when given.
pub fn realized(
    entries: &[Cs1Entry],
    target: Flavor,
    status: Option<TightnessStatus>,
) -> BTreeSet<FamilyValue> {
    entries
        .iter()
        .filter(|e| e.flavor.certifies(target))
        .filter(|e| status.is_none() || e.status() == status)
        .map(Cs1Entry::value)
        .collect()
}

/// Canonical Euler classes of the tight structures from contact `(-1)`-surgery
/// on `T(2,-(2m+1))` at maximal tb.
pub fn tight_lens_classes(m: u32, atlas: &Atlas) -> Result<BTreeSet<BigInt>> {
    let m64 = i64::from(m);
    let key = TemplateKey {
        source: Source::Torus,
        m: m64,
        t: -4 * m64 - 2,
    };
    Ok(engine_at(&key, atlas)?
        .into_iter()
        .filter(|e| e.tightness.as_ref().is_some_and(|v| v.is_tight()))
        .map(|e| e.euler)
        .collect())
}

/// One surgery key of a family-vs-engine comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCheck {
    pub key: TemplateKey,
    /// Union of every family's values at this key.
    pub family: BTreeSet<FamilyValue>,
    /// Overtwisted engine values at this key.
    pub engine: BTreeSet<FamilyValue>,
    /// Families contributing to `family`.
    pub contributors: Vec<&'static str>,
}

impl PointCheck {
    pub fn agrees(&self) -> bool {
        self.family == self.engine
    }

    pub fn missing(&self) -> BTreeSet<FamilyValue> {
        self.family.difference(&self.engine).cloned().collect()
    }

    pub fn extra(&self) -> BTreeSet<FamilyValue> {
        self.engine.difference(&self.family).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub id: String,
    pub points: Vec<PointCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        !self.points.is_empty() && self.points.iter().all(PointCheck::agrees)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &PointCheck> {
        self.points.iter().filter(|p| !p.agrees())
    }
}

/// Compares a table family against the engine at every surgery key its grid
/// reaches for `m ∈ [1, bounds.m_max]`.
///
/// Several rows may share a key, so the family side is the union over every
/// table row mapping a grid point to that key.
pub fn verify_family(id: &str, bounds: &Bounds, atlas: &Atlas) -> Result<VerifyReport> {
    let rec = family(id)?;
    if !rec.has_template() {
        return Err(Error::UnknownFamily(format!(
            "{id} has no surgery template"
        )));
    }
    let table: Vec<_> = super::registry()
        .into_iter()
        .filter(|r| r.id.starts_with("Table1-"))
        .collect();
    let mut points = Vec::new();
    for m in 1..=bounds.m_max {
        let modulus = rec.manifold(m).modulus();
        let keys: BTreeSet<TemplateKey> = rec
            .grid(m, bounds)
            .iter()
            .filter_map(|p| rec.template_key(p))
            .collect();
        let mut by_key: BTreeMap<TemplateKey, (BTreeSet<FamilyValue>, BTreeSet<&'static str>)> =
            keys.iter().map(|k| (*k, Default::default())).collect();
        let sources: Vec<_> = if rec.id.starts_with("Table1-") {
            table.clone()
        } else {
            vec![rec.clone()]
        };
        for other in &sources {
            for p in other.grid(m, bounds) {
                let Some(k) = other.template_key(&p) else {
                    continue;
                };
                if let Some((vals, ids)) = by_key.get_mut(&k) {
                    vals.insert(other.eval_unchecked(&p).canonical(modulus));
                    ids.insert(other.id);
                }
            }
        }
        let checks: Vec<PointCheck> = by_key
            .into_par_iter()
            .map(|(key, (family, ids))| {
                let engine = engine_at(&key, atlas)?
                    .into_iter()
                    .filter(|e| e.status() != Some(TightnessStatus::Tight))
                    .map(|e| {
                        let v = e.value();
                        // Euler-only families carry no d3.
                        if family.iter().all(|f| f.d3.is_none()) {
                            FamilyValue { d3: None, ..v }
                        } else {
                            v
                        }
                    })
                    .collect();
                Ok(PointCheck {
                    key,
                    family,
                    engine,
                    contributors: ids.into_iter().collect(),
                })
            })
            .collect::<Result<_>>()?;
        points.extend(checks);
    }
    Ok(VerifyReport {
        id: id.to_string(),
        points,
    })
}

/// Canonical value set of one family over its whole grid at `m`.
pub fn family_value_set(id: &str, m: i64, bounds: &Bounds) -> Result<BTreeSet<FamilyValue>> {
    Ok(family_values(&family(id)?, m, bounds))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_5_at_m_1() {
        let key = TemplateKey {
            source: Source::Standard(0),
            m: 1,
            t: -2,
        };
        assert_eq!(key.coeff(), Rational::new(1, 4));
        let vals: BTreeSet<_> = engine_at(&key, &Atlas::standard())
            .unwrap()
            .iter()
            .map(Cs1Entry::value)
            .collect();
        let want: BTreeSet<_> = [FamilyValue {
            euler: BigInt::from(1),
            d3: Some(Rational::new(1, 2) - Rational::new(1, 7)),
        }]
        .into_iter()
        .collect();
        assert_eq!(vals, want);
    }

    #[test]
    fn tight_classes_at_m_1() {
        let got = tight_lens_classes(1, &Atlas::standard()).unwrap();
        assert_eq!(got, [BigInt::from(3)].into_iter().collect());
    }

    #[test]
    fn flavors_are_monotone() {
        let b = Bounds {
            tb_min: -5,
            k_abs: 2,
            ..Bounds::default()
        };
        let all = enumerate_manifold(Manifold::Lens(1), &b, &Atlas::standard()).unwrap();
        let pm = realized(&all, Flavor::PlusMinusOne, None);
        let rec = realized(&all, Flavor::Reciprocal, None);
        let z = realized(&all, Flavor::Integer, None);
        let q = realized(&all, Flavor::Rational, None);
        assert!(pm.is_subset(&rec) && rec.is_subset(&q) && z.is_subset(&q));
    }
}
