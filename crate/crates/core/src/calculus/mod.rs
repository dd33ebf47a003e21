//! Rewriting rational contact surgeries into chains of `(±1)` push-offs.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{bracket, negcf, stabilization_increments, Rational};
use crate::knotdata::{ContactSurgeryDiagram, LegendrianComponent};

/// One push-off of the base knot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainEntry {
    /// `±1`, or `±1/n` after [`ExpansionChain::compress`].
    pub coeff: Rational,
    /// Cumulative number of stabilizations relative to the base knot.
    pub stabs: u64,
}

impl ChainEntry {
    pub fn sign(&self) -> i64 {
        i64::from(self.coeff.signum())
    }

    /// The `n` in `±1/n`.
    pub fn n(&self) -> BigInt {
        self.coeff
            .reciprocal_n()
            .expect("chain entries are reciprocal integers")
    }
}

/// Ordered push-offs `K_{s_1}(±1) ⊔ K_{s_1,s_2}(±1) ⊔ ...` of a base knot.
///
/// Linking between entries `i < j` is the tb of entry `i`. Stabilization
/// signs, when assigned, are one vector for the whole chain; entry `i`
/// carries its first `stabs` signs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpansionChain {
    pub base: LegendrianComponent,
    pub entries: Vec<ChainEntry>,
    /// The integers `k` split off as `K(1/k)` blocks before the negative tail.
    pub splits: Vec<BigInt>,
    pub signs: Option<Vec<i8>>,
}

impl ExpansionChain {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_stabs(&self) -> u64 {
        self.entries.last().map_or(0, |e| e.stabs)
    }

    pub fn tb(&self, i: usize) -> i64 {
        self.base.tb - self.entries[i].stabs as i64
    }

    pub fn rot(&self, i: usize) -> Option<i64> {
        let s = self.signs.as_ref()?;
        let k = self.entries[i].stabs as usize;
        Some(self.base.rot + s[..k].iter().map(|&x| i64::from(x)).sum::<i64>())
    }

    pub fn rots(&self) -> Option<Vec<i64>> {
        (0..self.len()).map(|i| self.rot(i)).collect()
    }

    pub fn linking(&self, i: usize, j: usize) -> i64 {
        self.tb(i.min(j))
    }

    /// Stabilization increments between consecutive entries.
    pub fn increments(&self) -> Vec<u64> {
        let mut prev = 0;
        self.entries
            .iter()
            .map(|e| {
                let d = e.stabs - prev;
                prev = e.stabs;
                d
            })
            .collect()
    }

    /// Number of leading entries coming from split blocks.
    fn split_entries(&self) -> usize {
        self.splits
            .iter()
            .map(|k| k.abs().to_usize().expect("split size"))
            .sum()
    }

    pub fn is_expanded(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.coeff.abs() == Rational::one())
    }

    /// Merge runs of equal-sign entries with no new stabilization into `±1/n`.
    pub fn compress(&self) -> ExpansionChain {
        let mut out: Vec<ChainEntry> = Vec::new();
        for e in self.expand().entries {
            if let Some(last) = out.last_mut() {
                if last.stabs == e.stabs && last.coeff.signum() == e.coeff.signum() {
                    let n = last.n() + 1;
                    last.coeff = Rational::new(last.coeff.signum(), n);
                    continue;
                }
            }
            out.push(e);
        }
        ExpansionChain {
            entries: out,
            ..self.clone()
        }
    }

    /// Replace every `±1/n` entry by `n` copies of `±1`.
    pub fn expand(&self) -> ExpansionChain {
        let mut out = Vec::new();
        for e in &self.entries {
            let n = e.n().to_usize().expect("entry size");
            let c = Rational::int(e.sign());
            out.extend(std::iter::repeat_n(
                ChainEntry {
                    coeff: c,
                    stabs: e.stabs,
                },
                n,
            ));
        }
        ExpansionChain {
            entries: out,
            ..self.clone()
        }
    }

    /// Recover the contact coefficient: the bracket of the negative tail,
    /// then `r = 1/(k + 1/r')` for each split in reverse.
    pub fn recompose(&self) -> Rational {
        let exp = self.expand();
        let head = exp.split_entries();
        let tail = &exp.entries[head..];
        let mut value = if tail.is_empty() {
            None
        } else {
            let mut prev = 0;
            let cf: Vec<BigInt> = tail
                .iter()
                .map(|e| {
                    let d = e.stabs - prev;
                    prev = e.stabs;
                    BigInt::from(-2) - BigInt::from(d)
                })
                .collect();
            Some(bracket(&cf))
        };
        for k in self.splits.iter().rev() {
            let k = Rational::int(k.clone());
            value = Some(match value {
                None => k.recip(),
                Some(v) => (k + v.recip()).recip(),
            });
        }
        value.expect("empty chain")
    }

    /// Subscript lists as printed: nonzero increments up to each entry.
    fn subscripts(&self, i: usize) -> Vec<u64> {
        let inc = self.increments();
        inc[..=i].iter().copied().filter(|&d| d > 0).collect()
    }
}

impl fmt::Display for ExpansionChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊔ ")?;
            }
            let sub = self.subscripts(i);
            let c = if e.coeff.is_positive() {
                format!("+{}", e.coeff)
            } else {
                e.coeff.to_string()
            };
            match sub.len() {
                0 => write!(f, "K({c})")?,
                1 => write!(f, "K_{}({c})", sub[0])?,
                _ => {
                    let s: Vec<String> = sub.iter().map(u64::to_string).collect();
                    write!(f, "K_{{{}}}({c})", s.join(","))?
                }
            }
        }
        Ok(())
    }
}

fn check_reciprocal(c: &Rational) -> Result<BigInt> {
    c.reciprocal_n()
        .ok_or_else(|| Error::Domain(format!("coefficient {c} is not ±1/n")))
}

/// `K(±1/n)` as `n` unstabilized `(±1)` push-offs.
pub fn replace_reciprocal(k: &LegendrianComponent) -> Result<ExpansionChain> {
    if k.coeff.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let n = check_reciprocal(&k.coeff)?;
    let sign = k.coeff.signum();
    let count = n
        .to_usize()
        .ok_or_else(|| Error::Domain("push-off count too large".into()))?;
    let entries = vec![
        ChainEntry {
            coeff: Rational::int(sign),
            stabs: 0
        };
        count
    ];
    let splits = if sign > 0 {
        vec![BigInt::one(); count]
    } else {
        Vec::new()
    };
    Ok(ExpansionChain {
        base: k.clone(),
        entries,
        splits,
        signs: Some(Vec::new()),
    })
}

/// Transformation lemma. With `canonical_k` absent, `(+1)` entries are split
/// off until the residual is negative (or exactly `1`); otherwise `K(1/k)` is
/// split off first.
pub fn transform(k: &LegendrianComponent, canonical_k: Option<&BigInt>) -> Result<ExpansionChain> {
    if k.coeff.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let mut entries = Vec::new();
    let mut splits = Vec::new();
    let mut r = Some(k.coeff.clone());

    if let Some(kk) = canonical_k {
        if kk.is_zero() {
            return Err(Error::Domain("split integer k must be nonzero".into()));
        }
        let count = kk
            .abs()
            .to_usize()
            .ok_or_else(|| Error::Domain("split too large".into()))?;
        let c = Rational::int(if kk.is_positive() { 1 } else { -1 });
        entries.extend(std::iter::repeat_n(
            ChainEntry { coeff: c, stabs: 0 },
            count,
        ));
        splits.push(kk.clone());
        let rest = k.coeff.recip() - Rational::int(kk.clone());
        r = if rest.is_zero() {
            None
        } else {
            Some(rest.recip())
        };
    }

    while let Some(cur) = r.clone() {
        if !cur.is_positive() {
            break;
        }
        entries.push(ChainEntry {
            coeff: Rational::one(),
            stabs: 0,
        });
        splits.push(BigInt::one());
        r = if cur == Rational::one() {
            None
        } else {
            Some((cur.recip() - Rational::one()).recip())
        };
    }

    if let Some(neg) = r {
        let cf = negcf(&neg)?;
        let mut stabs = 0;
        for d in stabilization_increments(&cf) {
            stabs += d;
            entries.push(ChainEntry {
                coeff: Rational::int(-1),
                stabs,
            });
        }
    }
    let signs = (entries.last().map_or(0, |e: &ChainEntry| e.stabs) == 0).then(Vec::new);
    Ok(ExpansionChain {
        base: k.clone(),
        entries,
        splits,
        signs,
    })
}

/// `K(1/n) ⊔ K(-1/n)` with the second a push-off of the first.
pub fn cancellation_pair(k: &LegendrianComponent, n: u64) -> ContactSurgeryDiagram {
    assert!(n >= 1, "cancellation pair needs n >= 1");
    let mut a = k.clone();
    a.coeff = Rational::new(1, n);
    let mut b = k.clone();
    b.name = format!("{}'", k.name);
    b.coeff = Rational::new(-1, n);
    ContactSurgeryDiagram::new(vec![a, b], vec![vec![0, k.tb], vec![k.tb, 0]])
}

/// Every rotation vector reachable by choosing stabilization signs, one
/// representative sign assignment per distinct vector.
pub fn enumerate_sign_assignments(chain: &ExpansionChain) -> Vec<ExpansionChain> {
    let steps: Vec<u64> = chain.increments().into_iter().filter(|&d| d > 0).collect();
    let mut partial: Vec<Vec<i8>> = vec![Vec::new()];
    for d in steps {
        let mut next = Vec::new();
        for prefix in &partial {
            // `plus` positive signs followed by `d - plus` negative ones.
            for plus in (0..=d).rev() {
                let mut v = prefix.clone();
                v.extend(std::iter::repeat_n(1i8, plus as usize));
                v.extend(std::iter::repeat_n(-1i8, (d - plus) as usize));
                next.push(v);
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|signs| ExpansionChain {
            signs: Some(signs),
            ..chain.clone()
        })
        .collect()
}

/// Assign an explicit sign vector (`+1`/`-1` entries).
pub fn assign_signs(chain: &ExpansionChain, signs: &[i8]) -> Result<ExpansionChain> {
    if signs.len() as u64 != chain.total_stabs() {
        return Err(Error::IncompleteSigns(format!(
            "chain of {} needs {} signs, got {}",
            chain.base.name,
            chain.total_stabs(),
            signs.len()
        )));
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::Domain("stabilization signs must be +1 or -1".into()));
    }
    Ok(ExpansionChain {
        signs: Some(signs.to_vec()),
        ..chain.clone()
    })
}

/// Substitute the named component of `ambient` by the chain's entries.
pub fn chain_to_diagram(
    chain: &ExpansionChain,
    ambient: &ContactSurgeryDiagram,
    replaced: &str,
) -> Result<ContactSurgeryDiagram> {
    let idx = ambient.index_of(replaced)?;
    let rots = chain.rots().ok_or_else(|| {
        Error::IncompleteSigns(format!("chain of {replaced} has unassigned signs"))
    })?;
    let k = chain.len();
    let single = k == 1;
    let mut comps = Vec::new();
    // map new index -> (old index, chain entry)
    let mut origin: Vec<(usize, Option<usize>)> = Vec::new();
    for (i, c) in ambient.components.iter().enumerate() {
        if i != idx {
            comps.push(c.clone());
            origin.push((i, None));
            continue;
        }
        for (e, entry) in chain.entries.iter().enumerate() {
            let mut n = chain.base.clone();
            if !single {
                n.name = format!("{}.{}", replaced, e + 1);
            }
            n.tb = chain.tb(e);
            n.rot = rots[e];
            n.coeff = entry.coeff.clone();
            comps.push(n);
            origin.push((i, Some(e)));
        }
    }
    let total = comps.len();
    let mut linking = vec![vec![0i64; total]; total];
    for a in 0..total {
        for b in 0..total {
            if a == b {
                continue;
            }
            linking[a][b] = match (origin[a], origin[b]) {
                ((_, Some(x)), (_, Some(y))) => chain.linking(x, y),
                ((i, _), (j, _)) => ambient.linking[i][j],
            };
        }
    }
    Ok(ContactSurgeryDiagram::new(comps, linking))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::q;
    use std::collections::BTreeSet;

    fn comp(tb: i64, rot: i64, c: Rational) -> LegendrianComponent {
        LegendrianComponent::custom("K", tb, rot, c)
    }

    #[test]
    fn replace_examples() {
        let c = replace_reciprocal(&comp(-1, 0, q(1, 4))).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.entries.iter().all(|e| e.coeff == q(1, 1) && e.stabs == 0));
        assert_eq!(c.linking(0, 3), -1);
        assert_eq!(c.rots().unwrap(), vec![0; 4]);
        assert_eq!(replace_reciprocal(&comp(-3, 0, q(-1, 1))).unwrap().len(), 1);
        let c = replace_reciprocal(&comp(-2, 1, q(-1, 2))).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.linking(0, 1), -2);
        assert!(replace_reciprocal(&comp(-2, 1, q(2, 3))).is_err());
    }

    #[test]
    fn left_trefoil_transform() {
        for t in [-6i64, -7, -9] {
            let c = transform(&comp(t, 1, q(-1 - 2 * t, 2)), None).unwrap();
            let shown = c.compress().to_string();
            assert_eq!(shown, format!("K(+1) ⊔ K_1(-1/{}) ⊔ K_{{1,1}}(-1)", -t - 2));
            assert_eq!(c.recompose(), q(-1 - 2 * t, 2));
        }
    }

    #[test]
    fn negative_integer_transform() {
        let c = transform(&comp(-1, 0, q(-2, 1)), None).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.entries[0].stabs, 1);
        assert_eq!(c.entries[0].coeff, q(-1, 1));
        assert_eq!(c.to_string(), "K_1(-1)");
    }

    #[test]
    fn torus_knot_transform() {
        let m = 1i64;
        for t in [-9i64, -10, -12] {
            let n = -4 * m - 3 - t;
            let c = transform(&comp(t, 1, q(n, 1)), None).unwrap().compress();
            assert_eq!(
                c.to_string(),
                format!("K(+1) ⊔ K_1({})", q(-1, -4 * m - 4 - t))
            );
        }
    }

    #[test]
    fn reciprocal_transform_matches_replacement() {
        for c in [q(1, 3), q(-1, 3), q(1, 1), q(-1, 1), q(-1, 5)] {
            let k = comp(-2, 1, c);
            let a = transform(&k, None).unwrap();
            let b = replace_reciprocal(&k).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn explicit_split() {
        let k = comp(-3, 0, q(5, 2));
        let c = transform(&k, Some(&BigInt::from(2))).unwrap();
        assert_eq!(c.splits[0], BigInt::from(2));
        assert_eq!(c.recompose(), q(5, 2));
        let c = transform(&k, Some(&BigInt::from(-1))).unwrap();
        assert_eq!(c.recompose(), q(5, 2));
        let c = transform(&comp(-3, 0, q(1, 2)), Some(&BigInt::from(2))).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.recompose(), q(1, 2));
    }

    #[test]
    fn sign_enumeration_examples() {
        // increments (0, 1, 1): base chain -11/9 style with a leading zero step
        let base = comp(-5, 0, q(1, 1));
        let chain = ExpansionChain {
            base,
            entries: vec![
                ChainEntry {
                    coeff: q(1, 1),
                    stabs: 0,
                },
                ChainEntry {
                    coeff: q(-1, 1),
                    stabs: 1,
                },
                ChainEntry {
                    coeff: q(-1, 1),
                    stabs: 2,
                },
            ],
            splits: vec![BigInt::one()],
            signs: None,
        };
        let rots: BTreeSet<Vec<i64>> = enumerate_sign_assignments(&chain)
            .iter()
            .map(|c| c.rots().unwrap())
            .collect();
        let want: BTreeSet<Vec<i64>> = [
            vec![0, 1, 2],
            vec![0, 1, 0],
            vec![0, -1, 0],
            vec![0, -1, -2],
        ]
        .into_iter()
        .collect();
        assert_eq!(rots, want);

        let flat = replace_reciprocal(&comp(-2, 1, q(-1, 3))).unwrap();
        assert_eq!(enumerate_sign_assignments(&flat).len(), 1);

        let two = ExpansionChain {
            entries: vec![
                ChainEntry {
                    coeff: q(-1, 1),
                    stabs: 0,
                },
                ChainEntry {
                    coeff: q(-1, 1),
                    stabs: 2,
                },
            ],
            splits: vec![],
            signs: None,
            base: comp(-3, 0, q(-1, 1)),
        };
        let second: Vec<i64> = enumerate_sign_assignments(&two)
            .iter()
            .map(|c| c.rot(1).unwrap())
            .collect();
        assert_eq!(second, vec![2, 0, -2]);
    }

    #[test]
    fn chain_to_diagram_thm_1_1() {
        let t = -6;
        let k = comp(t, 1, q(-1 - 2 * t, 2));
        let chain = transform(&k, None).unwrap().compress();
        let chain = enumerate_sign_assignments(&chain).remove(0);
        let d = chain_to_diagram(&chain, &ContactSurgeryDiagram::single(k), "K").unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.linking[0][1], -6);
        assert_eq!(d.linking[0][2], -6);
        assert_eq!(d.linking[1][2], -7);
        assert_eq!(d.components[1].coeff, q(-1, 4));
    }

    #[test]
    fn chain_to_diagram_inherits_ambient_linking() {
        let a = LegendrianComponent::custom("A", -2, 1, q(1, 1));
        let b = LegendrianComponent::custom("B", -1, 0, q(-1, 1));
        let mut amb = ContactSurgeryDiagram::unlinked(vec![a.clone(), b]);
        amb.set_link(0, 1, 3);
        let pair = cancellation_pair(&a, 1);
        let chain = ExpansionChain {
            base: a.clone(),
            entries: vec![
                ChainEntry {
                    coeff: q(1, 1),
                    stabs: 0,
                },
                ChainEntry {
                    coeff: q(-1, 1),
                    stabs: 0,
                },
            ],
            splits: vec![BigInt::one()],
            signs: Some(vec![]),
        };
        let d = chain_to_diagram(&chain, &amb, "A").unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.linking[0][1], pair.linking[0][1]);
        assert_eq!(d.linking[0][2], 3);
        assert_eq!(d.linking[1][2], 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.linking[i][j], d.linking[j][i]);
            }
        }
        assert!(chain_to_diagram(&chain, &amb, "Z").is_err());
    }

    #[test]
    fn single_entry_chain_keeps_diagram() {
        let k = comp(-2, 1, q(-1, 1));
        let amb = ContactSurgeryDiagram::single(k.clone());
        let chain = transform(&k, None).unwrap();
        assert_eq!(chain_to_diagram(&chain, &amb, "K").unwrap(), amb);
    }

    #[test]
    fn cancellation_pair_shape() {
        let d = cancellation_pair(&comp(-1, 0, q(1, 1)), 1);
        assert_eq!(d.components[0].coeff, q(1, 1));
        assert_eq!(d.components[1].coeff, q(-1, 1));
        assert_eq!(d.linking[0][1], -1);
        let d = cancellation_pair(&comp(-2, 1, q(1, 1)), 3);
        assert_eq!(d.components[1].coeff, q(-1, 3));
    }
}
