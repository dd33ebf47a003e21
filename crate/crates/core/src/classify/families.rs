use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use super::{canonical_euler, Bounds, Flavor, Manifold, Params, Source, TemplateKey};
use crate::calculus::transform;
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::knotdata::{Atlas, ContactSurgeryDiagram, LegendrianComponent};

/// Largest parameter magnitude accepted by the evaluators, which keeps every
/// intermediate product inside `i128`.
const PARAM_LIMIT: i64 = 1_000_000;

/// `(e, d3)` of one family point. `euler` lies in `[0, 4m+3)` for lens
/// spaces and is `0` on homology spheres; `d3` is absent for families that
/// only record Euler classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyValue {
    pub euler: BigInt,
    pub d3: Option<Rational>,
}

impl FamilyValue {
    /// Representative under `e ↦ -e`.
    pub fn canonical(&self, modulus: Option<i64>) -> FamilyValue {
        FamilyValue {
            euler: canonical_euler(&self.euler, modulus),
            d3: self.d3.clone(),
        }
    }
}

impl fmt::Display for FamilyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.d3 {
            Some(d) => write!(f, "({}, {})", self.euler, d),
            None => write!(f, "({}, -)", self.euler),
        }
    }
}

/// Closed-form family of contact structures with surgery number one.
#[derive(Clone)]
pub struct FamilyRecord {
    pub id: &'static str,
    pub target: Target,
    pub flavor: Flavor,
    /// Whether the family lists tight structures.
    pub tight: bool,
    pub params: &'static [&'static str],
    pub domain: &'static str,
    pub citation: &'static str,
    check: fn(&Params) -> bool,
    eval: fn(&Params) -> FamilyValue,
    grid: fn(i64, &Bounds) -> Vec<Params>,
    template: Option<fn(&Params) -> Option<TemplateKey>>,
    pub template_params: &'static [&'static str],
    /// The row of the surgery-description table, where there is one.
    pub surgery_row: Option<&'static str>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Sigma2311,
    NegSigma2311,
    Lens,
}

impl fmt::Debug for FamilyRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyRecord")
            .field("id", &self.id)
            .field("params", &self.params)
            .finish()
    }
}

impl FamilyRecord {
    pub fn manifold(&self, m: i64) -> Manifold {
        match self.target {
            Target::Sigma2311 => Manifold::Sigma2311,
            Target::NegSigma2311 => Manifold::NegSigma2311,
            Target::Lens => Manifold::Lens(m as u32),
        }
    }

    pub fn has_template(&self) -> bool {
        self.template.is_some()
    }

    /// Every point of the family inside `bounds`, at fixed `m` for lens
    /// families.
    pub fn grid(&self, m: i64, bounds: &Bounds) -> Vec<Params> {
        (self.grid)(m, bounds)
    }

    pub fn in_domain(&self, p: &Params) -> bool {
        self.params.iter().all(|k| p.contains_key(*k)) && (self.check)(p)
    }

    /// The single-knot surgery a grid point comes from.
    pub fn template_key(&self, p: &Params) -> Option<TemplateKey> {
        self.template.and_then(|f| f(p))
    }

    pub fn eval_unchecked(&self, p: &Params) -> FamilyValue {
        (self.eval)(p)
    }
}

fn g(p: &Params, k: &str) -> i64 {
    p[k]
}

fn gi(p: &Params, k: &str) -> i128 {
    i128::from(p[k])
}

fn fr(n: i128, d: i128) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn half() -> Rational {
    Rational::new(1, 2)
}

fn modn(x: i128, n: i128) -> i128 {
    x.rem_euclid(n)
}

/// `base^exp mod n`; `exp >= 0` is guaranteed by every caller's domain.
fn pw(base: i128, exp: i128, n: i128) -> i128 {
    assert!(exp >= 0, "negative exponent {exp} reached an evaluator");
    let mut b = modn(base, n);
    let mut e = exp;
    let mut acc = 1 % n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % n;
        }
        b = b * b % n;
        e >>= 1;
    }
    acc
}

fn lens_value(e: i128, n: i128, d3: Rational) -> FamilyValue {
    FamilyValue {
        euler: BigInt::from(modn(e, n)),
        d3: Some(d3),
    }
}

fn sphere_value(d3: Rational) -> FamilyValue {
    FamilyValue {
        euler: BigInt::from(0),
        d3: Some(d3),
    }
}

fn nn(p: &Params) -> i128 {
    4 * gi(p, "m") + 3
}

type Axis<'a> = (&'a str, &'a dyn Fn(&Params) -> Vec<i64>);

/// Cartesian product of axes whose ranges may depend on earlier axes.
fn product(seed: Params, axes: &[Axis]) -> Vec<Params> {
    let mut out = vec![seed];
    for (name, axis) in axes {
        let mut next = Vec::new();
        for p in &out {
            for v in axis(p) {
                let mut q = p.clone();
                q.insert((*name).to_string(), v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn with_m(m: i64) -> Params {
    let mut p = Params::new();
    p.insert("m".into(), m);
    p
}

fn range(lo: i64, hi: i64) -> Vec<i64> {
    if lo > hi {
        Vec::new()
    } else {
        (lo..=hi).collect()
    }
}

fn signs(_: &Params) -> Vec<i64> {
    vec![1, -1]
}

fn even_small(_: &Params) -> Vec<i64> {
    vec![-2, 0, 2]
}

fn even_four(_: &Params) -> Vec<i64> {
    vec![-4, -2, 0, 2, 4]
}

fn odd_three(_: &Params) -> Vec<i64> {
    vec![-3, -1, 1, 3]
}

fn sign_ok(p: &Params, k: &str) -> bool {
    matches!(p.get(k), Some(1) | Some(-1))
}

fn in_set(p: &Params, k: &str, set: &[i64]) -> bool {
    p.get(k).is_some_and(|v| set.contains(v))
}

fn between(p: &Params, k: &str, lo: i64, hi: i64) -> bool {
    p.get(k).is_some_and(|v| (lo..=hi).contains(v))
}

fn m_ok(p: &Params) -> bool {
    p.get("m").is_some_and(|&m| m >= 1)
}

fn std_key(p: &Params, k: i64, t: i64) -> Option<TemplateKey> {
    Some(TemplateKey {
        source: Source::Standard(k),
        m: g(p, "m"),
        t,
    })
}

fn dual_key(p: &Params, k: i64, t: i64) -> Option<TemplateKey> {
    Some(TemplateKey {
        source: Source::Dual(k),
        m: g(p, "m"),
        t,
    })
}

fn t_param(p: &Params) -> Option<i64> {
    p.get("t").copied()
}

fn sphere_key(source: Source, p: &Params) -> Option<TemplateKey> {
    t_param(p).map(|t| TemplateKey { source, m: 0, t })
}

/// Registry of every family, in display order.
pub fn registry() -> Vec<FamilyRecord> {
    let mut v = theorem_records();
    v.extend(table_records());
    v
}

pub fn family(id: &str) -> Result<FamilyRecord> {
    // The second lists of the two Brieskorn theorems are split by sign of m.
    let id = match id {
        "T1.1-2" => "T1.1-2a",
        "T1.3-2" => "T1.3-2a",
        other => other,
    };
    registry()
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

/// Exact `(e, d3)` of a family point.
pub fn family_eval(id: &str, p: &Params) -> Result<FamilyValue> {
    let rec = family(id)?;
    for name in rec.params {
        if !p.contains_key(*name) {
            return Err(Error::OutOfDomain(format!("{id} needs parameter `{name}`")));
        }
    }
    if let Some(extra) = p.keys().find(|k| !rec.params.contains(&k.as_str())) {
        return Err(Error::OutOfDomain(format!(
            "{id} has no parameter `{extra}`"
        )));
    }
    if p.values().any(|v| v.abs() > PARAM_LIMIT) {
        return Err(Error::OutOfDomain(format!(
            "parameters of {id} are limited to |x| <= {PARAM_LIMIT}"
        )));
    }
    if !(rec.check)(p) {
        return Err(Error::OutOfDomain(format!("{id} requires {}", rec.domain)));
    }
    Ok((rec.eval)(p))
}

/// A surgery description: the knot, its push-off chain and one diagram per
/// admissible rotation number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryTemplate {
    pub key: TemplateKey,
    pub chain: String,
    pub diagrams: Vec<ContactSurgeryDiagram>,
}

pub fn family_surgery_description(id: &str, p: &Params) -> Result<SurgeryTemplate> {
    let rec = family(id)?;
    let f = rec
        .template
        .ok_or_else(|| Error::UnknownFamily(format!("{id} has no surgery template")))?;
    for name in rec.template_params {
        if !p.contains_key(*name) {
            return Err(Error::OutOfDomain(format!(
                "template of {id} needs `{name}`"
            )));
        }
    }
    let key =
        f(p).ok_or_else(|| Error::OutOfDomain(format!("{id}: no template at these parameters")))?;
    template_for_key(&key)
}

/// The chain and diagrams for a concrete key.
pub fn template_for_key(key: &TemplateKey) -> Result<SurgeryTemplate> {
    let coeff = key.coeff();
    if coeff.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let label = key.knot_label();
    let atlas = Atlas::standard();
    let rots = atlas.realizations(&label, key.t)?;
    if rots.is_empty() {
        return Err(Error::OutOfDomain(format!(
            "{label} has no Legendrian realization with tb {}",
            key.t
        )));
    }
    let base = LegendrianComponent::new(
        "K",
        &label,
        key.t,
        *rots.iter().next().unwrap(),
        coeff.clone(),
    );
    let chain = if coeff.reciprocal_n().is_some() {
        format!("K({coeff})")
    } else {
        transform(&base, None)?.compress().to_string()
    };
    let diagrams = rots
        .iter()
        .map(|&r| {
            ContactSurgeryDiagram::single(LegendrianComponent::new(
                "K",
                &label,
                key.t,
                r,
                coeff.clone(),
            ))
        })
        .collect();
    Ok(SurgeryTemplate {
        key: *key,
        chain,
        diagrams,
    })
}

fn theorem_records() -> Vec<FamilyRecord> {
    vec![
        FamilyRecord {
            id: "T1.1-1",
            target: Target::Sigma2311,
            flavor: Flavor::Integer,
            tight: false,
            params: &["m"],
            domain: "m >= 4",
            citation: "Theorem 1.1(1): d3 = m(3-m)-1 for m >= 4",
            check: |p| g(p, "m") >= 4,
            eval: |p| {
                let m = gi(p, "m");
                sphere_value(fr(m * (3 - m) - 1, 1))
            },
            grid: |_, b| product(Params::new(), &[("m", &|_| range(4, -3 - b.sigma_tb_min))]),
            template: Some(|p| sphere_key(Source::K5a1, p)),
            template_params: &["t"],
            surgery_row: None,
        },
        FamilyRecord {
            id: "T1.1-2a",
            target: Target::Sigma2311,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m"],
            domain: "m >= -3",
            citation: "Theorem 1.1(2): d3 = -2(m(m+2)+2) for m >= -3",
            check: |p| g(p, "m") >= -3,
            eval: |p| {
                let m = gi(p, "m");
                sphere_value(fr(-2 * (m * (m + 2) + 2), 1))
            },
            grid: |_, b| product(Params::new(), &[("m", &|_| range(-3, -3 + 2 * b.n_abs))]),
            template: Some(|p| sphere_key(Source::LeftTrefoil, p)),
            template_params: &["t"],
            surgery_row: None,
        },
        FamilyRecord {
            id: "T1.1-2b",
            target: Target::Sigma2311,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m"],
            domain: "m <= -3",
            citation: "Theorem 1.1(2): d3 = -2(m(m+3)+3) for m <= -3",
            check: |p| g(p, "m") <= -3,
            eval: |p| {
                let m = gi(p, "m");
                sphere_value(fr(-2 * (m * (m + 3) + 3), 1))
            },
            grid: |_, b| product(Params::new(), &[("m", &|_| range(b.sigma_tb_min + 4, -3))]),
            template: Some(|p| sphere_key(Source::LeftTrefoil, p)),
            template_params: &["t"],
            surgery_row: None,
        },
        FamilyRecord {
            id: "T1.3-1",
            target: Target::NegSigma2311,
            flavor: Flavor::Integer,
            tight: false,
            params: &["m"],
            domain: "m >= 0",
            citation: "Theorem 1.3(1): d3 = m(m-1) for m >= 0",
            check: |p| g(p, "m") >= 0,
            eval: |p| {
                let m = gi(p, "m");
                sphere_value(fr(m * (m - 1), 1))
            },
            grid: |_, b| product(Params::new(), &[("m", &|_| range(0, 1 - b.sigma_tb_min))]),
            template: Some(|p| sphere_key(Source::NegK5a1, p)),
            template_params: &["t"],
            surgery_row: None,
        },
        FamilyRecord {
            id: "T1.3-2a",
            target: Target::NegSigma2311,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m"],
            domain: "m <= -1",
            citation: "Theorem 1.3(2): d3 = 2m(m+1) for m <= -1",
            check: |p| g(p, "m") <= -1,
            eval: |p| {
                let m = gi(p, "m");
                sphere_value(fr(2 * m * (m + 1), 1))
            },
            grid: |_, b| product(Params::new(), &[("m", &|_| range(b.sigma_tb_min - 1, -1))]),
            template: Some(|p| sphere_key(Source::RightTrefoil, p)),
            template_params: &["t"],
            surgery_row: None,
        },
        FamilyRecord {
            id: "T1.3-2b",
            target: Target::NegSigma2311,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m"],
            domain: "m <= -1",
            citation: "Theorem 1.3(2): d3 = 2(m+1)^2 for m <= -1",
            check: |p| g(p, "m") <= -1,
            eval: |p| {
                let m = gi(p, "m");
                sphere_value(fr(2 * (m + 1) * (m + 1), 1))
            },
            grid: |_, b| product(Params::new(), &[("m", &|_| range(b.sigma_tb_min - 1, -1))]),
            template: Some(|p| sphere_key(Source::RightTrefoil, p)),
            template_params: &["t"],
            surgery_row: None,
        },
        FamilyRecord {
            id: "T1.5",
            target: Target::Lens,
            flavor: Flavor::PlusMinusOne,
            tight: true,
            params: &["m", "l"],
            domain: "m >= 1, 0 <= l <= m-1",
            citation: "Theorem 1.5: e = 2m(l+1)+2+4l mod 4m+3 for l in {0,...,m-1}",
            check: |p| m_ok(p) && between(p, "l", 0, g(p, "m") - 1),
            eval: |p| {
                let (m, l) = (gi(p, "m"), gi(p, "l"));
                FamilyValue {
                    euler: BigInt::from(modn(2 * m * (l + 1) + 2 + 4 * l, nn(p))),
                    d3: None,
                }
            },
            grid: |m, _| product(with_m(m), &[("l", &|p| range(0, g(p, "m") - 1))]),
            template: Some(|p| {
                Some(TemplateKey {
                    source: Source::Torus,
                    m: g(p, "m"),
                    t: -4 * g(p, "m") - 2,
                })
            }),
            template_params: &["m"],
            surgery_row: None,
        },
        t17_1("T1.7-1", None),
        t17_2("T1.7-2", None),
    ]
}

fn t17_1(id: &'static str, row: Option<&'static str>) -> FamilyRecord {
    FamilyRecord {
        id,
        target: Target::Lens,
        flavor: Flavor::PlusMinusOne,
        tight: false,
        params: &["m", "k"],
        domain: "m >= 1, -1 <= k <= m",
        citation: "Theorem 1.7(1): (2m+2+k, (3m+2-k(k+1))/(4m+3) + 1/2) for k in {-1,...,m}",
        check: |p| m_ok(p) && between(p, "k", -1, g(p, "m")),
        eval: |p| {
            let (m, k) = (gi(p, "m"), gi(p, "k"));
            let n = nn(p);
            lens_value(2 * m + 2 + k, n, fr(3 * m + 2 - k * (k + 1), n) + half())
        },
        grid: |m, _| product(with_m(m), &[("k", &|p| range(-1, g(p, "m")))]),
        template: Some(|p| {
            Some(TemplateKey {
                source: Source::Torus,
                m: g(p, "m"),
                t: -4 * g(p, "m") - 4,
            })
        }),
        template_params: &["m"],
        surgery_row: row,
    }
}

fn t17_2(id: &'static str, row: Option<&'static str>) -> FamilyRecord {
    FamilyRecord {
        id,
        target: Target::Lens,
        flavor: Flavor::Integer,
        tight: false,
        params: &["m", "k", "s"],
        domain: "m >= 1, k <= -m-2, s = ±1",
        citation: "Theorem 1.7(2): (±(k+1), -(k+1)^2/(4m+3) - k - m - 1/2) for k <= -m-2",
        check: |p| m_ok(p) && g(p, "k") <= -g(p, "m") - 2 && sign_ok(p, "s"),
        eval: |p| {
            let (m, k, s) = (gi(p, "m"), gi(p, "k"), gi(p, "s"));
            let n = nn(p);
            lens_value(
                s * (k + 1),
                n,
                -fr((k + 1) * (k + 1), n) - fr(k + m, 1) - half(),
            )
        },
        // t ± r = 2k+1 reaches down to 2 tb_min + 2m + 3.
        grid: |m, b| {
            product(
                with_m(m),
                &[
                    ("k", &|p| range(b.tb_min + g(p, "m") + 1, -g(p, "m") - 2)),
                    ("s", &signs),
                ],
            )
        },
        template: Some(|p| {
            let (m, t) = (g(p, "m"), t_param(p)?);
            (t <= -4 * m - 5).then_some(TemplateKey {
                source: Source::Torus,
                m,
                t,
            })
        }),
        template_params: &["m", "t"],
        surgery_row: row,
    }
}

/// `n = (t ± r - 1)/2` over every rotation number of a tb `t` unknot.
fn n_axis(p: &Params) -> Vec<i64> {
    range(g(p, "t"), -1)
}

fn table_records() -> Vec<FamilyRecord> {
    let mut v = vec![
        t17_1("Table1-1", Some("K(+1), t = -4m-4")),
        t17_2("Table1-2", Some("K(+1) ⊔ K_1(-1/(-4m-4-t)), t < -4m-4")),
    ];
    v.extend([
        FamilyRecord {
            id: "Table1-3",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "t", "n", "x", "s"],
            domain: "t < -2-m, n <= -1, x in {1,3}, s = ±1",
            citation: "Table 1 row (3)",
            check: |p| {
                m_ok(p) && g(p, "t") < -2 - g(p, "m") && g(p, "n") <= -1 && in_set(p, "x", &[1, 3]) && sign_ok(p, "s")
            },
            eval: |p| {
                let (m, t, n, x, s) = (gi(p, "m"), gi(p, "t"), gi(p, "n"), gi(p, "x"), gi(p, "s"));
                let nm = nn(p);
                let e = s * (2 * n + 1 + s) + (2 - t) * (1 + t) % nm * pw(1 - t, -t - m - 3, nm);
                let d3 = half()
                    - fr(m * (7 + x * x) + (19 + x * x), 4 * nm)
                    - fr(m * m + 1 + n * (n + 8 + 4 * m) - s * 4 * (1 + n), nm);
                lens_value(e, nm, d3)
            },
            grid: |m, b| {
                product(
                    with_m(m),
                    &[
                        ("t", &|p| range(b.tb_min, -3 - g(p, "m"))),
                        ("n", &n_axis),
                        ("x", &|_| vec![1, 3]),
                        ("s", &signs),
                    ],
                )
            },
            template: Some(|p| std_key(p, 0, t_param(p)?)),
            template_params: &["m", "t"],
            surgery_row: Some("K(+1) ⊔ K_1(-1/(-t-m-2)) ⊔ K_{1,3}(-1), t < -2-m, k = 0"),
        },
        FamilyRecord {
            id: "Table1-4",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "y", "l"],
            domain: "y in {0,±2,±4}, 0 <= l <= m+1",
            citation: "Table 1 row (4)",
            check: |p| m_ok(p) && in_set(p, "y", &[-4, -2, 0, 2, 4]) && between(p, "l", 0, g(p, "m") + 1),
            eval: |p| {
                let (m, y, l) = (gi(p, "m"), gi(p, "y"), gi(p, "l"));
                let n = nn(p);
                let r = m + 1 - 2 * l;
                let e = (-1 - m) * y + (-m - 1 + 2 * l);
                let d3 = half() - fr((3 + m) * r * r + r * (2 + m) * y, n) + fr(2 * r * y - (1 + m) * y * y, 4 * n);
                lens_value(e, n, d3)
            },
            grid: |m, _| product(with_m(m), &[("y", &even_four), ("l", &|p| range(0, g(p, "m") + 1))]),
            template: Some(|p| std_key(p, 0, -2 - g(p, "m"))),
            template_params: &["m"],
            surgery_row: Some("K(+1) ⊔ K_4(-1), t = -2-m, k = 0"),
        },
        FamilyRecord {
            id: "Table1-5",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "l"],
            domain: "0 <= l <= m",
            citation: "Table 1 row (5)",
            check: |p| m_ok(p) && between(p, "l", 0, g(p, "m")),
            eval: |p| {
                let (m, l) = (gi(p, "m"), gi(p, "l"));
                let n = nn(p);
                lens_value(-m + 2 * l, n, half() - fr((m - 2 * l) * (m - 2 * l), n))
            },
            grid: |m, _| product(with_m(m), &[("l", &|p| range(0, g(p, "m")))]),
            template: Some(|p| std_key(p, 0, -1 - g(p, "m"))),
            template_params: &["m"],
            surgery_row: Some("K(1/4), t = -1-m, k = 0"),
        },
        FamilyRecord {
            id: "Table1-6",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "t", "n", "r4", "l", "s"],
            domain: "k <= -2, t <= -3, n <= -1, r4 in {0,±2}, 0 <= l <= m, s = ±1",
            citation: "Table 1 row (6)",
            check: row_6_7_check,
            eval: |p| {
                let (m, k, t, n, r4, l, s) = (gi(p, "m"), gi(p, "k"), gi(p, "t"), gi(p, "n"), gi(p, "r4"), gi(p, "l"), gi(p, "s"));
                let nm = nn(p);
                let a = -m + 2 * l;
                let inner = s + (2 - t) * pw(1 - t, -k - 2, nm) % nm * modn(a + r4 * (1 - t + m), nm);
                let e = s * (1 + 2 * n) + s + (2 - t) * (1 + t) % nm * pw(1 - t, -t - 3, nm) % nm * modn(inner, nm);
                let d3 = half() + fr(k * n * (n + 1) - (1 + 2 * n), 1) - fr((1 + 2 * n) * (1 + 2 * n) + a * a, nm)
                    + fr(2 * a * r4 + r4 * r4 * (m + 1) + s * 2 * (1 + 2 * n) * (4 * a + r4), 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: row_6_7_grid,
            template: Some(|p| std_key(p, g(p, "k"), t_param(p)?)),
            template_params: &["m", "k", "t"],
            surgery_row: Some("K(+1) ⊔ K_1(-1/(-t-2)) ⊔ K_{1,1}(-1/(-k-1)) ⊔ K_{1,1,m}(-1) ⊔ K_{1,1,m,2}(-1), t < -2, k <= -2"),
        },
        FamilyRecord {
            id: "Table1-7",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "t", "n", "r4", "l", "s"],
            domain: "k <= -2, t <= -3, n <= -1, r4 in {0,±2}, 0 <= l <= m, s = ±1",
            citation: "Table 1 row (7)",
            check: row_6_7_check,
            eval: |p| {
                let (m, k, t, n, r4, l, s) = (gi(p, "m"), gi(p, "k"), gi(p, "t"), gi(p, "n"), gi(p, "r4"), gi(p, "l"), gi(p, "s"));
                let nm = nn(p);
                let a = -m + 2 * l;
                let inner = -s + (2 - t) * pw(1 - t, -k - 2, nm) % nm * modn(a + r4 * (1 - t + m), nm);
                let e = s * (1 + 2 * n) + s + (2 - t) * (1 + t) % nm * pw(1 - t, -t - 3, nm) % nm * modn(inner, nm);
                let d3 = half() + fr(k * (n + 1) * (n + 2), 1)
                    - fr(5 - 4 * m - 6 * a + n * (8 - 4 * a - r4) + (1 + 2 * n) * (1 + 2 * n) + a * a, nm)
                    - fr(r4 * r4 * (m + 1) + 2 * a * r4 - 2 * r4, 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: row_6_7_grid,
            template: Some(|p| std_key(p, g(p, "k"), t_param(p)?)),
            template_params: &["m", "k", "t"],
            surgery_row: Some("K(+1) ⊔ K_1(-1/(-t-2)) ⊔ K_{1,1}(-1/(-k-1)) ⊔ K_{1,1,m}(-1) ⊔ K_{1,1,m,2}(-1), t < -2, k <= -2"),
        },
        FamilyRecord {
            id: "Table1-8",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "r1", "r3", "l", "s"],
            domain: "k <= -2, r1, r3 in {0,±2}, 0 <= l <= m, s = ±1",
            citation: "Table 1 row (8)",
            check: |p| {
                m_ok(p)
                    && g(p, "k") <= -2
                    && in_set(p, "r1", &[-2, 0, 2])
                    && in_set(p, "r3", &[-2, 0, 2])
                    && between(p, "l", 0, g(p, "m"))
                    && sign_ok(p, "s")
            },
            eval: |p| {
                let (m, k, r1, r3, l, s) = (gi(p, "m"), gi(p, "k"), gi(p, "r1"), gi(p, "r3"), gi(p, "l"), gi(p, "s"));
                let nm = nn(p);
                let a = m - 2 * l;
                let e = s - r1 - pw(3, -k - 2, nm) * 5 % nm * modn(a + (3 + m) * r3, nm);
                let d3 = half() + fr(k * r1 * (r1 - 2 * s), 4)
                    + fr(2 * a * (s - r1) - a * a - s * 2 * m * r1 + 4 * m + 2, nm)
                    + fr(r1 * r1 * (4 * m - 1) - 2 * r3 * (r1 + a) - r3 * r3 * (1 + m) + s * 2 * (r1 + r3), 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: |m, b| {
                product(
                    with_m(m),
                    &[
                        ("k", &|_| range(-b.k_abs, -2)),
                        ("r1", &even_small),
                        ("r3", &even_small),
                        ("l", &|p| range(0, g(p, "m"))),
                        ("s", &signs),
                    ],
                )
            },
            template: Some(|p| std_key(p, g(p, "k"), -2)),
            template_params: &["m", "k"],
            surgery_row: Some("K(+1) ⊔ K_2(-1/(-k-1)) ⊔ K_{2,m}(-1) ⊔ K_{2,m,2}(-1), t = -2, k <= -2"),
        },
        FamilyRecord {
            id: "Table1-9",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "t", "n", "r3", "l", "s"],
            domain: "t < -2, n <= -1, r3 in {0,±2}, 0 <= l <= m+1, s = ±1",
            citation: "Table 1 row (9)",
            check: |p| {
                m_ok(p)
                    && g(p, "t") < -2
                    && g(p, "n") <= -1
                    && in_set(p, "r3", &[-2, 0, 2])
                    && between(p, "l", 0, g(p, "m") + 1)
                    && sign_ok(p, "s")
            },
            eval: |p| {
                let (m, t, n, r3, l, s) = (gi(p, "m"), gi(p, "t"), gi(p, "n"), gi(p, "r3"), gi(p, "l"), gi(p, "s"));
                let nm = nn(p);
                let a = -m - 1 + 2 * l;
                let e = s * (2 + 2 * n) + pw(1 - t, -t - 3, nm) * ((2 - t) * (1 + t) % nm) % nm * modn(a + (2 - t + m) * r3, nm);
                let d3 = half()
                    - fr(n * (n + 1) * (4 * m + 7) + 2 * n * (5 + 4 * m) - s * (n + 1) * (4 * a + r3) + a * a, nm)
                    + fr(2 * a * r3 + r3 * r3 * (m + 1), 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: |m, b| {
                product(
                    with_m(m),
                    &[
                        ("t", &|_| range(b.tb_min, -3)),
                        ("n", &n_axis),
                        ("r3", &even_small),
                        ("l", &|p| range(0, g(p, "m") + 1)),
                        ("s", &signs),
                    ],
                )
            },
            template: Some(|p| std_key(p, -1, t_param(p)?)),
            template_params: &["m", "t"],
            surgery_row: Some("K(+1) ⊔ K_1(-1/(-t-2)) ⊔ K_{1,m+1}(-1) ⊔ K_{1,m+1,2}(-1), t < -2, k = -1"),
        },
        FamilyRecord {
            id: "Table1-10",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "r2", "l", "s"],
            domain: "k < -2, r2 in {0,±2}, 0 <= l <= m+2, s = ±1",
            citation: "Table 1 row (10); the undefined r1 in the d3 numerator is read as r2",
            check: |p| {
                m_ok(p)
                    && g(p, "k") < -2
                    && in_set(p, "r2", &[-2, 0, 2])
                    && between(p, "l", 0, g(p, "m") + 2)
                    && sign_ok(p, "s")
            },
            eval: |p| {
                let (m, r2, l, s) = (gi(p, "m"), gi(p, "r2"), gi(p, "l"), gi(p, "s"));
                let nm = nn(p);
                let a = m + 2 - 2 * l;
                let e = s * (5 + 2 * m) + (3 + 2 * m) * a + (m - 1) * r2;
                let d3 = half() + fr(2 * r2 * (a - s) + r2 * r2 * (1 + m), 4 * nm)
                    + fr(2 + 4 * m + s * 2 * r2 - a * a, nm);
                lens_value(e, nm, d3)
            },
            grid: |m, b| {
                product(
                    with_m(m),
                    &[
                        ("k", &|_| range(-b.k_abs, -3)),
                        ("r2", &even_small),
                        ("l", &|p| range(0, g(p, "m") + 2)),
                        ("s", &signs),
                    ],
                )
            },
            template: Some(|p| std_key(p, g(p, "k"), -1)),
            template_params: &["m", "k"],
            surgery_row: Some("K(+1) ⊔ K_{m+2}(-1) ⊔ K_{m+2,2}(-1), t = -1, k < -2"),
        },
        FamilyRecord {
            id: "Table1-11",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "r3", "l", "s"],
            domain: "k < -2, r3 in {0,±2}, 0 <= l <= m, s = ±1",
            citation: "Table 1 row (11)",
            check: |p| {
                m_ok(p)
                    && g(p, "k") < -2
                    && in_set(p, "r3", &[-2, 0, 2])
                    && between(p, "l", 0, g(p, "m"))
                    && sign_ok(p, "s")
            },
            eval: |p| {
                let (m, r3, l, s) = (gi(p, "m"), gi(p, "r3"), gi(p, "l"), gi(p, "s"));
                let nm = nn(p);
                let a = -m + 2 * l;
                let d3 = half() - fr(-2 * (2 * m + 1) + a * a, nm)
                    - fr(r3 * r3 * (m + 1) + 2 * a * r3 + s * 2 * (r3 + 4 * a), 4 * nm);
                lens_value(0, nm, d3)
            },
            grid: |m, b| {
                product(
                    with_m(m),
                    &[
                        ("k", &|_| range(-b.k_abs, -3)),
                        ("r3", &even_small),
                        ("l", &|p| range(0, g(p, "m"))),
                        ("s", &signs),
                    ],
                )
            },
            template: Some(|p| std_key(p, g(p, "k"), -1)),
            template_params: &["m", "k"],
            surgery_row: Some("K(1/2) ⊔ K_1(-1/(-k-2)) ⊔ K_{1,m}(-1) ⊔ K_{1,m,2}(-1), t = -1, k < -2"),
        },
        FamilyRecord {
            id: "Table1-12",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "r2", "l"],
            domain: "r2 in {0,±2}, 0 <= l <= m+1",
            citation: "Table 1 row (12)",
            check: |p| m_ok(p) && in_set(p, "r2", &[-2, 0, 2]) && between(p, "l", 0, g(p, "m") + 1),
            eval: |p| {
                let (m, r2, l) = (gi(p, "m"), gi(p, "r2"), gi(p, "l"));
                let nm = nn(p);
                let a = m + 1 - 2 * l;
                let d3 = fr(3, 2) - fr(a * a, nm) - fr(r2 * r2 * (1 + m) + 2 * r2 * a, 4 * nm);
                lens_value(0, nm, d3)
            },
            grid: |m, _| product(with_m(m), &[("r2", &even_small), ("l", &|p| range(0, g(p, "m") + 1))]),
            template: Some(|p| std_key(p, -2, -1)),
            template_params: &["m"],
            surgery_row: Some("K(1/2) ⊔ K_{m+1}(-1) ⊔ K_{m+1,2}(-1), t = -1, k = -2"),
        },
        FamilyRecord {
            id: "Table1-13",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "r"],
            domain: "r in {1,3}",
            citation: "Table 1 row (13)",
            check: |p| m_ok(p) && in_set(p, "r", &[1, 3]),
            eval: |p| {
                let (m, r) = (gi(p, "m"), gi(p, "r"));
                let nm = nn(p);
                lens_value(0, nm, half() - fr(m * m, nm) + fr((1 + m) * (9 - r * r), 4 * nm))
            },
            grid: |m, _| product(with_m(m), &[("r", &|_| vec![1, 3])]),
            template: Some(|p| std_key(p, -1, -1)),
            template_params: &["m"],
            surgery_row: Some("K(1/(m+2)) ⊔ K_3(-1), t = -1, k = -1"),
        },
        FamilyRecord {
            id: "Table1-14",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "t", "n", "r4", "l1", "l2", "s"],
            domain: "k > 0, t <= -2, n < -1, r4 in {0,±2}, 0 <= l1 <= k-1, 0 <= l2 <= m-1, s = ±1",
            citation: "Table 1 row (14)",
            check: |p| {
                m_ok(p)
                    && g(p, "k") > 0
                    && g(p, "t") <= -2
                    && g(p, "n") < -1
                    && in_set(p, "r4", &[-2, 0, 2])
                    && between(p, "l1", 0, g(p, "k") - 1)
                    && between(p, "l2", 0, g(p, "m") - 1)
                    && sign_ok(p, "s")
            },
            eval: |p| {
                let (m, k, t, n, r4) = (gi(p, "m"), gi(p, "k"), gi(p, "t"), gi(p, "n"), gi(p, "r4"));
                let (l1, l2, s) = (gi(p, "l1"), gi(p, "l2"), gi(p, "s"));
                let nm = nn(p);
                let b = -m + 1 + 2 * l2;
                let inner = -k - 1 + 2 * l1 - (t - k) * (b - (t - m) * r4);
                let e = s * (2 * n + 1) + s + pw(1 - t, -t - 2, nm) * ((2 - t) * (1 + t) % nm) % nm * modn(inner, nm);
                let d3 = half() - fr(1 + n, 1) + fr(k * (1 + n) * (1 + n), 1)
                    - fr(4 * (n + 1) * (n + 1) + s * (n + 1) * (-k + 1 + 2 * l1 + 4 * b + r4), nm)
                    - fr((1 + m) * r4 * r4 + 2 * b * r4 + 4 * b * b, 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: |m, b| {
                product(
                    with_m(m),
                    &[
                        ("k", &|_| range(1, b.k_abs)),
                        ("t", &|_| range(b.tb_min, -2)),
                        ("n", &|p| range(g(p, "t"), -2)),
                        ("r4", &even_small),
                        ("l1", &|p| range(0, g(p, "k") - 1)),
                        ("l2", &|p| range(0, g(p, "m") - 1)),
                        ("s", &signs),
                    ],
                )
            },
            template: Some(|p| std_key(p, g(p, "k"), t_param(p)?)),
            template_params: &["m", "k", "t"],
            surgery_row: Some(
                "K(+1) ⊔ K_1(-1/(-t-1)) ⊔ K_{1,k-1}(-1) ⊔ K_{1,k-1,m-1}(-1) ⊔ K_{1,k-1,m-1,2}(-1), t <= -2, k > 0",
            ),
        },
    ]);
    v.extend(dual_records());
    v
}

fn row_6_7_check(p: &Params) -> bool {
    m_ok(p)
        && g(p, "k") <= -2
        && g(p, "t") <= -3
        && g(p, "n") <= -1
        && in_set(p, "r4", &[-2, 0, 2])
        && between(p, "l", 0, g(p, "m"))
        && sign_ok(p, "s")
}

fn row_6_7_grid(m: i64, b: &Bounds) -> Vec<Params> {
    product(
        with_m(m),
        &[
            ("k", &|_| range(-b.k_abs, -2)),
            ("t", &|_| range(b.tb_min, -3)),
            ("n", &n_axis),
            ("r4", &even_small),
            ("l", &|p| range(0, g(p, "m"))),
            ("s", &signs),
        ],
    )
}

fn row_18_20_check(p: &Params) -> bool {
    m_ok(p)
        && in_set(p, "r3", &[-3, -1, 1, 3])
        && g(p, "n") <= -1
        && g(p, "k") <= -2
        && g(p, "t") <= -3
        && between(p, "l", 0, g(p, "m") - 1)
}

fn row_18_20_grid(m: i64, b: &Bounds) -> Vec<Params> {
    product(
        with_m(m),
        &[
            ("k", &|_| range(-b.k_abs, -2)),
            ("t", &|_| range(b.tb_min, -3)),
            ("n", &n_axis),
            ("r3", &odd_three),
            ("l", &|p| range(0, g(p, "m") - 1)),
        ],
    )
}

fn row_18_20_tail(p: &Params, nm: i128) -> i128 {
    let (m, k, t, r3, l) = (gi(p, "m"), gi(p, "k"), gi(p, "t"), gi(p, "r3"), gi(p, "l"));
    pw(1 - t, -t - k - 5, nm) * ((2 - t) * (2 - t) % nm) % nm
        * modn((1 + t) * modn(r3 + (4 - t) * (-m + 1 + 2 * l), nm), nm)
        % nm
}

fn row_18_20_base(p: &Params, nm: i128) -> i128 {
    let t = gi(p, "t");
    pw(1 - t, -t - 3, nm) * modn((1 + t) * (2 - t), nm) % nm
}

fn row_21_22_check(p: &Params) -> bool {
    m_ok(p)
        && in_set(p, "r1", &[-2, 0, 2])
        && in_set(p, "r2", &[-3, -1, 1, 3])
        && between(p, "l", 0, g(p, "m") - 1)
        && g(p, "k") <= -2
}

fn row_21_22_grid(m: i64, b: &Bounds) -> Vec<Params> {
    product(
        with_m(m),
        &[
            ("k", &|_| range(-b.k_abs, -2)),
            ("r1", &even_small),
            ("r2", &odd_three),
            ("l", &|p| range(0, g(p, "m") - 1)),
        ],
    )
}

fn row_24_25_check(p: &Params) -> bool {
    m_ok(p) && in_set(p, "r", &[-5, -3, -1, 1, 3, 5]) && between(p, "l", 0, g(p, "m") - 1)
}

fn row_24_25_grid(m: i64, _: &Bounds) -> Vec<Params> {
    product(
        with_m(m),
        &[
            ("r", &|_| vec![-5, -3, -1, 1, 3, 5]),
            ("l", &|p| range(0, g(p, "m") - 1)),
        ],
    )
}

fn row_15_16_check(p: &Params) -> bool {
    m_ok(p)
        && g(p, "k") < -2
        && in_set(p, "r2", &[-3, -1, 1, 3])
        && between(p, "l", 0, g(p, "m") - 1)
}

fn row_15_16_grid(m: i64, b: &Bounds) -> Vec<Params> {
    product(
        with_m(m),
        &[
            ("k", &|_| range(-b.k_abs, -3)),
            ("r2", &odd_three),
            ("l", &|p| range(0, g(p, "m") - 1)),
        ],
    )
}

fn dual_records() -> Vec<FamilyRecord> {
    const ROW_15_16: &str =
        "K(1/2) ⊔ K_1(-1/(-k-2)) ⊔ K_{1,3}(-1) ⊔ K_{1,3,m-1}(-1), t = -1, k < -2";
    const ROW_18_20: &str =
        "K(+1) ⊔ K_1(-1/(-t-2)) ⊔ K_{1,1}(-1/(-k-1)) ⊔ K_{1,1,3}(-1) ⊔ K_{1,1,3,m-1}(-1), t < -2, k <= -2";
    const ROW_21_22: &str =
        "K(+1) ⊔ K_2(-1/(-k-1)) ⊔ K_{2,3}(-1) ⊔ K_{2,3,m-1}(-1), t = -2, k <= -2";
    const ROW_24_25: &str = "K(+1) ⊔ K_5(-1) ⊔ K_{5,m-1}(-1), t = -2, k = -1";
    vec![
        FamilyRecord {
            id: "Table1-15",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "r2", "l"],
            domain: "k < -2, r2 in {±1,±3}, 0 <= l <= m-1",
            citation: "Table 1 row (15)",
            check: row_15_16_check,
            eval: |p| {
                let (m, r2, l) = (gi(p, "m"), gi(p, "r2"), gi(p, "l"));
                let nm = nn(p);
                let b = -m + 1 + 2 * l;
                let d3 = half() + fr(3 * (m + 1) + l - b * b, nm) + fr((1 + m) * (1 - r2 * r2), 4 * nm);
                lens_value(0, nm, d3)
            },
            grid: row_15_16_grid,
            template: Some(|p| dual_key(p, g(p, "k"), -1)),
            template_params: &["m", "k"],
            surgery_row: Some(ROW_15_16),
        },
        FamilyRecord {
            id: "Table1-16",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "r2", "l"],
            domain: "k < -2, r2 in {±1,±3}, 0 <= l <= m-1",
            citation: "Table 1 row (16)",
            check: row_15_16_check,
            eval: |p| {
                let (m, r2, l) = (gi(p, "m"), gi(p, "r2"), gi(p, "l"));
                let nm = nn(p);
                let b = -m + 1 + 2 * l;
                let d3 = half() + fr(-5 - 8 * m + r2 * (l + 1) + l + b * b, nm) + fr((1 + m) * (r2 * r2 - 1), 4 * nm);
                lens_value(0, nm, d3)
            },
            grid: row_15_16_grid,
            template: Some(|p| dual_key(p, g(p, "k"), -1)),
            template_params: &["m", "k"],
            surgery_row: Some(ROW_15_16),
        },
        FamilyRecord {
            id: "Table1-17",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "r1", "l"],
            domain: "r1 in {0,±2,±4}, 0 <= l <= m-1",
            citation: "Table 1 row (17)",
            check: |p| m_ok(p) && in_set(p, "r1", &[-4, -2, 0, 2, 4]) && between(p, "l", 0, g(p, "m") - 1),
            eval: |p| {
                let (m, r1, l) = (gi(p, "m"), gi(p, "r1"), gi(p, "l"));
                let nm = nn(p);
                let c = m - 1 - 2 * l;
                let d3 = fr(3, 2) - fr(c * c, nm) - fr(r1 * r1 * (1 + m) + 2 * r1 * c, 4 * nm);
                lens_value(0, nm, d3)
            },
            grid: |m, _| product(with_m(m), &[("r1", &even_four), ("l", &|p| range(0, g(p, "m") - 1))]),
            template: Some(|p| dual_key(p, -2, -1)),
            template_params: &["m"],
            surgery_row: Some("K(1/2) ⊔ K_4(-1) ⊔ K_{4,m-1}(-1), t = -1, k = -2"),
        },
        FamilyRecord {
            id: "Table1-18",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "t", "n", "r3", "l"],
            domain: "r3 in {±1,±3}, n <= -1, k <= -2, t <= -3, 0 <= l <= m-1",
            citation: "Table 1 row (18)",
            check: row_18_20_check,
            eval: |p| {
                let (m, k, n, r3, l) = (gi(p, "m"), gi(p, "k"), gi(p, "n"), gi(p, "r3"), gi(p, "l"));
                let nm = nn(p);
                let e = (m + 1) * modn(2 * n + 2 + row_18_20_base(p, nm) + row_18_20_tail(p, nm), nm);
                let b = -m + 1 + 2 * l;
                let d3 = half() + fr(k * n * (n + 1), 1) - fr(n * (m + 1) * (n + 1) + n * (6 - r3 + m - 1 - 2 * l), nm)
                    + fr(b * b + 4 * m * (1 + 2 * n) + (m - l) + 3 - r3 * (l - m * (n + 1)), nm)
                    - fr((m + 1) * (r3 * r3 - 1), 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: row_18_20_grid,
            template: Some(|p| dual_key(p, g(p, "k"), t_param(p)?)),
            template_params: &["m", "k", "t"],
            surgery_row: Some(ROW_18_20),
        },
        FamilyRecord {
            id: "Table1-19",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "t", "n", "r3", "l"],
            domain: "r3 in {±1,±3}, n <= -1, t <= -3, k <= -2, 0 <= l <= m-1",
            citation: "Table 1 row (19)",
            check: row_18_20_check,
            eval: |p| {
                let (m, k, n, r3, l) = (gi(p, "m"), gi(p, "k"), gi(p, "n"), gi(p, "r3"), gi(p, "l"));
                let nm = nn(p);
                let e = (m + 1) * modn(-(2 * n + 2) - row_18_20_base(p, nm) + row_18_20_tail(p, nm), nm);
                let b = -m + 1 + 2 * l;
                let d3 = half() + fr(k * n * (n + 1), 1) - fr(n * (m + 1) * (n + 1) + n * (6 + r3 - m + 1 + 2 * l), nm)
                    + fr(b * b + 4 * m * (1 + 2 * n) + l + 4 + r3 * (l + m * n), nm)
                    - fr((m + 1) * (r3 * r3 - 1), 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: row_18_20_grid,
            template: Some(|p| dual_key(p, g(p, "k"), t_param(p)?)),
            template_params: &["m", "k", "t"],
            surgery_row: Some(ROW_18_20),
        },
        FamilyRecord {
            id: "Table1-20",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "t", "n", "r3", "l", "s"],
            domain: "r3 in {±1,±3}, n <= -1, t <= -3, k <= -2, 0 <= l <= m-1, s = ±1",
            citation: "Table 1 row (20)",
            check: |p| row_18_20_check(p) && sign_ok(p, "s"),
            eval: |p| {
                let (m, k, n, r3, l, s) = (gi(p, "m"), gi(p, "k"), gi(p, "n"), gi(p, "r3"), gi(p, "l"), gi(p, "s"));
                let nm = nn(p);
                let e = (m + 1) * modn(s * (2 * n + 2) - s * row_18_20_base(p, nm) + row_18_20_tail(p, nm), nm);
                let c = m - 1 - 2 * l;
                let d3 = half() + fr(k * (n + 1) * (n + 2), 1)
                    - fr((m + 1) * (n * n + 3 * n - r3 * (n + 1)) - 2 * c + c * c, nm)
                    - fr(-2 * m - r3 * (l + 1) + l, nm)
                    - fr((m + 1) * (r3 * r3 - 1), 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: |m, b| {
                let mut out = Vec::new();
                for mut p in row_18_20_grid(m, b) {
                    for s in [1, -1] {
                        p.insert("s".into(), s);
                        out.push(p.clone());
                    }
                }
                out
            },
            template: Some(|p| dual_key(p, g(p, "k"), t_param(p)?)),
            template_params: &["m", "k", "t"],
            surgery_row: Some(ROW_18_20),
        },
        FamilyRecord {
            id: "Table1-21",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "r1", "r2", "l"],
            domain: "r1 in {0,±2}, r2 in {±1,±3}, 0 <= l <= m-1, k <= -2",
            citation: "Table 1 row (21)",
            check: row_21_22_check,
            eval: |p| {
                let (m, k, r1, r2, l) = (gi(p, "m"), gi(p, "k"), gi(p, "r1"), gi(p, "r2"), gi(p, "l"));
                let nm = nn(p);
                let c = m - 1 - 2 * l;
                let p3 = pw(3, -k - 2, nm);
                let e = (m + 1) * modn(1 - r1 - 5 * p3 * r2 - p3 * modn(30 * c, nm), nm);
                let d3 = half() + fr(k * r1 * (r1 - 2), 4)
                    - fr(
                        2 * (1 + m) * r1 * r2 + 2 * r1 * c + (r2 * r2 - 1) * (1 + m) + (3 * m + 2) * (r1 * r1 - 2 * r1),
                        4 * nm,
                    )
                    + fr((4 * m + 2) - (r2 + 1) * l + c * c + r1, nm);
                lens_value(e, nm, d3)
            },
            grid: row_21_22_grid,
            template: Some(|p| dual_key(p, g(p, "k"), -2)),
            template_params: &["m", "k"],
            surgery_row: Some(ROW_21_22),
        },
        FamilyRecord {
            id: "Table1-22",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "r1", "r2", "l"],
            domain: "r1 in {0,±2}, r2 in {±1,±3}, 0 <= l <= m-1, k <= -2",
            citation: "Table 1 row (22)",
            check: row_21_22_check,
            eval: |p| {
                let (m, k, r1, r2, l) = (gi(p, "m"), gi(p, "k"), gi(p, "r1"), gi(p, "r2"), gi(p, "l"));
                let nm = nn(p);
                let c = m - 1 - 2 * l;
                let p3 = pw(3, -k - 2, nm);
                let e = (m + 1) * modn(-1 - r1 - 5 * p3 * r2 - p3 * modn(30 * c, nm), nm);
                let d3 = half() + fr(k * r1 * (r1 + 2), 4)
                    - fr(
                        2 * (1 + m) * r1 * r2 + 2 * r1 * c + (r2 * r2 - 1) * (1 + m) + (3 * m + 2) * (r1 * r1 + 2 * r1),
                        4 * nm,
                    )
                    + fr(3 * (m + 1) - l - r2 * (m - l) - c * c + r1, nm);
                lens_value(e, nm, d3)
            },
            grid: row_21_22_grid,
            template: Some(|p| dual_key(p, g(p, "k"), -2)),
            template_params: &["m", "k"],
            surgery_row: Some(ROW_21_22),
        },
        FamilyRecord {
            id: "Table1-23",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "t", "n", "r2", "l", "s"],
            domain: "t <= -3, n <= -1, r2 in {0,±2,±4}, 0 <= l <= m-1, s = ±1",
            citation: "Table 1 row (23); the undefined r3^2 in the d3 numerator is read as r2^2",
            check: |p| {
                m_ok(p)
                    && g(p, "t") <= -3
                    && g(p, "n") <= -1
                    && in_set(p, "r2", &[-4, -2, 0, 2, 4])
                    && between(p, "l", 0, g(p, "m") - 1)
                    && sign_ok(p, "s")
            },
            eval: |p| {
                let (m, t, n, r2, l, s) = (gi(p, "m"), gi(p, "t"), gi(p, "n"), gi(p, "r2"), gi(p, "l"), gi(p, "s"));
                let nm = nn(p);
                let b = -m + 1 + 2 * l;
                let e = (m + 1)
                    * modn(
                        s * (2 * n + 2) + modn((2 - t) * (1 + t), nm) * pw(1 - t, -t - 3, nm) % nm * modn((5 - t) * b + r2, nm),
                        nm,
                    );
                let d3 = half() - fr(1 + n + n * n, 1) - fr((m + 1) * (1 + n + n * n), nm)
                    + fr(7 * n - s * (1 + n) * (r2 * (m + 1) + b) + r2 * r2 + 9 * m * n, nm)
                    - fr(2 * r2 * b + r2 * r2 * (1 + m), 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: |m, b| {
                product(
                    with_m(m),
                    &[
                        ("t", &|_| range(b.tb_min, -3)),
                        ("n", &n_axis),
                        ("r2", &even_four),
                        ("l", &|p| range(0, g(p, "m") - 1)),
                        ("s", &signs),
                    ],
                )
            },
            template: Some(|p| dual_key(p, -1, t_param(p)?)),
            template_params: &["m", "t"],
            surgery_row: Some("K(+1) ⊔ K_1(-1/(-t-2)) ⊔ K_{1,4}(-1) ⊔ K_{1,4,m-1}(-1), t < -2, k = -1"),
        },
        FamilyRecord {
            id: "Table1-24",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "r", "l"],
            domain: "r in {±1,±3,±5}, 0 <= l <= m-1",
            citation: "Table 1 row (24)",
            check: row_24_25_check,
            eval: |p| {
                let (m, r, l) = (gi(p, "m"), gi(p, "r"), gi(p, "l"));
                let nm = nn(p);
                let c = m - 1 - 2 * l;
                let e = (m + 1) * (1 - r - 27 * (-m + 1 + 2 * l));
                let d3 = half() + fr(r * (m - l) + (c * c - l - r), nm) + fr((1 + m) * (r * r - 1), 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: row_24_25_grid,
            template: Some(|p| dual_key(p, -1, -2)),
            template_params: &["m"],
            surgery_row: Some(ROW_24_25),
        },
        FamilyRecord {
            id: "Table1-25",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "r", "l"],
            domain: "r in {±1,±3,±5}, 0 <= l <= m-1",
            citation: "Table 1 row (25)",
            check: row_24_25_check,
            eval: |p| {
                let (m, r, l) = (gi(p, "m"), gi(p, "r"), gi(p, "l"));
                let nm = nn(p);
                let c = m - 1 - 2 * l;
                let e = (m + 1) * (-1 - r - 27 * (-m + 1 + 2 * l));
                let d3 = half() - fr(r * (l + 1) + (c * c - m + r), nm) + fr((1 + m) * (r * r - 1), 4 * nm);
                lens_value(e, nm, d3)
            },
            grid: row_24_25_grid,
            template: Some(|p| dual_key(p, -1, -2)),
            template_params: &["m"],
            surgery_row: Some(ROW_24_25),
        },
        FamilyRecord {
            id: "Table1-26",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "l"],
            domain: "0 <= l <= m",
            citation: "Table 1 row (26)",
            check: |p| m_ok(p) && between(p, "l", 0, g(p, "m")),
            eval: |p| {
                let (m, l) = (gi(p, "m"), gi(p, "l"));
                let nm = nn(p);
                lens_value(0, nm, half() - fr((-m + 2 * l) * (-m + 2 * l), nm))
            },
            grid: |m, _| product(with_m(m), &[("l", &|p| range(0, g(p, "m")))]),
            template: Some(|p| dual_key(p, -1, -1)),
            template_params: &["m"],
            surgery_row: Some("K(1/5) ⊔ K_m(-1), t = -1, k = -1"),
        },
        FamilyRecord {
            id: "Table1-27",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "k", "t", "n", "r2", "l1", "l2", "s"],
            domain: "t < -1, r2 in {0,±2}, 0 <= l1 <= k-1, 0 <= l2 <= m-1, k >= 1, n < -1, s = ±1",
            citation: "Table 1 row (27)",
            check: |p| {
                m_ok(p)
                    && g(p, "t") < -1
                    && in_set(p, "r2", &[-2, 0, 2])
                    && between(p, "l1", 0, g(p, "k") - 1)
                    && between(p, "l2", 0, g(p, "m") - 1)
                    && g(p, "k") >= 1
                    && g(p, "n") < -1
                    && sign_ok(p, "s")
            },
            eval: |p| {
                let (m, k, t, n, r2) = (gi(p, "m"), gi(p, "k"), gi(p, "t"), gi(p, "n"), gi(p, "r2"));
                let (l1, l2, s) = (gi(p, "l1"), gi(p, "l2"), gi(p, "s"));
                let nm = nn(p);
                let b = -m + 1 + 2 * l2;
                let inner = (-k + 1 + 2 * l1) - (t + k) * ((3 + t) * b + r2);
                let e = (m + 1)
                    * modn(s * (2 * n + 2) + modn((1 + t) * (2 - t), nm) * pw(1 - t, -t - 2, nm) % nm * modn(inner, nm), nm);
                let d3 = half() + fr(k * (1 + n) * (1 + n) - s * (1 + n) * (-k + 1 + 2 * l1), 1)
                    - fr(s * (n + 1) * (r2 * (m + 1) + b), nm)
                    - fr(b * b, nm)
                    - fr(2 * r2 * b + s * (1 + m) * r2 * r2, 4 * nm)
                    - fr((n + 1) * (5 * m + m * n + n + 4), nm);
                lens_value(e, nm, d3)
            },
            grid: |m, b| {
                product(
                    with_m(m),
                    &[
                        ("k", &|_| range(1, b.k_abs)),
                        ("t", &|_| range(b.tb_min, -2)),
                        ("n", &|p| range(g(p, "t"), -2)),
                        ("r2", &even_small),
                        ("l1", &|p| range(0, g(p, "k") - 1)),
                        ("l2", &|p| range(0, g(p, "m") - 1)),
                        ("s", &signs),
                    ],
                )
            },
            template: Some(|p| dual_key(p, g(p, "k"), t_param(p)?)),
            template_params: &["m", "k", "t"],
            surgery_row: Some(
                "K(+1) ⊔ K_1(-1/(-t-1)) ⊔ K_{1,k-1}(-1) ⊔ K_{1,k-1,2}(-1) ⊔ K_{1,k-1,2,m-1}(-1), t < -1, k > 0",
            ),
        },
        FamilyRecord {
            id: "Table1-28",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "t", "n", "l", "s"],
            domain: "t <= -6, n <= -1, 0 <= l <= m, s = ±1",
            citation: "Table 1 row (28)",
            check: |p| {
                m_ok(p) && g(p, "t") <= -6 && g(p, "n") <= -1 && between(p, "l", 0, g(p, "m")) && sign_ok(p, "s")
            },
            eval: |p| {
                let (m, t, n, l, s) = (gi(p, "m"), gi(p, "t"), gi(p, "n"), gi(p, "l"), gi(p, "s"));
                let nm = nn(p);
                let a = -m + 2 * l;
                let e = (m + 1) * modn(s * (2 * n + 2) - modn((t - 2) * (1 + t), nm) * pw(1 - t, -t - 6, nm) % nm * modn(a, nm), nm);
                let d3 = half() + fr(s * a * (1 + n), nm)
                    - fr(a * a - (m + 1) * (n * n + 5 * n + 2) + m * n + 3 * m + 2, nm);
                lens_value(e, nm, d3)
            },
            grid: |m, b| {
                product(
                    with_m(m),
                    &[
                        ("t", &|_| range(b.tb_min, -6)),
                        ("n", &n_axis),
                        ("l", &|p| range(0, g(p, "m"))),
                        ("s", &signs),
                    ],
                )
            },
            template: Some(|p| dual_key(p, 0, t_param(p)?)),
            template_params: &["m", "t"],
            surgery_row: Some("K(+1) ⊔ K_1(-1/(-t-5)) ⊔ K_{1,m}(-1), t < -5, k = 0"),
        },
        FamilyRecord {
            id: "Table1-29",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "r", "l"],
            domain: "r in {0,±2,±4}, 0 <= l <= m+1",
            citation: "Table 1 row (29)",
            check: |p| m_ok(p) && in_set(p, "r", &[-4, -2, 0, 2, 4]) && between(p, "l", 0, g(p, "m") + 1),
            eval: |p| {
                let (m, r, l) = (gi(p, "m"), gi(p, "r"), gi(p, "l"));
                let nm = nn(p);
                let a = m + 1 - 2 * l;
                let d3 = fr(3, 2) - fr(r * r * (1 + m) - 2 * r * a, 4 * nm) - fr(a * a, nm);
                lens_value((m + 1) * (r - 4 * a), nm, d3)
            },
            grid: |m, _| product(with_m(m), &[("r", &even_four), ("l", &|p| range(0, g(p, "m") + 1))]),
            template: Some(|p| dual_key(p, 0, -5)),
            template_params: &["m"],
            surgery_row: Some("K(+1) ⊔ K_{m+1}(-1), t = -5, k = 0"),
        },
        FamilyRecord {
            id: "Table1-30",
            target: Target::Lens,
            flavor: Flavor::Rational,
            tight: false,
            params: &["m", "r"],
            domain: "r in {1,3}",
            citation: "Table 1 row (30)",
            check: |p| m_ok(p) && in_set(p, "r", &[1, 3]),
            eval: |p| {
                let (m, r) = (gi(p, "m"), gi(p, "r"));
                let nm = nn(p);
                lens_value((m + 1) * r, nm, half() + fr((m + 1) * (9 - r * r), 4 * nm) - fr(m * m, nm))
            },
            grid: |m, _| product(with_m(m), &[("r", &|_| vec![1, 3])]),
            template: Some(|p| dual_key(p, 0, -4)),
            template_params: &["m"],
            surgery_row: Some("K(1/(m+1)), t = -4, k = 0"),
        },
    ]
}

/// Canonical value set of a family over its grid at `m`.
pub fn family_values(rec: &FamilyRecord, m: i64, bounds: &Bounds) -> BTreeSet<FamilyValue> {
    let modulus = rec.manifold(m).modulus();
    rec.grid(m, bounds)
        .iter()
        .map(|p| rec.eval_unchecked(p).canonical(modulus))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::params;
    use super::*;

    #[test]
    fn listed_examples() {
        let v = family_eval("T1.1-1", &params(&[("m", 4)])).unwrap();
        assert_eq!(v.d3, Some(Rational::int(-5)));

        let v = family_eval("T1.7-1", &params(&[("m", 1), ("k", -1)])).unwrap();
        assert_eq!(v.euler, BigInt::from(3));
        assert_eq!(v.d3, Some(Rational::new(17, 14)));

        let e: BTreeSet<BigInt> = (0..2)
            .map(|l| {
                family_eval("T1.5", &params(&[("m", 2), ("l", l)]))
                    .unwrap()
                    .euler
            })
            .collect();
        assert_eq!(e, [BigInt::from(6), BigInt::from(3)].into_iter().collect());

        assert!(matches!(
            family_eval("T1.1-1", &params(&[("m", 3)])),
            Err(Error::OutOfDomain(_))
        ));
        assert!(matches!(
            family_eval("nope", &params(&[])),
            Err(Error::UnknownFamily(_))
        ));
    }

    #[test]
    fn every_grid_point_is_in_domain() {
        let b = Bounds {
            tb_min: -7,
            k_abs: 3,
            ..Bounds::default()
        };
        for rec in registry() {
            for m in 1..=2 {
                for p in rec.grid(m, &b) {
                    assert!(
                        rec.in_domain(&p),
                        "{} grid point {p:?} outside its domain",
                        rec.id
                    );
                    let _ = family_eval(rec.id, &p).unwrap();
                }
            }
        }
    }

    #[test]
    fn every_record_has_a_citation() {
        let reg = registry();
        assert_eq!(
            reg.iter().filter(|r| r.id.starts_with("Table1-")).count(),
            30
        );
        for r in &reg {
            assert!(!r.citation.is_empty());
        }
    }

    #[test]
    fn family_5_template() {
        let t = family_surgery_description("Table1-5", &params(&[("m", 1)])).unwrap();
        assert_eq!(t.key.t, -2);
        assert_eq!(t.key.coeff(), Rational::new(1, 4));
        assert_eq!(t.chain, "K(1/4)");
        assert_eq!(t.diagrams.len(), 2);
    }

    #[test]
    fn theorem_1_7_template() {
        let t = family_surgery_description("T1.7-2", &params(&[("m", 1), ("t", -10)])).unwrap();
        assert_eq!(t.key.coeff(), Rational::int(3));
        assert_eq!(t.chain, "K(+1) ⊔ K_1(-1/2)");
    }

    #[test]
    fn theorem_1_1_template() {
        let t = family_surgery_description("T1.1-2a", &params(&[("t", -6)])).unwrap();
        assert_eq!(t.key.coeff(), Rational::new(11, 2));
        assert_eq!(t.chain, "K(+1) ⊔ K_1(-1/4) ⊔ K_{1,1}(-1)");
    }
}
