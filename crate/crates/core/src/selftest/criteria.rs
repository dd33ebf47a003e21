use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracles::{meridian_tb_oracle, sturm_inertia};
use super::{Outcome, SelftestConfig};
use crate::calculus::{
    cancellation_pair, chain_to_diagram, enumerate_sign_assignments, replace_reciprocal, transform,
};
use crate::classify::{
    canonical_euler, engine_at, family, family_eval, family_values, params, tight_lens_classes,
    unknot_tightness, verify_family, xi_nm, Bounds, Certificate, FamilyValue, Source, TemplateKey,
    TightnessStatus,
};
use crate::error::{Error, Result};
use crate::exactmath::{
    admissible, bracket, negcf, signature_generalized, snf, IntMatrix, Rational,
};
use crate::invariants::{
    build_q, chain_shape, d3 as d3_report, euler_case, euler_closed_form, euler_from_images,
    invariants, reduce, report, EulerCase, SignPolicy,
};
use crate::knotdata::{
    torus_label, Atlas, ContactSurgeryDiagram, LegendrianComponent, K5A1, LEFT_TREFOIL, NEG_K5A1,
    RIGHT_TREFOIL, UNKNOT,
};

type Criterion = fn(&SelftestConfig) -> Result<Outcome>;

pub(crate) const CRITERIA: [(u8, &str, Criterion); 12] = [
    (1, "Cancellation invariance", cancellation),
    (2, "Replacement equivalence", replacement),
    (3, "Printed-matrix reproduction", printed_matrices),
    (4, "Sigma(2,3,11) d3 lists", sigma_lists),
    (
        5,
        "-Sigma(2,3,11) d3 lists and reciprocal diagrams",
        neg_sigma_lists,
    ),
    (6, "Lens tight classification", lens_tight),
    (7, "Lens cs_pm1 and cs_Z lists", lens_integer_lists),
    (8, "Euler two-path agreement", euler_paths),
    (9, "Table 1 spot verification", table_spot_checks),
    (10, "Unknot tightness classifier", tightness_exhaustive),
    (11, "xi_Nm surgery number bound", xi_bounds),
    (12, "Oracle cross-checks", oracle_checks),
];

const MAX_DETAILS: usize = 12;

fn rng(cfg: &SelftestConfig, n: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(31).wrapping_add(n))
}

fn push(details: &mut Vec<String>, s: String) {
    if details.len() < MAX_DETAILS {
        details.push(s);
    }
}

fn show<T: ToString>(set: &BTreeSet<T>) -> String {
    let v: Vec<String> = set.iter().map(ToString::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

fn set_diff<T: Ord + Clone + ToString>(
    label: &str,
    want: &BTreeSet<T>,
    got: &BTreeSet<T>,
    out: &mut Vec<String>,
) {
    let missing: BTreeSet<T> = want.difference(got).cloned().collect();
    let extra: BTreeSet<T> = got.difference(want).cloned().collect();
    if !missing.is_empty() {
        push(
            out,
            format!("{label}: expected but not produced {}", show(&missing)),
        );
    }
    if !extra.is_empty() {
        push(
            out,
            format!("{label}: produced but not expected {}", show(&extra)),
        );
    }
}

/// A knot from the atlas with a realization at `t`, and one of its rotation numbers.
fn random_knot(rng: &mut ChaCha8Rng, atlas: &Atlas, t: i64) -> Option<(String, i64)> {
    let options: Vec<(String, Vec<i64>)> = [UNKNOT, RIGHT_TREFOIL, LEFT_TREFOIL, K5A1]
        .iter()
        .filter_map(|l| {
            let rots: Vec<i64> = atlas.realizations(l, t).ok()?.into_iter().collect();
            (!rots.is_empty()).then(|| (l.to_string(), rots))
        })
        .collect();
    let (label, rots) = options.choose(rng)?;
    Some((label.clone(), *rots.choose(rng)?))
}

fn cancellation(cfg: &SelftestConfig) -> Result<Outcome> {
    let mut rng = rng(cfg, 1);
    let mut details = Vec::new();
    let mut reports = 0;
    let mut drawn = 0;
    while drawn < 200 {
        let t = rng.gen_range(-8..=-1);
        let Some((label, rot)) = random_knot(&mut rng, &cfg.atlas, t) else {
            continue;
        };
        drawn += 1;
        let n = rng.gen_range(1..=5u64);
        let k = LegendrianComponent::new("K", &label, t, rot, Rational::one());
        for rep in invariants(&cancellation_pair(&k, n), &SignPolicy::Enumerate)? {
            reports += 1;
            if !rep.h1.is_empty() || rep.d3 != Some(Rational::zero()) {
                push(
                    &mut details,
                    format!(
                        "{label} tb={t} rot={rot} n={n}: H1 factors {:?}, d3 {:?}",
                        rep.h1, rep.d3
                    ),
                );
            }
        }
    }
    Ok(Outcome::new(
        details.is_empty(),
        format!("{drawn} pairs, {reports} reports"),
        details,
    ))
}

fn replacement(cfg: &SelftestConfig) -> Result<Outcome> {
    let mut rng = rng(cfg, 2);
    let mut details = Vec::new();
    let mut drawn = 0;
    while drawn < 200 {
        let t = rng.gen_range(-8..=-1);
        let Some((label, rot)) = random_knot(&mut rng, &cfg.atlas, t) else {
            continue;
        };
        drawn += 1;
        let n = rng.gen_range(1..=5i64);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let comp = LegendrianComponent::new("K", &label, t, rot, Rational::new(sign, n));
        let d = ContactSurgeryDiagram::single(comp.clone());
        let a = d3_report(&d, &[])?;
        let chain = replace_reciprocal(&comp)?;
        let b = d3_report(&chain_to_diagram(&chain, &d, "K")?, &[])?;
        if (a.h1.clone(), a.euler.clone(), a.d3.clone())
            != (b.h1.clone(), b.euler.clone(), b.d3.clone())
        {
            push(
                &mut details,
                format!(
                    "{label} tb={t} rot={rot} coeff={}: ({:?}, {:?}) vs ({:?}, {:?})",
                    comp.coeff, a.h1, a.d3, b.h1, b.d3
                ),
            );
        }
    }
    Ok(Outcome::new(
        details.is_empty(),
        format!("{drawn} cases"),
        details,
    ))
}

struct MatrixCase {
    name: &'static str,
    t: i64,
    component: LegendrianComponent,
    printed: Vec<Vec<i64>>,
    stated_signature: i64,
}

fn first_rot(atlas: &Atlas, label: &str, t: i64) -> Result<i64> {
    atlas
        .realizations(label, t)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Domain(format!("{label} has no realization at tb {t}")))
}

fn matrix_cases(atlas: &Atlas) -> Result<Vec<MatrixCase>> {
    let mut out = Vec::new();
    for t in [-6, -7, -8] {
        out.push(MatrixCase {
            name: "Sigma(2,3,11), left trefoil",
            t,
            component: LegendrianComponent::new(
                "K",
                LEFT_TREFOIL,
                t,
                first_rot(atlas, LEFT_TREFOIL, t)?,
                Rational::new(-1 - 2 * t, 2),
            ),
            printed: vec![
                vec![1 + t, -t * (t + 2), t],
                vec![t, 1 - t - t * t, t - 1],
                vec![t, -(t + 2) * (t - 1), t - 3],
            ],
            stated_signature: 1,
        });
    }
    for t in [-2, -3, -4] {
        out.push(MatrixCase {
            name: "-Sigma(2,3,11), right trefoil",
            t,
            component: LegendrianComponent::new(
                "K",
                RIGHT_TREFOIL,
                t,
                first_rot(atlas, RIGHT_TREFOIL, t)?,
                Rational::new(1 - 2 * t, 2),
            ),
            printed: vec![
                vec![1 + t, -t * t - t, t],
                vec![t, -t * t, t - 1],
                vec![t, -t * t + 1, t - 3],
            ],
            stated_signature: -1,
        });
    }
    let m = 1;
    let label = torus_label(m as u32);
    for t in [-9, -10, -11] {
        out.push(MatrixCase {
            name: "L(7,4), T(2,-3) integer surgery",
            t,
            component: LegendrianComponent::new(
                "K",
                &label,
                t,
                first_rot(atlas, &label, t)?,
                Rational::int(-4 * m - 3 - t),
            ),
            printed: vec![
                vec![1 + t, -t * (4 * m + 4 + t)],
                vec![t, 4 * m + 3 - t * t - t * (4 * m + 3)],
            ],
            stated_signature: -2,
        });
    }
    let (k, m) = (2, 2);
    for t in [-2, -3, -4] {
        let key = TemplateKey {
            source: Source::Standard(k),
            m,
            t,
        };
        let c = t - k;
        out.push(MatrixCase {
            name: "L(11,4), family (14) with k = 2",
            t,
            component: LegendrianComponent::new(
                "K",
                UNKNOT,
                t,
                first_rot(atlas, UNKNOT, t)?,
                key.coeff(),
            ),
            printed: vec![
                vec![t + 1, (-t - 1) * t, t, t, t],
                vec![t, -t * t, t - 1, t - 1, t - 1],
                vec![t, -t * t + 1, c - 1, c, c],
                vec![t, -t * t + 1, c, c - m, c - m + 1],
                vec![t, -t * t + 1, c, c - m + 1, c - m - 2],
            ],
            stated_signature: -3,
        });
    }
    Ok(out)
}

fn printed_matrices(cfg: &SelftestConfig) -> Result<Outcome> {
    let mut details = Vec::new();
    let cases = matrix_cases(&cfg.atlas)?;
    let mut matrix_ok = 0;
    let mut sig_ok = 0;
    for case in &cases {
        let red = reduce(
            &ContactSurgeryDiagram::single(case.component.clone()),
            &SignPolicy::Enumerate,
        )?
        .remove(0);
        let g = build_q(&red.diagram)?;
        let printed = IntMatrix::from_rows(&case.printed);
        let sig = g.signature().signature();
        if g.q == printed {
            matrix_ok += 1;
        } else {
            push(
                &mut details,
                format!(
                    "{} t={}: computed Q {:?} differs from printed {:?}",
                    case.name,
                    case.t,
                    g.q.to_rows(),
                    case.printed
                ),
            );
        }
        if sig == case.stated_signature {
            sig_ok += 1;
        } else {
            push(
                &mut details,
                format!(
                    "{} t={}: signature {sig}, stated {}",
                    case.name, case.t, case.stated_signature
                ),
            );
        }
    }
    let n = cases.len();
    Ok(Outcome::new(
        matrix_ok == n && sig_ok == n,
        format!("{matrix_ok}/{n} matrices reproduced, {sig_ok}/{n} signatures match"),
        details,
    ))
}

fn d3_values(keys: impl Iterator<Item = TemplateKey>, atlas: &Atlas) -> Result<BTreeSet<Rational>> {
    let mut out = BTreeSet::new();
    for k in keys {
        out.extend(engine_at(&k, atlas)?.into_iter().filter_map(|e| e.d3));
    }
    Ok(out)
}

fn keys(source: Source, lo: i64, hi: i64) -> impl Iterator<Item = TemplateKey> {
    (lo..=hi)
        .map(move |t| TemplateKey { source, m: 0, t })
        .filter(|k| !k.coeff().is_zero())
}

fn max_tb(atlas: &Atlas, label: &str) -> Result<i64> {
    Ok(atlas.lookup(label)?.max_tb())
}

fn sigma_lists(cfg: &SelftestConfig) -> Result<Outcome> {
    let atlas = &cfg.atlas;
    let mut details = Vec::new();

    let got = d3_values(keys(Source::K5a1, -20, max_tb(atlas, K5A1)?), atlas)?;
    let want: BTreeSet<Rational> = (4..=10).map(|m| Rational::int(m * (3 - m) - 1)).collect();
    set_diff("K5a1 integer surgeries", &want, &got, &mut details);
    let first = got == want;

    let hi = max_tb(atlas, LEFT_TREFOIL)?;
    let lt = keys(Source::LeftTrefoil, -16, hi);
    let got = d3_values(lt, atlas)?;
    let mut ms = BTreeSet::new();
    for t in -16..=hi {
        for r in atlas.realizations(LEFT_TREFOIL, t)? {
            for x in [t + r, t - r] {
                ms.insert((x - 1) / 2);
            }
        }
    }
    let mut want = BTreeSet::new();
    for &m in &ms {
        let p = params(&[("m", m)]);
        for id in ["T1.1-2a", "T1.1-2b"] {
            if family(id)?.in_domain(&p) {
                want.extend(family_eval(id, &p)?.d3);
            }
        }
    }
    set_diff("left trefoil rational surgeries", &want, &got, &mut details);
    let second = got == want;
    Ok(Outcome::new(
        first && second,
        format!(
            "K5a1 list {}, left-trefoil lists {}",
            if first { "matches" } else { "differs" },
            if second { "match" } else { "differ" }
        ),
        details,
    ))
}

fn neg_sigma_lists(cfg: &SelftestConfig) -> Result<Outcome> {
    let atlas = &cfg.atlas;
    let mut details = Vec::new();
    let neg_max = max_tb(atlas, NEG_K5A1)?;
    let rt_max = max_tb(atlas, RIGHT_TREFOIL)?;

    let got = d3_values(keys(Source::NegK5a1, -20, neg_max.min(0)), atlas)?;
    let want: BTreeSet<Rational> = (0..=21).map(|m| Rational::int(m * (m - 1))).collect();
    set_diff("-K5a1 integer surgeries", &want, &got, &mut details);
    let first = got == want;

    let got = d3_values(keys(Source::RightTrefoil, -16, rt_max.min(0)), atlas)?;
    let want: BTreeSet<Rational> = (-17..=-1)
        .flat_map(|m| {
            [
                Rational::int(2 * m * (m + 1)),
                Rational::int(2 * (m + 1) * (m + 1)),
            ]
        })
        .collect();
    set_diff(
        "right trefoil rational surgeries",
        &want,
        &got,
        &mut details,
    );
    let second = got == want;

    // Reciprocal-integer single-knot diagrams, rot taken up to sign.
    let mut recips = BTreeSet::new();
    for key in keys(Source::NegK5a1, -20, neg_max).chain(keys(Source::RightTrefoil, -16, rt_max)) {
        let c = key.coeff();
        if c.reciprocal_n().is_none() {
            continue;
        }
        for r in atlas.realizations(&key.knot_label(), key.t)? {
            recips.insert(format!(
                "({}, tb {}, rot {}, {})",
                key.knot_label(),
                key.t,
                r.abs(),
                c
            ));
        }
    }
    let want_recips: BTreeSet<String> = [
        ("-K5a1", 0, 0, "1"),
        ("right-trefoil", 1, 0, "-1/2"),
        ("right-trefoil", 0, 1, "1/2"),
    ]
    .iter()
    .map(|(l, t, r, c)| format!("({l}, tb {t}, rot {r}, {c})"))
    .collect();
    set_diff("reciprocal diagrams", &want_recips, &recips, &mut details);
    let third = recips == want_recips;

    let st = engine_at(
        &TemplateKey {
            source: Source::RightTrefoil,
            m: 0,
            t: 1,
        },
        atlas,
    )?;
    let st_d3: BTreeSet<Rational> = st
        .iter()
        .filter(|e| e.rot == 0)
        .filter_map(|e| e.d3.clone())
        .collect();
    let fourth = st_d3 == [Rational::int(-1)].into_iter().collect();
    if !fourth {
        push(
            &mut details,
            format!(
                "d3 of (-1/2)-surgery on the tb 1 right trefoil: {}",
                show(&st_d3)
            ),
        );
    }
    let ok = |b: bool| if b { "ok" } else { "differs" };
    Ok(Outcome::new(
        first && second && third && fourth,
        format!(
            "-K5a1 {}, right trefoil {}, reciprocal diagrams {} ({} found), d3(xi_st) {}",
            ok(first),
            ok(second),
            ok(third),
            recips.len(),
            ok(fourth)
        ),
        details,
    ))
}

fn lens_tight(cfg: &SelftestConfig) -> Result<Outcome> {
    let mut details = Vec::new();
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for m in cfg.m_range(6) {
        let n = 4 * m + 3;
        let got = tight_lens_classes(m as u32, &cfg.atlas)?;
        let want: BTreeSet<BigInt> = (0..m)
            .map(|l| {
                Ok(canonical_euler(
                    &family_eval("T1.5", &params(&[("m", m), ("l", l)]))?.euler,
                    Some(n),
                ))
            })
            .collect::<Result<_>>()?;
        if got == want {
            good.push(m);
        } else {
            bad.push(m);
            set_diff(
                &format!("m={m} Euler classes (up to sign)"),
                &want,
                &got,
                &mut details,
            );
        }
    }
    Ok(Outcome::new(
        bad.is_empty(),
        format!("agree for m in {good:?}, differ for m in {bad:?}"),
        details,
    ))
}

fn canonical_set(entries: Vec<crate::classify::Cs1Entry>) -> BTreeSet<FamilyValue> {
    entries.into_iter().map(|e| e.value()).collect()
}

fn lens_integer_lists(cfg: &SelftestConfig) -> Result<Outcome> {
    let atlas = &cfg.atlas;
    let mut details = Vec::new();
    let bounds = Bounds {
        tb_min: -30,
        ..Bounds::default()
    };
    let mut ok = true;
    for m in cfg.m_range(4) {
        let top = TemplateKey {
            source: Source::Torus,
            m,
            t: -4 * m - 4,
        };
        let got1 = canonical_set(engine_at(&top, atlas)?);
        let want1 = family_values(&family("T1.7-1")?, m, &bounds);
        let mut got2 = BTreeSet::new();
        for t in -30..=-4 * m - 5 {
            got2.extend(canonical_set(engine_at(
                &TemplateKey {
                    source: Source::Torus,
                    m,
                    t,
                },
                atlas,
            )?));
        }
        let want2 = family_values(&family("T1.7-2")?, m, &bounds);
        set_diff(&format!("m={m} first list"), &want1, &got1, &mut details);
        set_diff(&format!("m={m} second list"), &want2, &got2, &mut details);
        ok &= got1 == want1 && got2 == want2;
    }
    let anchor = FamilyValue {
        euler: BigInt::from(3),
        d3: Some(Rational::new(17, 14)),
    };
    let evaluated = family_eval("T1.7-1", &params(&[("m", 1), ("k", -1)]))?;
    let engine = canonical_set(engine_at(
        &TemplateKey {
            source: Source::Torus,
            m: 1,
            t: -8,
        },
        atlas,
    )?);
    let anchor_ok = evaluated == anchor && engine.contains(&anchor);
    if !anchor_ok {
        push(
            &mut details,
            format!(
                "anchor (3, 17/14): formula gives {evaluated}, engine has it: {}",
                engine.contains(&anchor)
            ),
        );
    }
    Ok(Outcome::new(
        ok && anchor_ok,
        format!(
            "lists {} for m <= {}, anchor {}",
            if ok { "match" } else { "differ" },
            cfg.m_range(4).end(),
            if anchor_ok { "ok" } else { "wrong" }
        ),
        details,
    ))
}

fn euler_paths(cfg: &SelftestConfig) -> Result<Outcome> {
    let mut rng = rng(cfg, 8);
    let mut details = Vec::new();
    let mut per_case: BTreeMap<u8, usize> = BTreeMap::new();
    let mut literal = 0;
    let mut bad_cases: BTreeMap<u8, usize> = BTreeMap::new();
    let mut raw_bad = 0;
    let mut done = 0;
    let mut tries = 0;
    while done < 500 && tries < 100_000 {
        tries += 1;
        let t = rng.gen_range(-8..=2);
        let rot = rng.gen_range(-5..=5);
        let p = rng.gen_range(-20..=20);
        if p == 0 {
            continue;
        }
        let q = rng.gen_range(1..=6);
        let comp = LegendrianComponent::custom("K", t, rot, Rational::new(p, q));
        let chain = transform(&comp, None)?;
        let chain = if chain.signs.is_some() {
            chain
        } else {
            enumerate_sign_assignments(&chain)
                .choose(&mut rng)
                .cloned()
                .expect("at least one assignment")
        };
        let (l, m, s) = chain_shape(&chain);
        let Ok(case) = euler_case(l, m, &s) else {
            continue;
        };
        // Spread the sample over the four cases.
        if per_case.get(&case.number()).copied().unwrap_or(0) >= 125 {
            continue;
        }
        done += 1;
        *per_case.entry(case.number()).or_default() += 1;
        let exp = chain.expand();
        let rots = exp.rots().expect("signs assigned");
        let first_sign = exp.entries[0].sign();
        let closed = euler_closed_form(t, rot, &rots, l, &s, first_sign)?.e_k;
        let images = euler_from_images(&chain).expect("signs assigned");

        let signs = chain.signs.clone().unwrap_or_default();
        let red = reduce(
            &ContactSurgeryDiagram::single(comp.clone()),
            &SignPolicy::Explicit(signs.clone()),
        )?
        .remove(0);
        let rep = report(&red)?;
        let desc = format!(
            "tb={t} rot={rot} coeff={} case ({}) l={l} shape={s:?} signs={signs:?}",
            comp.coeff,
            case.number()
        );
        if rep.euler != rep.meridians[0].scale(&images) {
            raw_bad += 1;
            push(
                &mut details,
                format!("meridian images vs raw class: {desc}"),
            );
        }
        // e_K is only defined up to the order of H_1, so compare the classes.
        let mu = &rep.meridians[0];
        if mu.scale(&closed) != mu.scale(&images) {
            literal += 1;
            *bad_cases.entry(case.number()).or_default() += 1;
            push(
                &mut details,
                format!("closed form {closed} vs meridian images {images}: {desc}"),
            );
        }
    }
    let all_cases = [
        EulerCase::TwoEntries,
        EulerCase::Reciprocal,
        EulerCase::Negative,
        EulerCase::Mixed,
    ]
    .iter()
    .all(|c| per_case.contains_key(&c.number()));
    if !all_cases {
        push(&mut details, format!("case coverage {per_case:?}"));
    }
    Ok(Outcome::new(
        done == 500 && all_cases && raw_bad == 0 && literal == 0,
        format!(
            "{done} instances {per_case:?}, {literal} closed-form disagreements {bad_cases:?}, {raw_bad} raw-path disagreements"
        ),
        details,
    ))
}

fn table_spot_checks(cfg: &SelftestConfig) -> Result<Outcome> {
    let bounds = Bounds {
        m_max: cfg.m_cap.map_or(3, |c| c.min(3)),
        ..Bounds::default()
    };
    let mut details = Vec::new();
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for row in [3, 4, 5, 13, 26, 30] {
        let id = format!("Table1-{row}");
        let rep = verify_family(&id, &bounds, &cfg.atlas)?;
        if rep.passed() {
            good.push(row);
        } else {
            bad.push(row);
            let n = rep.mismatches().count();
            if let Some(p) = rep.mismatches().next() {
                push(
                    &mut details,
                    format!(
                        "({row}): {n}/{} keys differ, first at {}: table only {}, engine only {}",
                        rep.points.len(),
                        p.key,
                        show(&p.missing()),
                        show(&p.extra())
                    ),
                );
            }
        }
    }
    let mut alias_ok = true;
    for m in 1..=bounds.m_max {
        for (a, b) in [("Table1-1", "T1.7-1"), ("Table1-2", "T1.7-2")] {
            if family_values(&family(a)?, m, &bounds) != family_values(&family(b)?, m, &bounds) {
                alias_ok = false;
                push(&mut details, format!("{a} differs from {b} at m={m}"));
            }
        }
    }
    Ok(Outcome::new(
        bad.is_empty() && alias_ok,
        format!(
            "rows {good:?} agree, rows {bad:?} differ; rows (1), (2) {}",
            if alias_ok {
                "equal the lists"
            } else {
                "differ"
            }
        ),
        details,
    ))
}

fn tightness_exhaustive(_: &SelftestConfig) -> Result<Outcome> {
    let mut details = Vec::new();
    let mut checked = 0;
    let mut coeffs = BTreeSet::new();
    for p in -12i64..=12 {
        for q in 1..=4 {
            if p != 0 {
                coeffs.insert(Rational::new(p, q));
            }
        }
    }
    for t in -6i64..=-1 {
        let total = (-1 - t) as u64;
        for plus in 0..=total {
            let minus = total - plus;
            for r in &coeffs {
                for first in [None, Some(1i8), Some(-1i8)] {
                    checked += 1;
                    let got = unknot_tightness(t, plus, minus, r, first);
                    let label = format!("t={t} stabs=({plus},{minus}) r={r} first={first:?}");
                    let neg_t = Rational::int(-t);
                    let expect_status = if r.is_negative() {
                        Some(TightnessStatus::Tight)
                    } else if *r < neg_t || (plus > 0 && minus > 0) {
                        Some(TightnessStatus::Overtwisted)
                    } else if total == 0 {
                        Some(TightnessStatus::Tight)
                    } else {
                        let sign = if plus > 0 { 1 } else { -1 };
                        first.map(|s| {
                            if s == sign {
                                TightnessStatus::Tight
                            } else {
                                TightnessStatus::Overtwisted
                            }
                        })
                    };
                    match (expect_status, &got) {
                        (None, Err(Error::IncompleteSigns(_))) => {}
                        (Some(st), Ok(v)) if v.status == st && v.certificate.status() == st => {
                            if !r.is_negative() && *r < neg_t {
                                let want = meridian_tb_oracle(r, t);
                                let certified = v.certificate == Certificate::BennequinViolation
                                    && v.meridian_tb.as_ref() == Some(&want)
                                    && want > Rational::int(-1);
                                if !certified {
                                    push(&mut details, format!("{label}: Bennequin certificate missing or wrong ({:?})", v.meridian_tb));
                                }
                            }
                        }
                        _ => push(
                            &mut details,
                            format!("{label}: expected {expect_status:?}, got {got:?}"),
                        ),
                    }
                }
            }
        }
    }
    Ok(Outcome::new(
        details.is_empty(),
        format!("{checked} cases"),
        details,
    ))
}

fn xi_bounds(cfg: &SelftestConfig) -> Result<Outcome> {
    let bounds = Bounds::default();
    let mut details = Vec::new();
    let mut ok = true;
    let m_hi = *cfg.m_range(2).end();
    for m in 1..=m_hi {
        for n in [7, 9, 11] {
            let r = xi_nm(m as u32, n, &bounds)?;
            if !r.cs_gt_1 {
                ok = false;
                push(
                    &mut details,
                    format!(
                        "m={m} N={n}: witnesses {:?}, unresolved {:?}",
                        r.witnesses, r.unresolved
                    ),
                );
            }
        }
    }
    let r = xi_nm(1, 0, &bounds)?;
    let found = r.witnesses.iter().any(|(id, _)| id == "Table1-4");
    if !found {
        push(
            &mut details,
            format!("m=1 N=0: witnesses {:?}", r.witnesses),
        );
    }
    Ok(Outcome::new(
        ok && found && !r.cs_gt_1,
        format!("cs > 1 shown for m <= {m_hi}, N in {{7, 9, 11}}: {ok}; (m, N) = (1, 0) in family (4): {found}"),
        details,
    ))
}

fn oracle_checks(cfg: &SelftestConfig) -> Result<Outcome> {
    let mut rng = rng(cfg, 12);
    let mut details = Vec::new();

    let mut sig_bad = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let denoms: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let mut link = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..i {
                let v = rng.gen_range(-5..=5);
                link[i][j] = v;
                link[j][i] = v;
            }
        }
        let ps: Vec<i64> = (0..n).map(|_| rng.gen_range(-10..=10)).collect();
        let q: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            ps[i]
                        } else {
                            denoms[j] * link[i][j]
                        }
                    })
                    .collect()
            })
            .collect();
        let a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::new(ps[i], denoms[i])
                        } else {
                            Rational::int(link[i][j])
                        }
                    })
                    .collect()
            })
            .collect();
        let big: Vec<BigInt> = denoms.iter().map(|&d| BigInt::from(d)).collect();
        let got = signature_generalized(&IntMatrix::from_rows(&q), &big)?;
        let want = sturm_inertia(&a);
        if got != want {
            sig_bad += 1;
            push(
                &mut details,
                format!("Q={q:?} q={denoms:?}: congruence {got:?}, Sturm {want:?}"),
            );
        }
    }

    let mut cf_bad = 0;
    for _ in 0..1000 {
        let r = Rational::new(rng.gen_range(-200..=-1), rng.gen_range(1..=50));
        let e = negcf(&r)?;
        if bracket(&e) != r || !admissible(&e) {
            cf_bad += 1;
            push(
                &mut details,
                format!("negcf({r}) = {e:?} does not round-trip"),
            );
        }
    }

    let mut snf_bad = 0;
    for _ in 0..200 {
        let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let a = IntMatrix::from_rows(&a);
        let u = random_unimodular(&mut rng, rows);
        let v = random_unimodular(&mut rng, cols);
        let b = u.mul(&a).mul(&v);
        if snf(&a).diagonal() != snf(&b).diagonal() {
            snf_bad += 1;
            push(
                &mut details,
                format!(
                    "SNF of {:?} changed under unimodular transforms",
                    a.to_rows()
                ),
            );
        }
    }
    Ok(Outcome::new(
        sig_bad + cf_bad + snf_bad == 0,
        format!("signature {sig_bad}/200, negcf {cf_bad}/1000, SNF {snf_bad}/200 disagreements"),
        details,
    ))
}

/// Product of random elementary row operations.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..6 {
        let mut e = IntMatrix::identity(n);
        match rng.gen_range(0..3) {
            0 if n > 1 => {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                e[(i, j)] = BigInt::from(rng.gen_range(-3..=3));
            }
            1 if n > 1 => {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                e = IntMatrix::from_rows(
                    &(0..n)
                        .map(|r| {
                            let src = if r == i {
                                j
                            } else if r == j {
                                i
                            } else {
                                r
                            };
                            (0..n).map(|c| i64::from(c == src)).collect::<Vec<i64>>()
                        })
                        .collect::<Vec<_>>(),
                );
            }
            _ => {
                let i = rng.gen_range(0..n);
                e[(i, i)] = BigInt::from(-1);
            }
        }
        m = e.mul(&m);
    }
    m
}
