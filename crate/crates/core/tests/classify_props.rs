use std::collections::BTreeSet;

use proptest::prelude::*;

use csn_core::classify::{
    engine_at, enumerate_manifold, family_values, obstruction, realized, registry,
    tight_lens_classes, unknot_tightness, xi_nm, Bounds, FamilyValue, Obstruction, Target,
};
use csn_core::{Atlas, Flavor, Manifold, Rational};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn tightness_is_symmetric_under_sign_flip(
        (t, plus) in (-9i64..=-1).prop_flat_map(|t| (Just(t), 0..=(-1 - t) as u64)),
        p in -30i64..=30,
        q in 1i64..=5,
        first in prop::option::of(prop_oneof![Just(1i8), Just(-1i8)]),
    ) {
        let minus = (-1 - t) as u64 - plus;
        let r = Rational::new(p, q);
        let a = unknot_tightness(t, plus, minus, &r, first);
        let b = unknot_tightness(t, minus, plus, &r, first.map(|s| -s));
        match (a, b) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "one side failed: {:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn bad_counts_are_rejected(t in -9i64..=-1, plus in 0u64..12, minus in 0u64..12) {
        prop_assume!(plus + minus != (-1 - t) as u64);
        prop_assert!(unknot_tightness(t, plus, minus, &Rational::int(-1), None).is_err());
    }
}

#[test]
fn flavor_sets_are_nested() {
    let atlas = Atlas::standard();
    let bounds = Bounds::default()
        .with_overrides("m=2,tb=10,sigma_tb=12")
        .unwrap();
    for manifold in [
        Manifold::Lens(1),
        Manifold::Lens(2),
        Manifold::Sigma2311,
        Manifold::NegSigma2311,
    ] {
        let entries = enumerate_manifold(manifold, &bounds, &atlas).unwrap();
        let set = |f| realized(&entries, f, None);
        let (cs, z, inv, pm) = (
            set(Flavor::Rational),
            set(Flavor::Integer),
            set(Flavor::Reciprocal),
            set(Flavor::PlusMinusOne),
        );
        if matches!(manifold, Manifold::Lens(_)) {
            assert!(!pm.is_empty(), "{manifold}");
        }
        assert!(pm.is_subset(&inv), "{manifold}");
        assert!(inv.is_subset(&cs), "{manifold}");
        assert!(z.is_subset(&cs), "{manifold}");
        assert!(pm.is_subset(&z), "{manifold}");
    }
}

#[test]
fn tight_lens_structures_number_m() {
    let atlas = Atlas::standard();
    for m in 1..=6u32 {
        assert_eq!(
            tight_lens_classes(m, &atlas).unwrap().len(),
            m as usize,
            "m = {m}"
        );
    }
}

#[test]
fn d3_two_never_appears_on_sigma() {
    let two = Rational::int(2);
    for sigma_tb in [20, 60, 200] {
        let bounds = Bounds {
            sigma_tb_min: -sigma_tb,
            ..Bounds::default()
        };
        for rec in registry()
            .into_iter()
            .filter(|r| r.target == Target::Sigma2311)
        {
            let vals = family_values(&rec, 0, &bounds);
            assert!(!vals.is_empty(), "{}", rec.id);
            assert!(
                vals.iter().all(|v| v.d3.as_ref() != Some(&two)),
                "{} reaches d3 = 2",
                rec.id
            );
        }
    }
}

fn obstruction_violators(bounds: &Bounds) -> (BTreeSet<&'static str>, usize) {
    let mut bad = BTreeSet::new();
    let mut checked = 0;
    for rec in registry()
        .into_iter()
        .filter(|r| r.target == Target::Lens && !r.tight)
    {
        let Some(ob) = obstruction(rec.id) else {
            continue;
        };
        for m in 1..=bounds.m_max {
            for p in rec.grid(m, bounds) {
                let Some(d3) = rec.eval_unchecked(&p).d3 else {
                    continue;
                };
                let holds = match ob {
                    Obstruction::NegativeD3 => d3.is_negative(),
                    Obstruction::D3AtMost7 => d3 <= Rational::int(7),
                    Obstruction::D3BelowMPlus3 => d3 < Rational::int(m + 3),
                    _ => continue,
                };
                if !holds {
                    bad.insert(rec.id);
                }
                checked += 1;
            }
        }
    }
    (bad, checked)
}

/// The d3 bounds attached to rows (3), (6), (9), (20) and (28) fail for the
/// formulas as printed, already on the default grid; every other bound holds.
#[test]
fn obstruction_bound_violators() {
    let known: BTreeSet<_> = ["Table1-20", "Table1-28", "Table1-3", "Table1-6", "Table1-9"].into();
    let wide = Bounds {
        m_max: 5,
        tb_min: -30,
        k_abs: 12,
        ..Bounds::default()
    };
    for bounds in [Bounds::default(), wide] {
        let (bad, checked) = obstruction_violators(&bounds);
        assert!(checked > 1000, "only {checked} points checked");
        assert_eq!(bad, known);
    }
}

/// Past tb -12 the printed row (3) reaches the xi_7^2 target, but the surgery
/// it names does not realize that value.
#[test]
fn row_three_witness_is_not_realized() {
    let atlas = Atlas::standard();
    let bounds = Bounds {
        tb_min: -14,
        m_max: 2,
        ..Bounds::default()
    };
    let x = xi_nm(2, 7, &bounds).unwrap();
    assert!(!x.cs_gt_1);
    let (id, p) = &x.witnesses[0];
    assert_eq!(id, "Table1-3");
    let rec = registry().into_iter().find(|r| r.id == "Table1-3").unwrap();
    let key = rec.template_key(p).unwrap();
    let target = FamilyValue {
        euler: x.euler.clone(),
        d3: Some(x.d3.clone()),
    };
    let engine: BTreeSet<_> = engine_at(&key, &atlas)
        .unwrap()
        .iter()
        .map(|e| e.value().canonical(Some(11)))
        .collect();
    assert!(!engine.contains(&target), "{target:?}");
    assert!(xi_nm(2, 7, &Bounds::default()).unwrap().cs_gt_1);
}
