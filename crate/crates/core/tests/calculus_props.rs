use proptest::prelude::*;
use proptest::sample::Index;

use csn_core::calculus::{cancellation_pair, chain_to_diagram, replace_reciprocal, transform};
use csn_core::invariants::{invariants, SignPolicy};
use csn_core::{Atlas, ContactSurgeryDiagram, LegendrianComponent, Rational};

const LABELS: [&str; 5] = ["unknot", "right-trefoil", "left-trefoil", "K5a1", "T(2,-5)"];

/// A valid Legendrian realization `s` stabilizations below the top.
fn legendrian(label: usize, s: i64, pick: Index) -> LegendrianComponent {
    let atlas = Atlas::standard();
    let entry = atlas.lookup(LABELS[label]).unwrap();
    let tb = entry.max_tb() - s;
    let rots: Vec<i64> = entry.realizations(tb).into_iter().collect();
    LegendrianComponent::new("K", LABELS[label], tb, *pick.get(&rots), Rational::int(-1))
}

fn unknot_with_rot(s: i64, pick: Index, coeff: Rational) -> LegendrianComponent {
    LegendrianComponent {
        coeff,
        ..legendrian(0, s, pick)
    }
}

fn nonzero_coeff() -> impl Strategy<Value = Rational> {
    (-48i64..=48, 1i64..=6)
        .prop_filter("nonzero", |(p, _)| *p != 0)
        .prop_map(|(p, q)| Rational::new(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn transform_recomposes(s in 0i64..10, pick in any::<Index>(), r in nonzero_coeff()) {
        let k = unknot_with_rot(s, pick, r.clone());
        let chain = transform(&k, None).unwrap();
        prop_assert!(chain.is_expanded());
        prop_assert_eq!(chain.recompose(), r);
        let stabs: Vec<u64> = chain.entries.iter().map(|e| e.stabs).collect();
        prop_assert!(stabs.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reciprocal_transform_is_the_replacement(
        s in 0i64..6,
        pick in any::<Index>(),
        n in 1i64..8,
        positive in any::<bool>(),
    ) {
        let c = Rational::new(if positive { 1 } else { -1 }, n);
        let k = unknot_with_rot(s, pick, c);
        let a = transform(&k, None).unwrap();
        let b = replace_reciprocal(&k).unwrap();
        prop_assert_eq!(a.entries, b.entries);
        prop_assert_eq!(a.splits, b.splits);
    }

    #[test]
    fn cancellation_pairs_vanish(label in 0usize..5, s in 0i64..3, pick in any::<Index>(), n in 1u64..4) {
        let k = legendrian(label, s, pick);
        let d = cancellation_pair(&k, n);
        d.validate(&Atlas::standard()).unwrap();
        for rep in invariants(&d, &SignPolicy::Enumerate).unwrap() {
            prop_assert!(rep.h1.is_empty());
            prop_assert_eq!(rep.d3, Some(Rational::zero()));
        }
    }

    #[test]
    fn replacement_keeps_invariants(
        label in 0usize..5,
        s in 0i64..3,
        pick in any::<Index>(),
        n in 1i64..5,
        positive in any::<bool>(),
    ) {
        let mut k = legendrian(label, s, pick);
        k.coeff = Rational::new(if positive { 1 } else { -1 }, n);
        let single = ContactSurgeryDiagram::single(k.clone());
        let chain = replace_reciprocal(&k).unwrap();
        let pushed = chain_to_diagram(&chain, &single, "K").unwrap();
        prop_assert_eq!(pushed.len(), n as usize);
        let a = invariants(&single, &SignPolicy::Enumerate).unwrap().remove(0);
        let b = invariants(&pushed, &SignPolicy::Enumerate).unwrap().remove(0);
        prop_assert_eq!(&a.h1, &b.h1);
        prop_assert_eq!(&a.d3, &b.d3);
        prop_assert_eq!(a.euler.order(), b.euler.order());
        // The original meridian is the sum of the push-off meridians.
        let sum = b.meridians.iter().skip(1).fold(b.meridians[0].clone(), |acc, m| acc.add(m));
        prop_assert_eq!(a.euler_in_meridian(0), b.euler.multiple_of(&sum));
    }
}
