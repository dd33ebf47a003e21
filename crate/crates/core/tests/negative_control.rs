//! Corrupting one atlas entry must turn passing criteria into named failures.

use csn_core::knotdata::torus_label;
use csn_core::selftest::{run_one, SelftestConfig};
use csn_core::{Atlas, AtlasEntry};

fn corrupted() -> Atlas {
    let mut atlas = Atlas::standard();
    let mut entry = atlas.lookup(&torus_label(1)).unwrap();
    // The true peaks of T(2,-3) are (-6, ±1).
    entry.peaks = vec![(-6, 3), (-6, -3)];
    atlas.replace(AtlasEntry {
        citation: "corrupted fixture".into(),
        ..entry
    });
    atlas
}

#[test]
fn corrupted_torus_peaks_fail_lens_criteria() {
    let good = SelftestConfig {
        m_cap: Some(1),
        ..SelftestConfig::default()
    };
    let bad = SelftestConfig {
        atlas: corrupted(),
        ..good.clone()
    };
    for n in [6, 7] {
        let ok = run_one(n, &good).unwrap();
        assert!(ok.passed, "{ok}");
        let broken = run_one(n, &bad).unwrap();
        assert!(
            !broken.passed,
            "criterion {n} missed the corruption: {broken}"
        );
        assert!(broken
            .to_string()
            .starts_with(&format!("FAIL {n:>2} {}", ok.title)));
    }
}

#[test]
fn atlas_independent_criteria_still_pass() {
    let bad = SelftestConfig {
        atlas: corrupted(),
        m_cap: Some(1),
        ..SelftestConfig::default()
    };
    for n in [10, 12] {
        let r = run_one(n, &bad).unwrap();
        assert!(r.passed, "{r}");
    }
}
