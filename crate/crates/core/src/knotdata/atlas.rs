use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Mountain-range data for one knot type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtlasEntry {
    pub label: String,
    /// Oriented peaks `(tb_max, rot)`.
    pub peaks: Vec<(i64, i64)>,
    pub legendrian_simple: bool,
    /// Overrides for non-generic levels: `(tb, admissible rots)`.
    pub extra_ranges: Vec<(i64, BTreeSet<i64>)>,
    /// Every realization has `tb + rot` odd.
    pub odd_parity: bool,
    pub citation: String,
}

impl AtlasEntry {
    fn simple(label: &str, peaks: Vec<(i64, i64)>, citation: &str) -> AtlasEntry {
        AtlasEntry {
            label: label.to_string(),
            peaks,
            legendrian_simple: true,
            extra_ranges: Vec::new(),
            odd_parity: true,
            citation: citation.to_string(),
        }
    }

    pub fn max_tb(&self) -> i64 {
        self.peaks
            .iter()
            .map(|p| p.0)
            .max()
            .expect("atlas entry without peaks")
    }

    /// Admissible oriented rotation numbers at `tb`: the union of the
    /// stabilization fans below each peak.
    pub fn realizations(&self, tb: i64) -> BTreeSet<i64> {
        if let Some((_, set)) = self.extra_ranges.iter().find(|(t, _)| *t == tb) {
            return set.clone();
        }
        let mut out = BTreeSet::new();
        for &(pt, pr) in &self.peaks {
            let s = pt - tb;
            if s < 0 {
                continue;
            }
            out.extend((0..=s).map(|i| pr - s + 2 * i));
        }
        out
    }
}

/// The knot types used by the classification engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atlas {
    entries: Vec<AtlasEntry>,
}

pub const UNKNOT: &str = "unknot";
pub const RIGHT_TREFOIL: &str = "right-trefoil";
pub const LEFT_TREFOIL: &str = "left-trefoil";
pub const K5A1: &str = "K5a1";
pub const NEG_K5A1: &str = "-K5a1";

/// Atlas label of the torus knot `T(2, -(2m+1))`.
pub fn torus_label(m: u32) -> String {
    format!("T(2,-{})", 2 * m + 1)
}

fn parse_torus(label: &str) -> Option<u32> {
    let n: u32 = label
        .strip_prefix("T(2,-")?
        .strip_suffix(')')?
        .parse()
        .ok()?;
    (n >= 3 && n % 2 == 1).then(|| (n - 1) / 2)
}

fn torus_entry(m: u32) -> AtlasEntry {
    let m = i64::from(m);
    let tb = -4 * m - 2;
    let peaks = (0..m)
        .flat_map(|i| [(tb, 2 * i + 1), (tb, -(2 * i + 1))])
        .collect();
    AtlasEntry::simple(
        &torus_label(m as u32),
        peaks,
        "Etnyre-Honda, Knots and contact geometry I: torus knots and the figure eight knot",
    )
}

impl Atlas {
    pub fn standard() -> Atlas {
        let mut neg_k5a1 = AtlasEntry::simple(
            NEG_K5A1,
            vec![(1, 0)],
            "Etnyre-Ng-Vertesi, Legendrian and transverse twist knots (mirror 5_2, stabilization fan from the peak)",
        );
        neg_k5a1.legendrian_simple = false;
        Atlas {
            entries: vec![
                AtlasEntry::simple(UNKNOT, vec![(-1, 0)], "Eliashberg-Fraser, Topologically trivial Legendrian knots"),
                AtlasEntry::simple(
                    RIGHT_TREFOIL,
                    vec![(1, 0)],
                    "Etnyre-Honda, Knots and contact geometry I: torus knots and the figure eight knot",
                ),
                AtlasEntry::simple(
                    LEFT_TREFOIL,
                    vec![(-6, 1), (-6, -1)],
                    "Etnyre-Honda, Knots and contact geometry I: torus knots and the figure eight knot",
                ),
                AtlasEntry::simple(
                    K5A1,
                    vec![(-8, 1), (-8, -1)],
                    "Etnyre-Ng-Vertesi, Legendrian and transverse twist knots",
                ),
                neg_k5a1,
            ],
        }
    }

    /// An atlas with the given entries in place of the standard ones.
    pub fn with_entries(entries: Vec<AtlasEntry>) -> Atlas {
        Atlas { entries }
    }

    pub fn replace(&mut self, entry: AtlasEntry) {
        self.entries.retain(|e| e.label != entry.label);
        self.entries.push(entry);
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.label.clone()).collect()
    }

    pub fn lookup(&self, label: &str) -> Result<AtlasEntry> {
        if let Some(e) = self.entries.iter().find(|e| e.label == label) {
            return Ok(e.clone());
        }
        match parse_torus(label) {
            Some(m) => Ok(torus_entry(m)),
            None => Err(Error::UnknownLabel(label.to_string())),
        }
    }

    pub fn contains(&self, label: &str) -> bool {
        self.lookup(label).is_ok()
    }

    pub fn realizations(&self, label: &str, tb: i64) -> Result<BTreeSet<i64>> {
        Ok(self.lookup(label)?.realizations(tb))
    }
}

impl Default for Atlas {
    fn default() -> Self {
        Atlas::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> BTreeSet<i64> {
        v.iter().copied().collect()
    }

    #[test]
    fn torus_knot_levels() {
        let a = Atlas::standard();
        let t = torus_label(1);
        assert_eq!(t, "T(2,-3)");
        assert_eq!(a.realizations(&t, -6).unwrap(), set(&[-1, 1]));
        assert_eq!(a.realizations(&t, -8).unwrap(), set(&[-3, -1, 1, 3]));
        assert_eq!(a.realizations(&t, -5).unwrap(), set(&[]));
        assert_eq!(
            a.realizations(&torus_label(3), -14).unwrap(),
            set(&[-5, -3, -1, 1, 3, 5])
        );
    }

    #[test]
    fn unknot_levels() {
        let a = Atlas::standard();
        assert_eq!(a.realizations(UNKNOT, -3).unwrap(), set(&[-2, 0, 2]));
        assert_eq!(a.realizations(UNKNOT, -1).unwrap(), set(&[0]));
    }

    #[test]
    fn left_trefoil_matches_torus_m1() {
        let a = Atlas::standard();
        for tb in -12..=-6 {
            assert_eq!(
                a.realizations(LEFT_TREFOIL, tb).unwrap(),
                a.realizations("T(2,-3)", tb).unwrap()
            );
        }
    }

    #[test]
    fn unknown_label() {
        assert!(Atlas::standard().lookup("figure-eight").is_err());
        assert!(Atlas::standard().lookup("T(2,-4)").is_err());
    }

    #[test]
    fn extra_ranges_override() {
        let mut e = Atlas::standard().lookup(NEG_K5A1).unwrap();
        e.extra_ranges.push((-1, set(&[0])));
        assert_eq!(e.realizations(-1), set(&[0]));
        assert_eq!(e.realizations(0), set(&[-1, 1]));
    }
}
