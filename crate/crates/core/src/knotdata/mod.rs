//! Legendrian links, contact surgery diagrams and the mountain-range atlas.

mod atlas;

use std::fmt;

pub use atlas::{
    torus_label, Atlas, AtlasEntry, K5A1, LEFT_TREFOIL, NEG_K5A1, RIGHT_TREFOIL, UNKNOT,
};

use crate::error::{Error, Result};
use crate::exactmath::Rational;

pub const CUSTOM: &str = "custom";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LegendrianComponent {
    pub name: String,
    pub knot_label: String,
    pub tb: i64,
    pub rot: i64,
    /// Contact surgery coefficient.
    pub coeff: Rational,
}

impl LegendrianComponent {
    pub fn new(
        name: &str,
        knot_label: &str,
        tb: i64,
        rot: i64,
        coeff: Rational,
    ) -> LegendrianComponent {
        LegendrianComponent {
            name: name.to_string(),
            knot_label: knot_label.to_string(),
            tb,
            rot,
            coeff,
        }
    }

    pub fn unknot(name: &str, tb: i64, rot: i64, coeff: Rational) -> LegendrianComponent {
        LegendrianComponent::new(name, UNKNOT, tb, rot, coeff)
    }

    pub fn custom(name: &str, tb: i64, rot: i64, coeff: Rational) -> LegendrianComponent {
        LegendrianComponent::new(name, CUSTOM, tb, rot, coeff)
    }

    pub fn topological_coefficient(&self) -> Rational {
        topological_coefficient(self)
    }
}

/// Smooth surgery coefficient `coeff + tb`.
pub fn topological_coefficient(c: &LegendrianComponent) -> Rational {
    &c.coeff + c.tb
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ContactSurgeryDiagram {
    pub components: Vec<LegendrianComponent>,
    /// Symmetric linking numbers; the diagonal is ignored.
    pub linking: Vec<Vec<i64>>,
}

impl ContactSurgeryDiagram {
    pub fn new(
        components: Vec<LegendrianComponent>,
        linking: Vec<Vec<i64>>,
    ) -> ContactSurgeryDiagram {
        ContactSurgeryDiagram {
            components,
            linking,
        }
    }

    /// Components with pairwise linking zero.
    pub fn unlinked(components: Vec<LegendrianComponent>) -> ContactSurgeryDiagram {
        let n = components.len();
        ContactSurgeryDiagram {
            components,
            linking: vec![vec![0; n]; n],
        }
    }

    pub fn single(c: LegendrianComponent) -> ContactSurgeryDiagram {
        ContactSurgeryDiagram::unlinked(vec![c])
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.components
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownComponent(name.to_string()))
    }

    pub fn set_link(&mut self, i: usize, j: usize, l: i64) {
        self.linking[i][j] = l;
        self.linking[j][i] = l;
    }

    pub fn validate(&self, atlas: &Atlas) -> std::result::Result<(), Vec<Violation>> {
        let v = validate(self, atlas);
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub component: Option<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.component {
            Some(c) => write!(f, "{c}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

pub const VANISHING_COEFFICIENT: &str = "vanishing contact surgery coefficient";
pub const ROT_OUTSIDE_RANGE: &str = "rot outside mountain range";
pub const TB_ABOVE_PEAK: &str = "tb above mountain range";
pub const PARITY: &str = "tb + rot must be odd";

/// All invariant violations of `d`; empty means valid.
pub fn validate(d: &ContactSurgeryDiagram, atlas: &Atlas) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = d.components.len();
    let at = |c: &LegendrianComponent, m: &str| Violation {
        component: Some(c.name.clone()),
        message: m.to_string(),
    };

    if d.linking.len() != n || d.linking.iter().any(|r| r.len() != n) {
        out.push(Violation {
            component: None,
            message: format!("linking matrix is not {n}x{n}"),
        });
    } else {
        for i in 0..n {
            for j in 0..i {
                if d.linking[i][j] != d.linking[j][i] {
                    out.push(Violation {
                        component: None,
                        message: format!(
                            "asymmetric linking between {} and {}",
                            d.components[i].name, d.components[j].name
                        ),
                    });
                }
            }
        }
    }
    for (i, c) in d.components.iter().enumerate() {
        if d.components[..i].iter().any(|o| o.name == c.name) {
            out.push(at(c, "duplicate component name"));
        }
        if c.coeff.is_zero() {
            out.push(at(c, VANISHING_COEFFICIENT));
        }
        if c.knot_label == CUSTOM {
            continue;
        }
        let Ok(entry) = atlas.lookup(&c.knot_label) else {
            out.push(at(c, &format!("unknown atlas label {}", c.knot_label)));
            continue;
        };
        if entry.odd_parity && (c.tb + c.rot).rem_euclid(2) != 1 {
            out.push(at(c, PARITY));
        }
        if c.tb > entry.max_tb() {
            out.push(at(c, TB_ABOVE_PEAK));
        } else if !entry.realizations(c.tb).contains(&c.rot) {
            out.push(at(c, ROT_OUTSIDE_RANGE));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::q;

    #[test]
    fn validate_examples() {
        let a = Atlas::standard();
        let ok = ContactSurgeryDiagram::single(LegendrianComponent::unknot("K", -1, 0, q(-3, 4)));
        assert!(validate(&ok, &a).is_empty());

        let bad_rot =
            ContactSurgeryDiagram::single(LegendrianComponent::unknot("K", -1, 5, q(-3, 4)));
        let v = validate(&bad_rot, &a);
        assert!(v.iter().any(|x| x.message == ROT_OUTSIDE_RANGE));

        let zero = ContactSurgeryDiagram::single(LegendrianComponent::custom("K", -1, 0, q(0, 1)));
        assert_eq!(validate(&zero, &a)[0].message, VANISHING_COEFFICIENT);
    }

    #[test]
    fn validate_linking_shape() {
        let a = Atlas::standard();
        let mut d = ContactSurgeryDiagram::unlinked(vec![
            LegendrianComponent::unknot("A", -1, 0, q(-1, 1)),
            LegendrianComponent::unknot("B", -1, 0, q(-1, 1)),
        ]);
        d.linking[0][1] = 2;
        assert_eq!(validate(&d, &a).len(), 1);
        d.set_link(0, 1, 2);
        assert!(validate(&d, &a).is_empty());
        assert_eq!(validate(&d, &a), validate(&d, &a));
    }

    #[test]
    fn topological_coefficients() {
        let c = LegendrianComponent::custom("K", -8, 1, q(1, 1));
        assert_eq!(topological_coefficient(&c), q(-7, 1));
        let c = LegendrianComponent::custom("K", -6, 1, q(-13, 2));
        assert_eq!(topological_coefficient(&c), q(-25, 2));
        let c = LegendrianComponent::new("K", RIGHT_TREFOIL, 1, 0, q(-1, 2));
        assert_eq!(topological_coefficient(&c), q(1, 2));
    }
}
