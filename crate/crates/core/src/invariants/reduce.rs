use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::calculus::{assign_signs, enumerate_sign_assignments, transform, ExpansionChain};
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::knotdata::{ContactSurgeryDiagram, LegendrianComponent};

/// How stabilization signs introduced by the transformation lemma are chosen.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SignPolicy {
    /// Every distinct rotation vector.
    #[default]
    Enumerate,
    /// One sign per new stabilization, components in diagram order.
    Explicit(Vec<i8>),
}

impl SignPolicy {
    /// Parses `enumerate` or a string over `+`/`-`.
    pub fn parse(s: &str) -> Result<SignPolicy> {
        if s == "enumerate" {
            return Ok(SignPolicy::Enumerate);
        }
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::Domain(format!("bad stabilization sign `{c}`"))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(SignPolicy::Explicit)
    }
}

/// A diagram with only `±1/n` coefficients and concrete rotation numbers,
/// plus where each original component went.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub diagram: ContactSurgeryDiagram,
    /// Original component index -> indices in `diagram`.
    pub groups: Vec<Vec<usize>>,
    /// Compressed chain per original component; `None` when kept as is.
    pub chains: Vec<Option<ExpansionChain>>,
}

impl Reduction {
    pub fn trace(&self) -> String {
        let mut lines = Vec::new();
        for ch in self.chains.iter().flatten() {
            let signs: String = ch
                .signs
                .as_ref()
                .map(|s| s.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect())
                .unwrap_or_default();
            let mut line = format!("{}({}) = {}", ch.base.name, ch.base.coeff, ch);
            if !signs.is_empty() {
                line.push_str(&format!(" [signs {signs}]"));
            }
            lines.push(line);
        }
        lines.join("; ")
    }

    pub fn rots(&self) -> Vec<i64> {
        self.diagram.components.iter().map(|c| c.rot).collect()
    }
}

fn needs_transform(c: &LegendrianComponent) -> bool {
    c.coeff.reciprocal_n().is_none()
}

/// Rewrite every non-reciprocal coefficient through the transformation
/// lemma, once per sign assignment allowed by `policy`.
pub fn reduce(d: &ContactSurgeryDiagram, policy: &SignPolicy) -> Result<Vec<Reduction>> {
    let mut options: Vec<Vec<Option<ExpansionChain>>> = Vec::new();
    let mut cursor = 0usize;
    for c in &d.components {
        if c.coeff.is_zero() {
            return Err(Error::ZeroCoefficient);
        }
        if !needs_transform(c) {
            options.push(vec![None]);
            continue;
        }
        let chain = transform(c, None)?.compress();
        let choices = match policy {
            SignPolicy::Enumerate => enumerate_sign_assignments(&chain),
            SignPolicy::Explicit(signs) => {
                let k = chain.total_stabs() as usize;
                let slice = signs.get(cursor..cursor + k).ok_or_else(|| {
                    Error::IncompleteSigns(format!("component {} needs {k} more signs", c.name))
                })?;
                cursor += k;
                vec![assign_signs(&chain, slice)?]
            }
        };
        options.push(choices.into_iter().map(Some).collect());
    }
    if let SignPolicy::Explicit(signs) = policy {
        if cursor != signs.len() {
            return Err(Error::IncompleteSigns(format!(
                "{} signs supplied, diagram uses {cursor}",
                signs.len()
            )));
        }
    }

    let mut out = Vec::new();
    let mut idx = vec![0usize; options.len()];
    loop {
        let pick: Vec<Option<ExpansionChain>> = idx
            .iter()
            .zip(&options)
            .map(|(&i, o)| o[i].clone())
            .collect();
        out.push(assemble(d, pick));
        let mut p = 0;
        while p < idx.len() {
            idx[p] += 1;
            if idx[p] < options[p].len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
        if p == idx.len() {
            break;
        }
    }
    Ok(out)
}

fn assemble(d: &ContactSurgeryDiagram, chains: Vec<Option<ExpansionChain>>) -> Reduction {
    let mut comps = Vec::new();
    let mut origin: Vec<(usize, Option<usize>)> = Vec::new();
    let mut groups = Vec::new();
    for (i, c) in d.components.iter().enumerate() {
        let mut g = Vec::new();
        match &chains[i] {
            None => {
                g.push(comps.len());
                comps.push(c.clone());
                origin.push((i, None));
            }
            Some(ch) => {
                let rots = ch.rots().expect("signs assigned");
                for (e, entry) in ch.entries.iter().enumerate() {
                    let mut n = c.clone();
                    n.name = format!("{}.{}", c.name, e + 1);
                    n.tb = ch.tb(e);
                    n.rot = rots[e];
                    n.coeff = entry.coeff.clone();
                    g.push(comps.len());
                    comps.push(n);
                    origin.push((i, Some(e)));
                }
            }
        }
        groups.push(g);
    }
    let k = comps.len();
    let mut linking = vec![vec![0i64; k]; k];
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let ((i, x), (j, y)) = (origin[a], origin[b]);
            linking[a][b] = match (x, y) {
                (Some(x), Some(y)) if i == j => chains[i].as_ref().unwrap().linking(x, y),
                _ => d.linking[i][j],
            };
        }
    }
    Reduction {
        diagram: ContactSurgeryDiagram::new(comps, linking),
        groups,
        chains,
    }
}

/// Replace each `±1/n` component by `n` push-offs with coefficient `±1`.
/// Returns the expanded diagram and, per input component, its indices.
pub fn expand_reciprocals(
    d: &ContactSurgeryDiagram,
) -> Result<(ContactSurgeryDiagram, Vec<Vec<usize>>)> {
    let mut comps = Vec::new();
    let mut origin = Vec::new();
    let mut groups = Vec::new();
    for (i, c) in d.components.iter().enumerate() {
        let n: BigInt = c.coeff.reciprocal_n().ok_or_else(|| {
            Error::Domain(format!(
                "{} has non-reciprocal coefficient {}",
                c.name, c.coeff
            ))
        })?;
        let n = n
            .to_usize()
            .ok_or_else(|| Error::Domain("push-off count too large".into()))?;
        let mut g = Vec::new();
        for e in 0..n {
            let mut x = c.clone();
            if n > 1 {
                x.name = format!("{}~{}", c.name, e + 1);
            }
            x.coeff = Rational::int(c.coeff.signum());
            g.push(comps.len());
            comps.push(x);
            origin.push(i);
        }
        groups.push(g);
    }
    let k = comps.len();
    let mut linking = vec![vec![0i64; k]; k];
    for a in 0..k {
        for b in 0..k {
            if a != b {
                let (i, j) = (origin[a], origin[b]);
                linking[a][b] = if i == j {
                    d.components[i].tb
                } else {
                    d.linking[i][j]
                };
            }
        }
    }
    Ok((ContactSurgeryDiagram::new(comps, linking), groups))
}
