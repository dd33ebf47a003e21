//! The line-based diagram file format.
//!
//! ```text
//! # comments run to the end of the line
//! component A knot=right-trefoil tb=1 rot=0 coeff=-1/2
//! component B tb=-1 rot=0 topo=-7/4
//! link A B -6
//! ```
//!
//! `knot` defaults to `unknot`; `topo` gives the smooth coefficient and is
//! converted to the contact one by subtracting `tb`. Links not listed are `0`.

use std::fmt;

use csn_core::knotdata::{Violation, CUSTOM, UNKNOT};
use csn_core::{Atlas, ContactSurgeryDiagram, LegendrianComponent, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    Syntax(SyntaxError),
    Invalid(Vec<Violation>),
}

impl fmt::Display for DiagramError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramError::Syntax(e) => write!(f, "syntax error at {e}"),
            DiagramError::Invalid(v) => {
                let msgs: Vec<String> = v.iter().map(Violation::to_string).collect();
                write!(f, "invalid diagram: {}", msgs.join("; "))
            }
        }
    }
}

impl std::error::Error for DiagramError {}

/// A parsed and validated diagram file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramFile {
    pub diagram: ContactSurgeryDiagram,
    /// Labels missing from the atlas, downgraded to `custom`.
    pub warnings: Vec<String>,
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (true, Some((c, s))) => {
                out.push((c, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some((col + 1, i)),
            _ => {}
        }
    }
    if let Some((c, s)) = start {
        out.push((c, &line[s..]));
    }
    out
}

struct Line {
    number: usize,
}

impl Line {
    fn err<T>(&self, column: usize, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            line: self.number,
            column,
            message: message.into(),
        })
    }
}

fn int(line: &Line, col: usize, key: &str, v: &str) -> Result<i64, SyntaxError> {
    v.parse()
        .or_else(|_| line.err(col, format!("`{key}` needs an integer, got `{v}`")))
}

fn ratio(line: &Line, col: usize, key: &str, v: &str) -> Result<Rational, SyntaxError> {
    v.parse()
        .or_else(|_| line.err(col, format!("`{key}` needs p/q, got `{v}`")))
}

fn component(line: &Line, toks: &[(usize, &str)]) -> Result<LegendrianComponent, SyntaxError> {
    let Some(&(name_col, name)) = toks.get(1) else {
        return line.err(toks[0].0 + toks[0].1.len(), "expected a component name");
    };
    if name.contains('=') {
        return line.err(name_col, "expected a component name before key=value pairs");
    }
    let mut knot = None;
    let mut tb = None;
    let mut rot = None;
    let mut coeff: Option<(usize, Rational, bool)> = None;
    for &(col, tok) in &toks[2..] {
        let Some((key, value)) = tok.split_once('=') else {
            return line.err(col, format!("expected key=value, got `{tok}`"));
        };
        let vcol = col + key.chars().count() + 1;
        let dup = match key {
            "knot" => knot.replace(value.to_string()).is_some(),
            "tb" => tb.replace(int(line, vcol, key, value)?).is_some(),
            "rot" => rot.replace(int(line, vcol, key, value)?).is_some(),
            "coeff" | "topo" => {
                if coeff.is_some() {
                    return line.err(col, "give exactly one of coeff= and topo=");
                }
                coeff = Some((col, ratio(line, vcol, key, value)?, key == "topo"));
                false
            }
            _ => return line.err(col, format!("unknown key `{key}`")),
        };
        if dup {
            return line.err(col, format!("`{key}` given twice"));
        }
    }
    let end = toks.last().map_or(1, |(c, t)| c + t.chars().count());
    let Some(tb) = tb else {
        return line.err(end, "missing tb=");
    };
    let Some(rot) = rot else {
        return line.err(end, "missing rot=");
    };
    let Some((_, value, topo)) = coeff else {
        return line.err(end, "missing coeff= or topo=");
    };
    let coeff = if topo { value - tb } else { value };
    let knot = knot.unwrap_or_else(|| UNKNOT.to_string());
    Ok(LegendrianComponent::new(name, &knot, tb, rot, coeff))
}

/// Parses the grammar without consulting the atlas.
pub fn parse_syntax(text: &str) -> Result<ContactSurgeryDiagram, SyntaxError> {
    let mut comps: Vec<LegendrianComponent> = Vec::new();
    let mut links: Vec<(usize, usize, i64, Line, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = Line { number: i + 1 };
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        match head {
            "component" => {
                let c = component(&line, &toks)?;
                if comps.iter().any(|o| o.name == c.name) {
                    return line.err(toks[1].0, format!("component `{}` defined twice", c.name));
                }
                comps.push(c);
            }
            "link" => {
                if toks.len() != 4 {
                    return line.err(col, "expected `link <name> <name> <int>`");
                }
                let find = |k: usize| -> Result<usize, SyntaxError> {
                    let (c, n) = toks[k];
                    comps
                        .iter()
                        .position(|x| x.name == n)
                        .map_or_else(|| line.err(c, format!("unknown component `{n}`")), Ok)
                };
                let (a, b) = (find(1)?, find(2)?);
                if a == b {
                    return line.err(toks[2].0, "a component cannot link itself");
                }
                let l = int(&line, toks[3].0, "link", toks[3].1)?;
                let col = toks[1].0;
                links.push((a, b, l, line, col));
            }
            other => {
                return line.err(
                    col,
                    format!("expected `component` or `link`, got `{other}`"),
                )
            }
        }
    }
    let mut d = ContactSurgeryDiagram::unlinked(comps);
    let mut seen = std::collections::BTreeMap::new();
    for (a, b, l, line, col) in links {
        let key = (a.min(b), a.max(b));
        if let Some(prev) = seen.insert(key, l) {
            if prev != l {
                return line.err(col, "conflicting linking numbers for this pair");
            }
        }
        d.set_link(a, b, l);
    }
    Ok(d)
}

/// Parses, downgrades unknown knot labels to `custom` and validates.
pub fn parse_diagram(text: &str, atlas: &Atlas) -> Result<DiagramFile, DiagramError> {
    let mut diagram = parse_syntax(text).map_err(DiagramError::Syntax)?;
    let mut warnings = Vec::new();
    for c in &mut diagram.components {
        if c.knot_label != CUSTOM && !atlas.contains(&c.knot_label) {
            warnings.push(format!(
                "{}: unknown knot `{}`, treated as custom",
                c.name, c.knot_label
            ));
            c.knot_label = CUSTOM.to_string();
        }
    }
    diagram.validate(atlas).map_err(DiagramError::Invalid)?;
    Ok(DiagramFile { diagram, warnings })
}

/// Canonical text form: components in order, then the nonzero links of
/// each pair once.
pub fn serialize(d: &ContactSurgeryDiagram) -> String {
    let mut out = String::new();
    for c in &d.components {
        out.push_str(&format!(
            "component {} knot={} tb={} rot={} coeff={}\n",
            c.name,
            c.knot_label,
            c.tb,
            c.rot,
            c.coeff.canonical()
        ));
    }
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let l = d.linking[i][j];
            if l != 0 {
                out.push_str(&format!(
                    "link {} {} {}\n",
                    d.components[i].name, d.components[j].name, l
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_count_characters() {
        assert_eq!(tokens("  ab  c"), vec![(3, "ab"), (7, "c")]);
        assert_eq!(tokens("⊔ x"), vec![(1, "⊔"), (3, "x")]);
    }

    #[test]
    fn topo_is_shifted_by_tb() {
        let d = parse_syntax("component K tb=-1 rot=0 topo=-7/4").unwrap();
        assert_eq!(d.components[0].coeff, Rational::new(-3, 4));
    }

    #[test]
    fn errors_point_at_the_token() {
        let e = parse_syntax("\ncomponent K tb=x rot=0 coeff=1").unwrap_err();
        assert_eq!((e.line, e.column), (2, 16));
        let e = parse_syntax("component K tb=1 rot=0 coeff=1\nlink K L 2").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
    }
}
