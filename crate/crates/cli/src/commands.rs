//! The subcommands, each producing a human report, a JSON record and an exit
//! code.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use csn_core::calculus::transform;
use csn_core::classify::{
    family, family_eval as eval_family, family_surgery_description, registry, unknot_tightness,
    verify_family, Bounds, FamilyValue, Params, Target,
};
use csn_core::exactmath::{negcf, negcf_display};
use csn_core::invariants::{group_name, invariants as compute_invariants, SignPolicy};
use csn_core::selftest::{criteria, run_one, SelftestConfig};
use csn_core::{Atlas, Error, ExpansionChain, LegendrianComponent, Manifold, Rational};

use crate::diagram::{parse_diagram, serialize, DiagramError};
use crate::report::{big, bigs, class, opt_rational, rational, record};

pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_INVALID: u8 = 3;
pub const EXIT_D3_UNDEFINED: u8 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: u8,
    pub warnings: Vec<String>,
}

impl Output {
    fn ok(text: String, json: Value) -> Output {
        Output {
            text,
            json,
            code: 0,
            warnings: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::ZeroCoefficient
            | Error::Invalid(_)
            | Error::UnknownComponent(_)
            | Error::IncompleteSigns(_) => EXIT_INVALID,
            _ => EXIT_PARSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Failure {
        let code = match e {
            DiagramError::Syntax(_) => EXIT_PARSE,
            DiagramError::Invalid(_) => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<Output, Failure>;

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

pub fn invariants(text: &str, atlas: &Atlas, signs: &str, d3_only: bool) -> Outcome {
    let file = parse_diagram(text, atlas)?;
    let d = &file.diagram;
    let policy = SignPolicy::parse(signs)?;
    let reports = compute_invariants(d, &policy)?;
    let h1 = reports.first().map(|r| r.h1.clone()).unwrap_or_default();

    let mut out = String::new();
    let mut rows = Vec::new();
    if !d3_only {
        writeln!(out, "H1 = {}", group_name(&h1)).unwrap();
    }
    for (i, r) in reports.iter().enumerate() {
        let d3 =
            r.d3.as_ref()
                .map_or("undefined".to_string(), Rational::to_string);
        let multiples: Vec<Option<BigInt>> = (0..d.len()).map(|k| r.euler_in_meridian(k)).collect();
        if d3_only {
            writeln!(out, "{d3}").unwrap();
        } else {
            writeln!(out, "row {}", i + 1).unwrap();
            if !r.expansion_trace.is_empty() {
                writeln!(out, "  expansion  {}", r.expansion_trace).unwrap();
            }
            writeln!(out, "  rotations  ({})", join(&r.rots)).unwrap();
            writeln!(out, "  euler      {}", r.euler).unwrap();
            for (c, m) in d.components.iter().zip(&multiples) {
                if let Some(m) = m {
                    writeln!(out, "             = {m} mu_{}", c.name).unwrap();
                }
            }
            writeln!(
                out,
                "  torsion    {}",
                if r.euler_torsion { "yes" } else { "no" }
            )
            .unwrap();
            writeln!(out, "  d3         {d3}").unwrap();
        }
        let mults: Map<String, Value> = d
            .components
            .iter()
            .zip(&multiples)
            .map(|(c, m)| (c.name.clone(), m.as_ref().map_or(Value::Null, big)))
            .collect();
        rows.push(json!({
            "expansion": r.expansion_trace,
            "rotations": r.rots,
            "euler": class(&r.euler),
            "euler_in_meridians": mults,
            "torsion": r.euler_torsion,
            "d3": opt_rational(r.d3.as_ref()),
        }));
    }
    let json = record(
        "invariants",
        json!({
            "components": d.components.iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
            "h1": { "factors": bigs(&h1), "group": group_name(&h1) },
            "rows": rows,
        }),
    );
    let undefined = d3_only && reports.iter().any(|r| r.d3.is_none());
    Ok(Output {
        text: out,
        json,
        code: if undefined { EXIT_D3_UNDEFINED } else { 0 },
        warnings: file.warnings,
    })
}

/// The negative residual left after splitting off `(+1)` entries.
fn negative_tail(coeff: &Rational) -> Option<Rational> {
    let mut r = coeff.clone();
    while r.is_positive() {
        if r == Rational::one() {
            return None;
        }
        r = (r.recip() - Rational::one()).recip();
    }
    Some(r)
}

fn expand_component(c: &LegendrianComponent, out: &mut String) -> Result<Value, Failure> {
    let chain: ExpansionChain = transform(c, None)?;
    let tail = negative_tail(&c.coeff);
    let cf = tail.as_ref().map(negcf).transpose()?;
    let inc = chain.increments();
    writeln!(
        out,
        "{}: coeff {}, tb {}, rot {}",
        c.name, c.coeff, c.tb, c.rot
    )
    .unwrap();
    writeln!(out, "  chain       {chain}").unwrap();
    if !chain.splits.is_empty() {
        writeln!(out, "  splits      ({})", join(&chain.splits)).unwrap();
    }
    if let Some(cf) = &cf {
        writeln!(out, "  negcf       ({})", join(cf)).unwrap();
        writeln!(out, "  display     ({})", join(&negcf_display(cf))).unwrap();
    }
    writeln!(out, "  increments  ({})", join(&inc)).unwrap();
    writeln!(out, "  entry  coeff  stabs  tb").unwrap();
    let mut entries = Vec::new();
    for (i, e) in chain.entries.iter().enumerate() {
        writeln!(
            out,
            "  {:<5}  {:<5}  {:<5}  {}",
            i + 1,
            e.coeff.to_string(),
            e.stabs,
            chain.tb(i)
        )
        .unwrap();
        entries.push(json!({ "coeff": rational(&e.coeff), "stabs": e.stabs, "tb": chain.tb(i) }));
    }
    let n = chain.len();
    let linking: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 0 } else { chain.linking(i, j) })
                .collect()
        })
        .collect();
    if n > 1 {
        writeln!(out, "  linking").unwrap();
        for row in &linking {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
            writeln!(out, "   {}", cells.join("")).unwrap();
        }
    }
    Ok(json!({
        "name": c.name,
        "coeff": rational(&c.coeff),
        "tb": c.tb,
        "rot": c.rot,
        "chain": chain.to_string(),
        "splits": bigs(&chain.splits),
        "negcf": cf.as_deref().map_or(Value::Null, bigs),
        "negcf_display": cf.as_deref().map_or(Value::Null, |v| bigs(&negcf_display(v))),
        "increments": inc,
        "entries": entries,
        "linking": linking,
    }))
}

pub fn expand(text: &str, atlas: &Atlas) -> Outcome {
    let file = parse_diagram(text, atlas)?;
    let mut out = String::new();
    let mut comps = Vec::new();
    for (i, c) in file.diagram.components.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        comps.push(expand_component(c, &mut out)?);
    }
    Ok(Output {
        warnings: file.warnings,
        ..Output::ok(out, record("expand", json!({ "components": comps })))
    })
}

fn parse_rational(s: &str) -> Result<Rational, Failure> {
    s.parse().map_err(|e| Failure::parse(format!("{e}")))
}

fn parse_sign(s: &str) -> Result<i8, Failure> {
    match s {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(Failure::parse(format!(
            "first stabilization sign must be + or -, got `{s}`"
        ))),
    }
}

pub fn tightness(tb: i64, plus: u64, minus: u64, coeff: &str, first: Option<&str>) -> Outcome {
    let r = parse_rational(coeff)?;
    let first = first.map(parse_sign).transpose()?;
    let v = unknot_tightness(tb, plus, minus, &r, first)?;
    let mut out = format!("{} ({})\n", v.status, v.certificate.name());
    if let Some(m) = &v.meridian_tb {
        writeln!(out, "meridian tb {m}").unwrap();
    }
    let json = record(
        "tightness",
        json!({
            "input": { "tb": tb, "plus": plus, "minus": minus, "coeff": rational(&r), "first_stab": first },
            "status": v.status.to_string(),
            "certificate": v.certificate.name(),
            "meridian_tb": opt_rational(v.meridian_tb.as_ref()),
        }),
    );
    Ok(Output::ok(out, json))
}

fn target_name(t: Target) -> &'static str {
    match t {
        Target::Sigma2311 => "Sigma(2,3,11)",
        Target::NegSigma2311 => "-Sigma(2,3,11)",
        Target::Lens => "L(4m+3,4)",
    }
}

fn status_name(tight: bool) -> &'static str {
    if tight {
        "tight"
    } else {
        "overtwisted"
    }
}

pub fn family_list() -> Outcome {
    let mut out = String::new();
    let mut recs = Vec::new();
    for r in registry() {
        writeln!(
            out,
            "{:<12} {:<15} {:<7} {:<11} ({}) {}; {}",
            r.id,
            target_name(r.target),
            r.flavor.name(),
            status_name(r.tight),
            r.params.join(","),
            r.domain,
            r.citation
        )
        .unwrap();
        recs.push(json!({
            "id": r.id,
            "manifold": target_name(r.target),
            "flavor": r.flavor.name(),
            "status": status_name(r.tight),
            "params": r.params,
            "domain": r.domain,
            "citation": r.citation,
            "has_template": r.has_template(),
            "surgery_row": r.surgery_row,
        }));
    }
    Ok(Output::ok(
        out,
        record("family list", json!({ "families": recs })),
    ))
}

/// `k=-1,l=0`, plus `m` when given separately.
pub fn parse_params(m: Option<i64>, items: Option<&str>) -> Result<Params, Failure> {
    let mut p = Params::new();
    for item in items
        .unwrap_or("")
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
    {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::parse(format!("parameter `{item}` is not key=value")))?;
        let v: i64 = v
            .parse()
            .map_err(|_| Failure::parse(format!("parameter `{item}` needs an integer")))?;
        if p.insert(k.to_string(), v).is_some() {
            return Err(Failure::parse(format!("parameter `{k}` given twice")));
        }
    }
    if let Some(m) = m {
        if p.insert("m".into(), m).is_some() {
            return Err(Failure::parse("m given both as --m and in --params"));
        }
    }
    Ok(p)
}

fn value_json(v: &FamilyValue) -> Value {
    json!({ "euler": big(&v.euler), "d3": opt_rational(v.d3.as_ref()) })
}

pub fn family_eval(id: &str, p: &Params) -> Outcome {
    let v = eval_family(id, p)?;
    let json = record(
        "family eval",
        json!({ "id": id, "params": p, "value": value_json(&v) }),
    );
    Ok(Output::ok(format!("{v}\n"), json))
}

pub fn family_describe(id: &str, p: &Params) -> Outcome {
    let rec = family(id)?;
    let t = family_surgery_description(id, p)?;
    let mut out = String::new();
    writeln!(out, "{} on {}", rec.id, t.key.manifold()).unwrap();
    writeln!(out, "surgery  {}", t.key).unwrap();
    writeln!(out, "chain    {}", t.chain).unwrap();
    let texts: Vec<String> = t.diagrams.iter().map(serialize).collect();
    for (i, s) in texts.iter().enumerate() {
        writeln!(out, "\n# diagram {}", i + 1).unwrap();
        out.push_str(s);
    }
    let json = record(
        "family describe",
        json!({
            "id": rec.id,
            "params": p,
            "manifold": t.key.manifold().to_string(),
            "surgery": t.key.to_string(),
            "topological": rational(&t.key.topological()),
            "coeff": rational(&t.key.coeff()),
            "chain": t.chain,
            "diagrams": texts,
        }),
    );
    Ok(Output::ok(out, json))
}

pub fn parse_bounds(items: Option<&str>) -> Result<Bounds, Failure> {
    Ok(Bounds::default().with_overrides(items.unwrap_or(""))?)
}

pub fn family_verify(id: &str, m: Option<i64>, bounds: Bounds, atlas: &Atlas) -> Outcome {
    let mut bounds = bounds;
    if let Some(m) = m {
        if m < 1 {
            return Err(Failure::parse("--m must be at least 1"));
        }
        bounds.m_max = m;
    }
    let mut rep = verify_family(id, &bounds, atlas)?;
    if let Some(m) = m {
        rep.points
            .retain(|p| !matches!(p.key.manifold(), Manifold::Lens(_)) || p.key.m == m);
    }
    let passed = rep.passed();
    let mut out = String::new();
    let mut bad = Vec::new();
    for p in rep.mismatches() {
        let set = |s: &std::collections::BTreeSet<FamilyValue>| join(&s.iter().collect::<Vec<_>>());
        writeln!(out, "mismatch at {} on {}", p.key, p.key.manifold()).unwrap();
        writeln!(out, "  families  {}", p.contributors.join(", ")).unwrap();
        writeln!(out, "  missing   {{{}}}", set(&p.missing())).unwrap();
        writeln!(out, "  extra     {{{}}}", set(&p.extra())).unwrap();
        bad.push(json!({
            "surgery": p.key.to_string(),
            "manifold": p.key.manifold().to_string(),
            "contributors": p.contributors,
            "family": p.family.iter().map(value_json).collect::<Vec<_>>(),
            "engine": p.engine.iter().map(value_json).collect::<Vec<_>>(),
            "missing": p.missing().iter().map(value_json).collect::<Vec<_>>(),
            "extra": p.extra().iter().map(value_json).collect::<Vec<_>>(),
        }));
    }
    let n = rep.points.len();
    let verdict = if passed { "PASS" } else { "FAIL" };
    writeln!(
        out,
        "{verdict} {id}: {} of {n} surgery points agree",
        n - bad.len()
    )
    .unwrap();
    let json = record(
        "family verify",
        json!({
            "id": id,
            "m": m,
            "m_max": bounds.m_max,
            "passed": passed,
            "points": n,
            "mismatches": bad,
        }),
    );
    Ok(Output {
        code: if passed { 0 } else { EXIT_MISMATCH },
        ..Output::ok(out, json)
    })
}

/// `m=<cap>` and `seed=<u64>`, comma or space separated.
pub fn selftest_config(items: Option<&str>, atlas: Atlas) -> Result<SelftestConfig, Failure> {
    let mut cfg = SelftestConfig {
        atlas,
        ..SelftestConfig::default()
    };
    for item in items
        .unwrap_or("")
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
    {
        let bad = || Failure::parse(format!("bound `{item}` is not m=<int> or seed=<int>"));
        let (k, v) = item.split_once('=').ok_or_else(bad)?;
        match k {
            "m" | "m_max" => {
                let m: i64 = v.parse().map_err(|_| bad())?;
                if m < 1 {
                    return Err(Failure::parse("bound m must be at least 1"));
                }
                cfg.m_cap = Some(m);
            }
            "seed" => cfg.seed = v.parse().map_err(|_| bad())?,
            _ => return Err(bad()),
        }
    }
    Ok(cfg)
}

pub fn selftest(cfg: &SelftestConfig, only: &[u8]) -> Outcome {
    let known = criteria();
    if let Some(n) = only.iter().find(|n| !known.iter().any(|k| k.0 == **n)) {
        return Err(Failure::parse(format!("no criterion {n}")));
    }
    let mut out = String::new();
    let mut rows = Vec::new();
    let mut passed = 0;
    for (n, _) in known
        .iter()
        .filter(|k| only.is_empty() || only.contains(&k.0))
    {
        let r = run_one(*n, cfg).expect("listed criterion");
        writeln!(out, "{r}").unwrap();
        for d in &r.details {
            writeln!(out, "      {d}").unwrap();
        }
        passed += usize::from(r.passed);
        rows.push(json!({
            "number": r.number,
            "title": r.title,
            "passed": r.passed,
            "summary": r.summary,
            "details": r.details,
        }));
    }
    let total = rows.len();
    writeln!(out, "{passed} of {total} criteria passed").unwrap();
    let json = record(
        "selftest",
        json!({ "m_cap": cfg.m_cap, "seed": cfg.seed, "passed": passed == total, "criteria": rows }),
    );
    Ok(Output {
        code: if passed == total { 0 } else { EXIT_MISMATCH },
        ..Output::ok(out, json)
    })
}
