use proptest::prelude::*;

use csn_cli::diagram::{parse_diagram, parse_syntax, serialize};
use csn_core::{Atlas, ContactSurgeryDiagram, LegendrianComponent, Rational};

const LABELS: [&str; 6] = [
    "unknot",
    "right-trefoil",
    "left-trefoil",
    "K5a1",
    "T(2,-5)",
    "custom",
];

fn arb_diagram() -> impl Strategy<Value = ContactSurgeryDiagram> {
    let comp = (0usize..6, -9i64..4, -4i64..5, -30i64..30, 1i64..12);
    prop::collection::vec(comp, 0..5)
        .prop_flat_map(|cs| {
            let n = cs.len();
            (Just(cs), prop::collection::vec(-5i64..6, n * n))
        })
        .prop_map(|(cs, raw)| {
            let n = cs.len();
            let comps = cs
                .iter()
                .enumerate()
                .map(|(i, &(l, tb, rot, p, q))| {
                    LegendrianComponent::new(
                        &format!("C{i}"),
                        LABELS[l],
                        tb,
                        rot,
                        Rational::new(p, q),
                    )
                })
                .collect();
            let mut d = ContactSurgeryDiagram::unlinked(comps);
            for i in 0..n {
                for j in i + 1..n {
                    d.set_link(i, j, raw[i * n + j]);
                }
            }
            d
        })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(d in arb_diagram()) {
        let text = serialize(&d);
        let back = parse_syntax(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(serialize(&back), text);
    }
}

#[test]
fn comments_blank_lines_and_key_order() {
    let a = parse_syntax("# header\n\ncomponent A rot=0 tb=-1 coeff=-7/4  # trailing\n").unwrap();
    let b = parse_syntax("component A knot=unknot tb=-1 rot=0 coeff=-7/4\n").unwrap();
    assert_eq!(a, b);
}

#[test]
fn links_default_to_zero_and_are_symmetric() {
    let d = parse_syntax("component A tb=-1 rot=0 coeff=1\ncomponent B tb=-1 rot=0 coeff=1\ncomponent C tb=-1 rot=0 coeff=1\nlink C A -6\n")
        .unwrap();
    assert_eq!(d.linking[0][2], -6);
    assert_eq!(d.linking[2][0], -6);
    assert_eq!(d.linking[0][1], 0);
}

#[test]
fn syntax_errors() {
    let cases = [
        ("component", 1, "expected a component name"),
        ("component A tb=-1 rot=0", 1, "missing coeff= or topo="),
        ("component A tb=-1 rot=0 coeff=1 topo=1", 1, "exactly one"),
        ("component A tb=-1 tb=-2 rot=0 coeff=1", 1, "given twice"),
        ("component A tb=-1 rot=0 coeff=1/0", 1, "needs p/q"),
        ("component A tb=-1 rot=0 coeff=1\ncomponent A tb=-1 rot=0 coeff=1", 2, "defined twice"),
        ("component A tb=-1 rot=0 coeff=1\nlink A A 1", 2, "cannot link itself"),
        (
            "component A tb=-1 rot=0 coeff=1\ncomponent B tb=-1 rot=0 coeff=1\nlink A B 1\nlink B A 2",
            4,
            "conflicting",
        ),
        ("knot A", 1, "expected `component` or `link`"),
        ("component A tb=-1 rot=0 coeff=1 colour=red", 1, "unknown key"),
    ];
    for (text, line, msg) in cases {
        let e = parse_syntax(text).unwrap_err();
        assert_eq!(e.line, line, "{text}");
        assert!(e.message.contains(msg), "{text}: {}", e.message);
    }
}

#[test]
fn grammar_examples_validate() {
    let atlas = Atlas::standard();
    let one = parse_diagram("component K tb=-1 rot=0 coeff=-7/4", &atlas).unwrap();
    assert_eq!(one.diagram.len(), 1);
    let two = parse_diagram(
        "component A knot=left-trefoil tb=-6 rot=1 coeff=-1\ncomponent B knot=left-trefoil tb=-6 rot=1 coeff=-1\nlink A B -6",
        &atlas,
    )
    .unwrap();
    assert_eq!(two.diagram.linking[0][1], -6);
    let e = parse_diagram("component K tb=-1 rot=0 coeff=0/1", &atlas).unwrap_err();
    assert!(e
        .to_string()
        .contains("vanishing contact surgery coefficient"));
}
