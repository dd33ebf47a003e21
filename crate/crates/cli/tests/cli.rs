use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn csn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csn"))
        .args(args)
        .output()
        .expect("csn runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn machine(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "machine"];
    all.extend_from_slice(args);
    let o = csn(&all);
    let v: Value = serde_json::from_str(&stdout(&o)).expect("valid JSON");
    assert_eq!(v["schema_version"], 1);
    (v, code(&o))
}

#[test]
fn right_trefoil_d3() {
    let f = fixture("right_trefoil.csd");
    let (v, c) = machine(&["invariants", &f]);
    assert_eq!(c, 0);
    assert_eq!(v["h1"]["factors"], serde_json::json!([]));
    assert_eq!(v["rows"][0]["d3"], "-1/1");
    assert_eq!(v["rows"][0]["euler"]["coords"], serde_json::json!([]));
    let o = csn(&["invariants", "--d3-only", &f]);
    assert_eq!(stdout(&o), "-1\n");
}

#[test]
fn torus_knot_lens_space() {
    let (v, c) = machine(&["invariants", &fixture("torus_l7.csd")]);
    assert_eq!(c, 0);
    assert_eq!(v["h1"]["group"], "Z/7");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    // e = mu_K, and mu_K = 4 mu in the standard generator of L(7,4).
    assert_eq!(rows[0]["euler_in_meridians"]["K"], 1);
    assert_eq!(rows[0]["torsion"], true);
}

#[test]
fn topo_input_matches_contact_input() {
    let a = machine(&["invariants", &fixture("lens_topo.csd")]).0;
    assert_eq!(a["h1"]["group"], "Z/11");
    assert_eq!(a["rows"].as_array().unwrap().len(), 6);
    assert!(a["rows"][0]["expansion"]
        .as_str()
        .unwrap()
        .starts_with("K(-7/4) = "));
}

#[test]
fn cancellation_pair_is_trivial() {
    let (v, c) = machine(&["invariants", &fixture("cancellation.csd")]);
    assert_eq!(c, 0);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["d3"], "0/1");
    }
}

#[test]
fn explicit_signs_give_one_row() {
    let f = fixture("cf.csd");
    let (all, _) = machine(&["invariants", &f]);
    let (one, c) = machine(&["invariants", "--stabilization-signs", "+-", &f]);
    assert_eq!(c, 0);
    let rows = one["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!(all["rows"].as_array().unwrap().contains(&rows[0]));
    let o = csn(&["invariants", "--stabilization-signs", "+", &f]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn expand_negative_fraction() {
    let (v, c) = machine(&["expand", &fixture("cf.csd")]);
    assert_eq!(c, 0);
    let k = &v["components"][0];
    assert_eq!(k["negcf"], serde_json::json!([-3, -2, -2, -2, -3]));
    assert_eq!(k["negcf_display"], serde_json::json!([-2, -2, -2, -2, -3]));
    assert_eq!(k["increments"], serde_json::json!([1, 0, 0, 0, 1]));
    assert_eq!(k["entries"].as_array().unwrap().len(), 5);
    assert_eq!(k["linking"][0][4], -2);
    assert_eq!(k["linking"][4][3], -2);
}

#[test]
fn expand_positive_and_integer() {
    let (v, _) = machine(&["expand", &fixture("splits.csd")]);
    let p = &v["components"][0];
    assert_eq!(p["chain"], "K(+1) ⊔ K(+1) ⊔ K(+1)");
    assert_eq!(p["negcf"], Value::Null);
    let n = &v["components"][1];
    assert_eq!(n["chain"], "K_1(-1)");
    let o = csn(&["expand", &fixture("cf.csd")]);
    assert!(stdout(&o).contains("negcf       (-3, -2, -2, -2, -3)"));
}

#[test]
fn exit_codes() {
    let o = csn(&["invariants", &fixture("zero.csd")]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("vanishing contact surgery coefficient"));

    let o = csn(&["invariants", &fixture("syntax.csd")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3, column 8"), "{}", stderr(&o));

    let o = csn(&["invariants", &fixture("parity.csd")]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("tb + rot must be odd"));

    let o = csn(&["invariants", "--d3-only", &fixture("free.csd")]);
    assert_eq!(code(&o), 4);
    assert_eq!(stdout(&o), "1/2\nundefined\n");

    let o = csn(&["invariants", &fixture("free.csd")]);
    assert_eq!(code(&o), 0);

    let o = csn(&["invariants", "no-such-file.csd"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unknown_knot_becomes_custom() {
    let o = csn(&["invariants", &fixture("custom.csd")]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("unknown knot `figure-eight`, treated as custom"));
    assert!(stdout(&o).contains("H1 = Z/4"));
}

#[test]
fn machine_errors_are_records() {
    let (v, c) = machine(&["invariants", &fixture("zero.csd")]);
    assert_eq!(c, 3);
    assert_eq!(v["command"], "error");
    assert_eq!(v["exit_code"], 3);
}

#[test]
fn tightness_examples() {
    let run = |args: &[&str]| stdout(&csn(&[&["tightness"], args].concat()));
    assert_eq!(
        run(&["--tb", "-1", "--coeff", "1/2"]),
        "overtwisted (bennequin-violation)\nmeridian tb 1\n"
    );
    assert_eq!(
        run(&["--tb", "-3", "--plus", "1", "--minus", "1", "--coeff", "4"]),
        "overtwisted (mixed-stabilization)\n"
    );
    assert_eq!(
        run(&[
            "--tb",
            "-3",
            "--plus",
            "2",
            "--coeff",
            "7/2",
            "--first-stab",
            "+"
        ]),
        "tight (lantern-reduction-to-tight)\n"
    );
    let (v, _) = machine(&[
        "tightness",
        "--tb",
        "-3",
        "--minus",
        "2",
        "--coeff",
        "7/2",
        "--first-stab",
        "-",
    ]);
    assert_eq!(v["status"], "tight");
    assert_eq!(v["input"]["coeff"], "7/2");
    let o = csn(&["tightness", "--tb", "-1", "--plus", "1", "--coeff", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn family_eval_and_domain() {
    let o = csn(&["family", "eval", "T1.7-1", "--m", "1", "--params", "k=-1"]);
    assert_eq!(stdout(&o), "(3, 17/14)\n");
    let (v, _) = machine(&["family", "eval", "T1.7-1", "--m", "1", "--params", "k=-1"]);
    assert_eq!(v["value"]["d3"], "17/14");
    assert_eq!(v["value"]["euler"], 3);

    let o = csn(&["family", "eval", "T1.1-1", "--m", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("out of domain"));
    let o = csn(&["family", "eval", "nope"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn family_list_has_citations() {
    let (v, c) = machine(&["family", "list"]);
    assert_eq!(c, 0);
    let fams = v["families"].as_array().unwrap();
    assert_eq!(
        fams.iter()
            .filter(|f| f["id"].as_str().unwrap().starts_with("Table1-"))
            .count(),
        30
    );
    assert!(fams
        .iter()
        .all(|f| !f["citation"].as_str().unwrap().is_empty()));
}

#[test]
fn family_describe_emits_parseable_diagrams() {
    let (v, c) = machine(&[
        "family", "describe", "T1.7-1", "--m", "1", "--params", "k=-1",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["manifold"], "L(7,4)");
    let atlas = csn_core::Atlas::standard();
    for d in v["diagrams"].as_array().unwrap() {
        let file = csn_cli::diagram::parse_diagram(d.as_str().unwrap(), &atlas).unwrap();
        assert_eq!(file.diagram.components[0].knot_label, "T(2,-3)");
    }
}

#[test]
fn family_verify_pass_and_fail() {
    let o = csn(&["family", "verify", "Table1-5", "--m", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS Table1-5"));

    let (v, c) = machine(&["family", "verify", "Table1-13", "--bounds", "m=1"]);
    assert_eq!(c, 1);
    assert_eq!(v["passed"], false);
    let bad = &v["mismatches"][0];
    assert_eq!(bad["manifold"], "L(7,4)");
    assert!(bad["missing"]
        .as_array()
        .unwrap()
        .iter()
        .any(|x| x["d3"] == "5/14"));
}

#[test]
fn selftest_exit_status() {
    let o = csn(&["selftest", "--bounds", "m=1", "--criterion", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PASS  2 "));
    let o = csn(&["selftest", "--bounds", "m=1", "--criterion", "5"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("FAIL  5 "));
    let o = csn(&["selftest", "--bounds", "x=1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn output_is_deterministic() {
    let f = fixture("lens_topo.csd");
    for args in [
        vec!["--format", "machine", "invariants", f.as_str()],
        vec!["invariants", f.as_str()],
        vec![
            "--format", "machine", "family", "verify", "Table1-3", "--bounds", "m=1",
        ],
    ] {
        let a = csn(&args);
        let b = csn(&args);
        assert_eq!(a.stdout, b.stdout);
    }
}
