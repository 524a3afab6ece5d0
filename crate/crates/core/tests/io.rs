use std::path::{Path, PathBuf};

use grafrepair::error::Error;
use grafrepair::fixtures;
use grafrepair::io::{self, Document, Kind};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

fn kind_of(name: &str) -> Kind {
    match name {
        "typegraph" => Kind::TypeGraph,
        "rules" | "rules_one_nodep" => Kind::RuleSet,
        "set_one_nodep" | "bad_set" => Kind::ConstraintSet,
        n if n.starts_with("c_") => Kind::Constraint,
        n if n.starts_with("rule_") => Kind::Rule,
        _ => Kind::Graph,
    }
}

fn load(name: &str) -> Document {
    io::load_file(&fixture(name), kind_of(name), None).expect("fixture parses").1
}

#[test]
fn fixtures_round_trip_byte_identical() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).expect("fixtures dir") {
        let path = entry.expect("entry").path();
        let name = path.file_stem().and_then(|s| s.to_str()).expect("utf-8 name").to_string();
        let text = std::fs::read_to_string(&path).expect("read");
        let (tg, doc) = io::parse_document(&text, kind_of(&name), None).expect("parse");
        assert_eq!(io::save_document(&doc, &tg), text, "{name}");
        seen += 1;
    }
    assert!(seen >= 25);
}

#[test]
fn save_then_load_through_a_file() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let tg = fixtures::type_graph();
    let doc = Document::Constraint(fixtures::c_deep());
    let path = tmp.path().join("c.json");
    std::fs::write(&path, io::save_document(&doc, &tg)).expect("write");
    let (tg2, back) = io::load_file(&path, Kind::Constraint, None).expect("load");
    assert_eq!(tg2, tg);
    assert_eq!(back, doc);
}

#[test]
fn fixture_files_match_library_fixtures() {
    use fixtures::*;
    let graphs = [("G0", g0()), ("G1", g1()), ("G2", g2()), ("G_mixed", g_mixed()), ("CF", cf())];
    for (name, g) in graphs {
        assert_eq!(load(name), Document::Graph(g), "{name}");
    }
    let constraints = [
        ("c_one", c_one()),
        ("c_noDep", c_no_dep()),
        ("c_two", c_two()),
        ("c_atMostOne", c_at_most_one()),
        ("c_someClass", c_some_class()),
        ("c_hasDep", c_has_dep()),
        ("c_depChain", c_dep_chain()),
        ("c_deep", c_deep()),
        ("c_cleanOwn", c_clean_own()),
        ("c_ownerDeps", c_owner_deps()),
    ];
    for (name, c) in constraints {
        assert_eq!(load(name), Document::Constraint(c), "{name}");
    }
    let rules = [
        ("rule_addF", add_f()),
        ("rule_delDep", del_dep()),
        ("rule_delF", del_f()),
        ("rule_dropOwns", drop_owns()),
        ("rule_addDep", add_dep()),
        ("rule_addClass", add_class()),
    ];
    for (name, r) in rules {
        assert_eq!(load(name), Document::Rule(r), "{name}");
    }
    assert_eq!(load("typegraph"), Document::TypeGraph(type_graph()));
}

#[test]
fn errors_carry_a_json_pointer() {
    let tg = fixtures::type_graph();
    let cases = [
        (r#"{"nodes":[{"id":0,"type":"Nope"}],"edges":[]}"#, Kind::Graph, "/nodes/0/type"),
        (r#"{"nodes":[{"id":0,"type":"Class"}],"edges":[{"id":0,"src":0,"tar":7,"type":"owns"}]}"#, Kind::Graph, "/edges/0"),
        (r#"{"nodes":[],"edges":[]"#, Kind::Graph, ""),
    ];
    for (text, kind, prefix) in cases {
        match io::parse_document(text, kind, Some(&tg)) {
            Err(Error::Parse { pointer, .. }) => assert!(pointer.starts_with(prefix), "{pointer} for {text}"),
            other => panic!("expected parse error for {text}, got {other:?}"),
        }
    }
}

#[test]
fn missing_type_graph_is_reported() {
    let err = io::parse_document(r#"{"nodes":[],"edges":[]}"#, Kind::Graph, None).unwrap_err();
    assert!(matches!(err, Error::Parse { ref pointer, .. } if pointer == "/type_graph"));
}

#[test]
fn rule_set_builds_repairing_sets() {
    let Document::RuleSet(doc) = load("rules") else { panic!("rule set") };
    let cs = [fixtures::c_one()];
    let sets = io::repairing_sets(&doc, &cs, 4).expect("sets");
    assert_eq!(sets.len(), 1);
    let v = grafrepair::repair::validate_repairing_set(&sets[0], &cs[0]).expect("validate");
    assert!(v.is_valid());
}
