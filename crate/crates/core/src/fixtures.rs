//! Small reference objects over a two-type schema of classes and features.

use crate::condition::Constraint;
use crate::graph::{Graph, TypeGraph, TypeId};
use crate::rewrite::{PlainRule, Rule};

pub const CLASS: TypeId = 0;
pub const FEATURE: TypeId = 1;
pub const OWNS: TypeId = 0;
pub const DEP: TypeId = 1;

pub fn type_graph() -> TypeGraph {
    let mut tg = TypeGraph::new();
    let c = tg.add_node_type("Class");
    let f = tg.add_node_type("Feature");
    tg.add_edge_type("owns", c, f);
    tg.add_edge_type("dep", f, f);
    tg
}

/// One class `0`.
pub fn c() -> Graph {
    Graph::new().with_node(0, CLASS)
}

/// One feature `0`.
pub fn f() -> Graph {
    Graph::new().with_node(0, FEATURE)
}

/// Class `0` owning feature `1`.
pub fn cf() -> Graph {
    cf_disc().with_edge(0, 0, 1, OWNS)
}

/// Class `0` and feature `1` without an edge.
pub fn cf_disc() -> Graph {
    c().with_node(1, FEATURE)
}

/// Class `0` owning features `1` and `2`.
pub fn cff() -> Graph {
    cf().with_node(2, FEATURE).with_edge(1, 0, 2, OWNS)
}

/// Feature `0` depending on feature `1`.
pub fn ff() -> Graph {
    ff_disc().with_edge(0, 0, 1, DEP)
}

pub fn ff_disc() -> Graph {
    Graph::new().with_node(0, FEATURE).with_node(1, FEATURE)
}

/// Every class owns a feature.
pub fn c_one() -> Constraint {
    Constraint::new(vec![Graph::new(), c(), cf()]).expect("chain")
}

/// No dependency edges.
pub fn c_no_dep() -> Constraint {
    Constraint::new(vec![Graph::new(), ff()]).expect("chain")
}

/// Every class owns two distinct features.
pub fn c_two() -> Constraint {
    Constraint::new(vec![Graph::new(), c(), cff()]).expect("chain")
}

/// No class owns two features.
pub fn c_at_most_one() -> Constraint {
    Constraint::new(vec![Graph::new(), cff()]).expect("chain")
}

/// There is a class.
pub fn c_some_class() -> Constraint {
    Constraint::new(vec![Graph::new(), Graph::new(), c()]).expect("chain")
}

/// Every feature depends on some feature.
pub fn c_has_dep() -> Constraint {
    Constraint::new(vec![Graph::new(), f(), ff()]).expect("chain")
}

/// Every dependency is followed by another one; its two graphs conflict with each other.
pub fn c_dep_chain() -> Constraint {
    let fff = ff().with_node(2, FEATURE).with_edge(1, 1, 2, DEP);
    Constraint::new(vec![Graph::new(), ff(), fff]).expect("chain")
}

/// Every class owns a feature, and every owned feature that has a dependency has an owner for it.
pub fn c_deep() -> Constraint {
    let c3 = cf().with_node(2, FEATURE).with_edge(1, 1, 2, DEP);
    let c4 = c3.clone().with_node(3, CLASS).with_edge(2, 3, 2, OWNS);
    Constraint::new(vec![Graph::new(), c(), cf(), c3, c4]).expect("chain")
}

/// Every class owns a feature that has no outgoing dependency.
pub fn c_clean_own() -> Constraint {
    let c3 = cf().with_node(2, FEATURE).with_edge(1, 1, 2, DEP);
    Constraint::new(vec![Graph::new(), c(), cf(), c3]).expect("chain")
}

/// Some class exists all of whose features depend on some feature.
pub fn c_owner_deps() -> Constraint {
    let c4 = cf().with_node(2, FEATURE).with_edge(1, 1, 2, DEP);
    Constraint::new(vec![Graph::new(), Graph::new(), c(), cf(), c4]).expect("chain")
}

pub fn g0() -> Graph {
    c()
}

pub fn g1() -> Graph {
    cf()
}

pub fn g2() -> Graph {
    Graph::new().with_node(0, CLASS).with_node(1, CLASS)
}

/// A bare class next to a dependency edge.
pub fn g_mixed() -> Graph {
    Graph::new()
        .with_node(0, CLASS)
        .with_node(1, FEATURE)
        .with_node(2, FEATURE)
        .with_edge(0, 1, 2, DEP)
}

pub fn add_f() -> Rule {
    Rule::new("addF", PlainRule::new(c(), c(), cf()).expect("span"))
}

pub fn del_dep() -> Rule {
    Rule::new("delDep", PlainRule::new(ff(), ff_disc(), ff_disc()).expect("span"))
}

/// Removes a feature together with its owns edge.
pub fn del_f() -> Rule {
    Rule::new("delF", PlainRule::new(cf(), c(), c()).expect("span"))
}

/// Removes one of two owns edges of a class.
pub fn drop_owns() -> Rule {
    let k = cff();
    let mut i = k.clone();
    i.remove_edge(1);
    Rule::new("dropOwns", PlainRule::new(k, i.clone(), i).expect("span"))
}

pub fn add_dep() -> Rule {
    Rule::new("addDep", PlainRule::new(ff_disc(), ff_disc(), ff()).expect("span"))
}

pub fn add_class() -> Rule {
    Rule::new("addClass", PlainRule::new(Graph::new(), Graph::new(), c()).expect("span"))
}

/// Small hosts used across tests.
pub fn hosts() -> Vec<Graph> {
    vec![Graph::new(), g0(), g1(), g2(), cf_disc(), cff(), ff(), ff_disc(), g_mixed()]
}

/// Named constraints used across tests.
pub fn constraints() -> Vec<(&'static str, Constraint)> {
    vec![
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
    ]
}
