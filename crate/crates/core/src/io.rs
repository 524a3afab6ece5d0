//! JSON documents for type graphs, graphs, rules, constraints and rule sets.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::condition::{Condition, Constraint};
use crate::error::{Error, Result};
use crate::graph::{validate_graph, EdgeType, Graph, Morphism, TypeGraph};
use crate::repair::{build_sequence, complete_sequences, RepairingSet, StepSpec};
use crate::rewrite::{PlainRule, Rule};

/// Sequence entry of a rule-set document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    pub constraint: usize,
    pub target: usize,
    pub steps: Vec<StepSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSetDoc {
    pub rules: Vec<Rule>,
    pub sequences: Vec<SequenceSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    TypeGraph,
    Graph,
    Rule,
    Constraint,
    ConstraintSet,
    RuleSet,
}

impl Kind {
    pub fn parse(s: &str) -> Option<Kind> {
        Some(match s {
            "typegraph" => Kind::TypeGraph,
            "graph" => Kind::Graph,
            "rule" => Kind::Rule,
            "constraint" => Kind::Constraint,
            "constraint-set" => Kind::ConstraintSet,
            "rule-set" => Kind::RuleSet,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    TypeGraph(TypeGraph),
    Graph(Graph),
    Rule(Rule),
    Constraint(Constraint),
    ConstraintSet(Vec<Constraint>),
    RuleSet(RuleSetDoc),
}

fn perr(pointer: &str, message: impl Into<String>) -> Error {
    Error::Parse { pointer: if pointer.is_empty() { "/".into() } else { pointer.into() }, message: message.into() }
}

fn child(ptr: &str, key: &str) -> String {
    format!("{ptr}/{}", key.replace('~', "~0").replace('/', "~1"))
}

fn object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(ptr, "expected an object"))
}

fn field<'a>(v: &'a Value, key: &str, ptr: &str) -> Result<&'a Value> {
    object(v, ptr)?.get(key).ok_or_else(|| perr(&child(ptr, key), "missing field"))
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(ptr, "expected an array"))
}

fn string<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| perr(ptr, "expected a string"))
}

fn id(v: &Value, ptr: &str) -> Result<u32> {
    v.as_u64().and_then(|n| u32::try_from(n).ok()).ok_or_else(|| perr(ptr, "expected a non-negative 32-bit integer"))
}

fn key_id(k: &str, ptr: &str) -> Result<u32> {
    k.parse().map_err(|_| perr(&child(ptr, k), "map key is not an id"))
}

pub fn parse_type_graph(v: &Value, ptr: &str) -> Result<TypeGraph> {
    let mut tg = TypeGraph::new();
    let nptr = child(ptr, "node_types");
    for (i, n) in array(field(v, "node_types", ptr)?, &nptr)?.iter().enumerate() {
        let p = child(&nptr, &i.to_string());
        let name = string(n, &p)?;
        if tg.node_type(name).is_some() {
            return Err(perr(&p, format!("duplicate node type `{name}`")));
        }
        tg.add_node_type(name);
    }
    let eptr = child(ptr, "edge_types");
    for (i, e) in array(field(v, "edge_types", ptr)?, &eptr)?.iter().enumerate() {
        let p = child(&eptr, &i.to_string());
        let name = string(field(e, "name", &p)?, &child(&p, "name"))?;
        if tg.edge_type(name).is_some() {
            return Err(perr(&child(&p, "name"), format!("duplicate edge type `{name}`")));
        }
        let mut ends = [0; 2];
        for (slot, key) in ["src", "tar"].iter().enumerate() {
            let kp = child(&p, key);
            let t = string(field(e, key, &p)?, &kp)?;
            ends[slot] = tg.node_type(t).ok_or_else(|| perr(&kp, format!("unknown node type `{t}`")))?;
        }
        tg.add_edge_type(name, ends[0], ends[1]);
    }
    Ok(tg)
}

pub fn parse_graph(v: &Value, tg: &TypeGraph, ptr: &str) -> Result<Graph> {
    let mut g = Graph::new();
    let nptr = child(ptr, "nodes");
    for (i, n) in array(field(v, "nodes", ptr)?, &nptr)?.iter().enumerate() {
        let p = child(&nptr, &i.to_string());
        let nid = id(field(n, "id", &p)?, &child(&p, "id"))?;
        let tp = child(&p, "type");
        let t = string(field(n, "type", &p)?, &tp)?;
        let ty = tg.node_type(t).ok_or_else(|| perr(&tp, format!("unknown node type `{t}`")))?;
        if g.has_node(nid) {
            return Err(perr(&child(&p, "id"), format!("duplicate node id {nid}")));
        }
        g.add_node(nid, ty);
    }
    let eptr = child(ptr, "edges");
    let edges = match object(v, ptr)?.get("edges") {
        Some(e) => array(e, &eptr)?.as_slice(),
        None => &[],
    };
    for (i, e) in edges.iter().enumerate() {
        let p = child(&eptr, &i.to_string());
        let eid = id(field(e, "id", &p)?, &child(&p, "id"))?;
        let src = id(field(e, "src", &p)?, &child(&p, "src"))?;
        let tar = id(field(e, "tar", &p)?, &child(&p, "tar"))?;
        let tp = child(&p, "type");
        let t = string(field(e, "type", &p)?, &tp)?;
        let ty = tg.edge_type(t).ok_or_else(|| perr(&tp, format!("unknown edge type `{t}`")))?;
        if g.has_edge(eid) {
            return Err(perr(&child(&p, "id"), format!("duplicate edge id {eid}")));
        }
        for (key, n) in [("src", src), ("tar", tar)] {
            if !g.has_node(n) {
                return Err(perr(&child(&p, key), format!("edge endpoint {n} is not a node")));
            }
        }
        g.add_edge(eid, src, tar, ty);
    }
    if let Some(v) = validate_graph(tg, &g).first() {
        return Err(perr(ptr, v.to_string()));
    }
    Ok(g)
}

pub fn parse_morphism(v: &Value, ptr: &str) -> Result<Morphism> {
    let mut m = Morphism::new();
    for (key, edges) in [("nodes", false), ("edges", true)] {
        let Some(map) = object(v, ptr)?.get(key) else { continue };
        let mp = child(ptr, key);
        for (k, t) in object(map, &mp)? {
            let a = key_id(k, &mp)?;
            let b = id(t, &child(&mp, k))?;
            if edges {
                m.edges.insert(a, b);
            } else {
                m.nodes.insert(a, b);
            }
        }
    }
    Ok(m)
}

/// Parse a condition over `root`.
pub fn parse_condition(v: &Value, tg: &TypeGraph, root: &Graph, ptr: &str) -> Result<Condition> {
    if let Some(b) = v.as_bool() {
        return Ok(if b { Condition::True } else { Condition::False });
    }
    let obj = object(v, ptr)?;
    if obj.len() != 1 {
        return Err(perr(ptr, "a condition object has exactly one key"));
    }
    let (key, body) = obj.iter().next().expect("one key");
    let p = child(ptr, key);
    match key.as_str() {
        "exists" | "forall" => {
            let target = parse_graph(field(body, "target", &p)?, tg, &child(&p, "target"))?;
            let mp = child(&p, "morphism");
            let m = match body.get("morphism") {
                Some(m) => parse_morphism(m, &mp)?,
                None => Morphism::identity(root),
            };
            if !m.is_mono(root, &target) {
                return Err(perr(&mp, "not an injective morphism from the enclosing graph"));
            }
            let sub = match body.get("sub") {
                Some(s) => parse_condition(s, tg, &target, &child(&p, "sub"))?,
                None => Condition::True,
            };
            Ok(if key == "exists" { Condition::exists(m, target, sub) } else { Condition::forall(m, target, sub) })
        }
        "not" => Ok(Condition::Not(Box::new(parse_condition(body, tg, root, &p)?))),
        "and" | "or" => {
            let parts = array(body, &p)?
                .iter()
                .enumerate()
                .map(|(i, c)| parse_condition(c, tg, root, &child(&p, &i.to_string())))
                .collect::<Result<Vec<_>>>()?;
            Ok(if key == "and" { Condition::And(parts) } else { Condition::Or(parts) })
        }
        _ => Err(perr(&p, format!("unknown condition connective `{key}`"))),
    }
}

pub fn parse_rule(v: &Value, tg: &TypeGraph, ptr: &str) -> Result<Rule> {
    let name = string(field(v, "name", ptr)?, &child(ptr, "name"))?;
    let lhs = parse_graph(field(v, "lhs", ptr)?, tg, &child(ptr, "lhs"))?;
    let interface = parse_graph(field(v, "interface", ptr)?, tg, &child(ptr, "interface"))?;
    let rhs = parse_graph(field(v, "rhs", ptr)?, tg, &child(ptr, "rhs"))?;
    let plain = PlainRule::new(lhs, interface, rhs).map_err(|e| perr(ptr, e.to_string()))?;
    let ac = match object(v, ptr)?.get("ac") {
        Some(a) => parse_condition(a, tg, &plain.lhs, &child(ptr, "ac"))?,
        None => Condition::True,
    };
    Ok(Rule::new(name, plain).with_ac(ac))
}

pub fn parse_constraint(v: &Value, tg: &TypeGraph, ptr: &str) -> Result<Constraint> {
    let obj = object(v, ptr)?;
    if let Some(gs) = obj.get("graphs") {
        let gp = child(ptr, "graphs");
        let graphs = array(gs, &gp)?
            .iter()
            .enumerate()
            .map(|(i, g)| parse_graph(g, tg, &child(&gp, &i.to_string())))
            .collect::<Result<Vec<_>>>()?;
        return Constraint::new(graphs).map_err(|e| perr(&gp, e.to_string()));
    }
    if let Some(c) = obj.get("condition") {
        let cp = child(ptr, "condition");
        let cond = parse_condition(c, tg, &Graph::new(), &cp)?;
        return Constraint::from_condition(&cond).map_err(|e| perr(&cp, e.to_string()));
    }
    Err(perr(ptr, "a constraint needs `graphs` or `condition`"))
}

fn parse_rule_set(v: &Value, tg: &TypeGraph, ptr: &str) -> Result<RuleSetDoc> {
    let rp = child(ptr, "rules");
    let rules = array(field(v, "rules", ptr)?, &rp)?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_rule(r, tg, &child(&rp, &i.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let mut sequences = Vec::new();
    if let Some(seqs) = object(v, ptr)?.get("sequences") {
        let sp = child(ptr, "sequences");
        for (i, s) in array(seqs, &sp)?.iter().enumerate() {
            let p = child(&sp, &i.to_string());
            let constraint = match s.get("constraint") {
                Some(c) => id(c, &child(&p, "constraint"))? as usize,
                None => 0,
            };
            let target = id(field(s, "target", &p)?, &child(&p, "target"))? as usize;
            let stp = child(&p, "steps");
            let mut steps = Vec::new();
            for (j, st) in array(field(s, "steps", &p)?, &stp)?.iter().enumerate() {
                let q = child(&stp, &j.to_string());
                let rule = string(field(st, "rule", &q)?, &child(&q, "rule"))?.to_string();
                if !rules.iter().any(|r| r.name == rule) {
                    return Err(perr(&child(&q, "rule"), format!("unknown rule `{rule}`")));
                }
                let matching = match st.get("match") {
                    Some(m) => Some(parse_morphism(m, &child(&q, "match"))?),
                    None => None,
                };
                steps.push(StepSpec { rule, matching });
            }
            sequences.push(SequenceSpec { constraint, target, steps });
        }
    }
    Ok(RuleSetDoc { rules, sequences })
}

/// Parse a document of the given kind. An embedded `type_graph` takes precedence over `tg`.
pub fn parse_document(text: &str, kind: Kind, tg: Option<&TypeGraph>) -> Result<(TypeGraph, Document)> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr("", format!("invalid JSON: {e}")))?;
    if kind == Kind::TypeGraph {
        let t = parse_type_graph(&v, "")?;
        return Ok((t.clone(), Document::TypeGraph(t)));
    }
    let tg = match object(&v, "")?.get("type_graph") {
        Some(t) => parse_type_graph(t, "/type_graph")?,
        None => tg.cloned().ok_or_else(|| perr("/type_graph", "missing field and no type graph given"))?,
    };
    let doc = match kind {
        Kind::TypeGraph => unreachable!(),
        Kind::Graph => Document::Graph(parse_graph(&v, &tg, "")?),
        Kind::Rule => Document::Rule(parse_rule(&v, &tg, "")?),
        Kind::Constraint => Document::Constraint(parse_constraint(&v, &tg, "")?),
        Kind::ConstraintSet => {
            let cs = array(field(&v, "constraints", "")?, "/constraints")?
                .iter()
                .enumerate()
                .map(|(i, c)| parse_constraint(c, &tg, &format!("/constraints/{i}")))
                .collect::<Result<Vec<_>>>()?;
            Document::ConstraintSet(cs)
        }
        Kind::RuleSet => Document::RuleSet(parse_rule_set(&v, &tg, "")?),
    };
    Ok((tg, doc))
}

pub fn type_graph_value(tg: &TypeGraph) -> Value {
    let edges: Vec<Value> = tg
        .edge_types
        .iter()
        .map(|EdgeType { name, src, tar }| {
            json!({"name": name, "src": tg.node_type_name(*src), "tar": tg.node_type_name(*tar)})
        })
        .collect();
    json!({"node_types": tg.node_types, "edge_types": edges})
}

pub fn graph_value(g: &Graph, tg: &TypeGraph) -> Value {
    let nodes: Vec<Value> = g.nodes().map(|(n, t)| json!({"id": n, "type": tg.node_type_name(t)})).collect();
    let edges: Vec<Value> = g
        .edges()
        .map(|(e, d)| json!({"id": e, "src": d.src, "tar": d.tar, "type": tg.edge_type_name(d.ty)}))
        .collect();
    json!({"nodes": nodes, "edges": edges})
}

pub fn morphism_value(m: &Morphism) -> Value {
    let map = |xs: &BTreeMap<u32, u32>| -> Map<String, Value> { xs.iter().map(|(a, b)| (a.to_string(), json!(b))).collect() };
    json!({"nodes": map(&m.nodes), "edges": map(&m.edges)})
}

pub fn condition_value(c: &Condition, tg: &TypeGraph) -> Value {
    match c {
        Condition::True => json!(true),
        Condition::False => json!(false),
        Condition::Exists(q) | Condition::Forall(q) => {
            let key = if matches!(c, Condition::Exists(_)) { "exists" } else { "forall" };
            json!({key: {
                "morphism": morphism_value(&q.morphism),
                "target": graph_value(&q.target, tg),
                "sub": condition_value(&q.sub, tg),
            }})
        }
        Condition::Not(c) => json!({"not": condition_value(c, tg)}),
        Condition::And(cs) => json!({"and": cs.iter().map(|c| condition_value(c, tg)).collect::<Vec<_>>()}),
        Condition::Or(cs) => json!({"or": cs.iter().map(|c| condition_value(c, tg)).collect::<Vec<_>>()}),
    }
}

pub fn rule_value(r: &Rule, tg: &TypeGraph) -> Value {
    let mut v = json!({
        "name": r.name,
        "lhs": graph_value(&r.plain.lhs, tg),
        "interface": graph_value(&r.plain.interface, tg),
        "rhs": graph_value(&r.plain.rhs, tg),
    });
    if !r.ac.is_true() {
        v["ac"] = condition_value(&r.ac, tg);
    }
    v
}

pub fn constraint_value(c: &Constraint, tg: &TypeGraph) -> Value {
    json!({"graphs": c.graphs.iter().map(|g| graph_value(g, tg)).collect::<Vec<_>>()})
}

fn rule_set_value(d: &RuleSetDoc, tg: &TypeGraph) -> Value {
    let seqs: Vec<Value> = d
        .sequences
        .iter()
        .map(|s| {
            let steps: Vec<Value> = s
                .steps
                .iter()
                .map(|st| {
                    let mut v = json!({"rule": st.rule});
                    if let Some(m) = &st.matching {
                        v["match"] = morphism_value(m);
                    }
                    v
                })
                .collect();
            json!({"constraint": s.constraint, "target": s.target, "steps": steps})
        })
        .collect();
    json!({"rules": d.rules.iter().map(|r| rule_value(r, tg)).collect::<Vec<_>>(), "sequences": seqs})
}

/// Canonical text: sorted keys, two-space indentation, embedded type graph, trailing newline.
pub fn save_document(doc: &Document, tg: &TypeGraph) -> String {
    let mut v = match doc {
        Document::TypeGraph(t) => type_graph_value(t),
        Document::Graph(g) => graph_value(g, tg),
        Document::Rule(r) => rule_value(r, tg),
        Document::Constraint(c) => constraint_value(c, tg),
        Document::ConstraintSet(cs) => {
            json!({"constraints": cs.iter().map(|c| constraint_value(c, tg)).collect::<Vec<_>>()})
        }
        Document::RuleSet(d) => rule_set_value(d, tg),
    };
    if !matches!(doc, Document::TypeGraph(_)) {
        v["type_graph"] = type_graph_value(tg);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub fn load_file(path: &std::path::Path, kind: Kind, tg: Option<&TypeGraph>) -> Result<(TypeGraph, Document)> {
    let text = std::fs::read_to_string(path)?;
    parse_document(&text, kind, tg)
}

/// Repairing sets for each constraint from a rule-set document.
///
/// Listed sequences are built first; missing targets are searched for with at most `max_len` steps.
pub fn repairing_sets(doc: &RuleSetDoc, cs: &[Constraint], max_len: usize) -> Result<Vec<RepairingSet>> {
    let mut out = Vec::with_capacity(cs.len());
    for (i, c) in cs.iter().enumerate() {
        let mut set = RepairingSet { rules: doc.rules.clone(), sequences: BTreeMap::new() };
        for s in doc.sequences.iter().filter(|s| s.constraint == i) {
            set.sequences.insert(s.target, build_sequence(c, s.target, &doc.rules, &s.steps)?);
        }
        complete_sequences(&mut set, c, max_len)?;
        out.push(set);
    }
    for s in &doc.sequences {
        if s.constraint >= cs.len() {
            return Err(Error::Invalid(format!("sequence refers to constraint {} of {}", s.constraint, cs.len())));
        }
    }
    Ok(out)
}
