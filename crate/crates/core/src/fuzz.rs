//! Exhaustive and random generators over the class/feature schema.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::condition::Constraint;
use crate::fixtures::{CLASS, DEP, FEATURE, OWNS};
use crate::graph::{Graph, NodeId};
use crate::rewrite::PlainRule;

fn edge_type_for(src: u32, tar: u32) -> Option<u32> {
    match (src, tar) {
        (CLASS, FEATURE) => Some(OWNS),
        (FEATURE, FEATURE) => Some(DEP),
        _ => None,
    }
}

/// Every graph with at most `max_nodes` nodes and `max_edges` edges, without parallel edges.
///
/// Node types are sorted by id so most relabelings are skipped; the list still contains
/// isomorphic duplicates.
pub fn all_graphs(max_nodes: usize, max_edges: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 0..=max_nodes {
        for classes in 0..=n {
            let mut base = Graph::new();
            for i in 0..n {
                base.add_node(i as NodeId, if i < classes { CLASS } else { FEATURE });
            }
            let mut slots = Vec::new();
            for s in 0..n as NodeId {
                for t in 0..n as NodeId {
                    let st = base.node_type(s).expect("node");
                    let tt = base.node_type(t).expect("node");
                    if let Some(ty) = edge_type_for(st, tt) {
                        slots.push((s, t, ty));
                    }
                }
            }
            let mut chosen = Vec::new();
            subsets(&slots, 0, max_edges, &mut chosen, &mut |sel| {
                let mut g = base.clone();
                for (i, (s, t, ty)) in sel.iter().enumerate() {
                    g.add_edge(i as u32, *s, *t, *ty);
                }
                out.push(g);
            });
        }
    }
    out
}

fn subsets<T: Copy>(items: &[T], from: usize, left: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
    f(cur);
    if left == 0 {
        return;
    }
    for i in from..items.len() {
        cur.push(items[i]);
        subsets(items, i + 1, left - 1, cur, f);
        cur.pop();
    }
}

/// Adds one random node or typed edge to `g`; parallel edges are allowed.
pub fn grow(rng: &mut impl Rng, g: &mut Graph) {
    let nodes: Vec<(NodeId, u32)> = g.nodes().collect();
    if !nodes.is_empty() && rng.gen_bool(0.6) {
        let pairs: Vec<(NodeId, NodeId, u32)> = nodes
            .iter()
            .flat_map(|(s, st)| nodes.iter().filter_map(move |(t, tt)| edge_type_for(*st, *tt).map(|ty| (*s, *t, ty))))
            .collect();
        if let Some((s, t, ty)) = pairs.choose(rng) {
            let id = g.next_edge_id();
            g.add_edge(id, *s, *t, *ty);
            return;
        }
    }
    let id = g.next_node_id();
    g.add_node(id, if rng.gen_bool(0.4) { CLASS } else { FEATURE });
}

pub fn random_graph(rng: &mut impl Rng, max_nodes: usize, max_edges: usize) -> Graph {
    let mut g = Graph::new();
    let n = rng.gen_range(0..=max_nodes);
    for i in 0..n {
        g.add_node(i as NodeId, if rng.gen_bool(0.4) { CLASS } else { FEATURE });
    }
    let e = if n == 0 { 0 } else { rng.gen_range(0..=max_edges) };
    for _ in 0..e {
        let s = rng.gen_range(0..n) as NodeId;
        let t = rng.gen_range(0..n) as NodeId;
        let st = g.node_type(s).expect("node");
        let tt = g.node_type(t).expect("node");
        if let Some(ty) = edge_type_for(st, tt) {
            let id = g.next_edge_id();
            g.add_edge(id, s, t, ty);
        }
    }
    g
}

/// A chain `∅ ⊆ C_1 ⊊ ... ⊊ C_nlvl` grown by one or two elements per layer.
///
/// `C_1` is empty with probability `p_exist`, which yields an existential constraint.
pub fn random_constraint(rng: &mut impl Rng, nlvl: usize, p_exist: f64) -> Constraint {
    let mut graphs = vec![Graph::new()];
    let mut cur = Graph::new();
    for i in 1..=nlvl {
        if i == 1 && nlvl >= 2 && rng.gen_bool(p_exist) {
            graphs.push(cur.clone());
            continue;
        }
        let steps = rng.gen_range(1..=2);
        for _ in 0..steps {
            grow(rng, &mut cur);
        }
        graphs.push(cur.clone());
    }
    Constraint::new(graphs).expect("growing chain")
}

/// A random span: `K` is a random well-formed subgraph of `L`, and `R` extends `K`.
pub fn random_rule(rng: &mut impl Rng, max_lhs: usize) -> PlainRule {
    let mut lhs = Graph::new();
    for _ in 0..rng.gen_range(0..=max_lhs) {
        grow(rng, &mut lhs);
    }
    let mut k = lhs.clone();
    for (e, _) in lhs.edges() {
        if rng.gen_bool(0.3) {
            k.remove_edge(e);
        }
    }
    for n in lhs.node_ids() {
        let isolated = k.edges().all(|(_, d)| d.src != n && d.tar != n);
        if isolated && rng.gen_bool(0.2) {
            k.remove_node(n);
        }
    }
    let mut rhs = k.clone();
    let mut probe = lhs.clone();
    for _ in 0..rng.gen_range(0..=2) {
        let before_n = probe.next_node_id();
        let before_e = probe.next_edge_id();
        grow(rng, &mut probe);
        if probe.next_node_id() > before_n {
            rhs.add_node(before_n, probe.node_type(before_n).expect("node"));
        } else if let Some(d) = probe.edge(before_e) {
            if rhs.has_node(d.src) && rhs.has_node(d.tar) {
                rhs.add_edge(before_e, d.src, d.tar, d.ty);
            }
        }
    }
    PlainRule::new(lhs, k, rhs).expect("well-formed span")
}
