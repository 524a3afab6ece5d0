#![allow(dead_code)]

use grafrepair::condition::Condition;
use grafrepair::graph::{Graph, Morphism};

/// Every injective morphism from `p` to `g` that extends `fixed`, found by plain backtracking
/// over node assignments followed by edge assignments.
pub fn naive_monos(p: &Graph, g: &Graph, fixed: &Morphism) -> Vec<Morphism> {
    let pn: Vec<(u32, u32)> = p.nodes().collect();
    let gn: Vec<(u32, u32)> = g.nodes().collect();
    let mut out = Vec::new();
    let mut cur = Morphism::new();
    assign_nodes(p, g, &pn, &gn, 0, fixed, &mut cur, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn assign_nodes(
    p: &Graph,
    g: &Graph,
    pn: &[(u32, u32)],
    gn: &[(u32, u32)],
    i: usize,
    fixed: &Morphism,
    cur: &mut Morphism,
    out: &mut Vec<Morphism>,
) {
    if i == pn.len() {
        let pe: Vec<_> = p.edges().collect();
        let mut m = cur.clone();
        assign_edges(g, &pe, 0, fixed, &mut m, out);
        return;
    }
    let (n, t) = pn[i];
    for (h, ht) in gn {
        if *ht != t || cur.nodes.values().any(|x| x == h) {
            continue;
        }
        if let Some(f) = fixed.nodes.get(&n) {
            if f != h {
                continue;
            }
        }
        cur.nodes.insert(n, *h);
        assign_nodes(p, g, pn, gn, i + 1, fixed, cur, out);
        cur.nodes.remove(&n);
    }
}

fn assign_edges(
    g: &Graph,
    pe: &[(u32, grafrepair::graph::Edge)],
    i: usize,
    fixed: &Morphism,
    cur: &mut Morphism,
    out: &mut Vec<Morphism>,
) {
    if i == pe.len() {
        out.push(cur.clone());
        return;
    }
    let (e, d) = pe[i];
    for (h, hd) in g.edges() {
        if hd.ty != d.ty || hd.src != cur.nodes[&d.src] || hd.tar != cur.nodes[&d.tar] {
            continue;
        }
        if cur.edges.values().any(|x| *x == h) {
            continue;
        }
        if let Some(f) = fixed.edges.get(&e) {
            if *f != h {
                continue;
            }
        }
        cur.edges.insert(e, h);
        assign_edges(g, pe, i + 1, fixed, cur, out);
        cur.edges.remove(&e);
    }
}

/// Satisfaction by direct unfolding of the quantifiers over [`naive_monos`].
pub fn naive_satisfies(g: &Graph, p: &Morphism, c: &Condition) -> bool {
    match c {
        Condition::True => true,
        Condition::False => false,
        Condition::Exists(q) | Condition::Forall(q) => {
            let mut fixed = Morphism::new();
            for (a, b) in &q.morphism.nodes {
                fixed.nodes.insert(*b, p.nodes[a]);
            }
            for (a, b) in &q.morphism.edges {
                fixed.edges.insert(*b, p.edges[a]);
            }
            let ext = naive_monos(&q.target, g, &fixed);
            if matches!(c, Condition::Exists(_)) {
                ext.iter().any(|e| naive_satisfies(g, e, &q.sub))
            } else {
                ext.iter().all(|e| naive_satisfies(g, e, &q.sub))
            }
        }
        Condition::Not(c) => !naive_satisfies(g, p, c),
        Condition::And(cs) => cs.iter().all(|c| naive_satisfies(g, p, c)),
        Condition::Or(cs) => cs.iter().any(|c| naive_satisfies(g, p, c)),
    }
}

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}
