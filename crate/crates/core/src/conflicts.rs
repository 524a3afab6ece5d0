//! Conflicts between graphs of a constraint and between constraints.

use std::collections::{BTreeMap, BTreeSet};

use crate::condition::Constraint;
use crate::consistency::is_basic_maintaining;
use crate::error::{Error, Result};
use crate::graph::{glue, Graph, Morphism};
use crate::rewrite::PlainRule;

/// Directed graph over layer indices or constraint indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConflictGraph {
    pub nodes: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl ConflictGraph {
    pub fn new(nodes: Vec<usize>) -> Self {
        ConflictGraph { nodes, edges: BTreeSet::new() }
    }

    pub fn add_edge(&mut self, src: usize, tar: usize) {
        self.edges.insert((src, tar));
    }

    pub fn successors(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((n, 0)..=(n, usize::MAX)).map(|(_, t)| *t)
    }

    pub fn is_acyclic(&self) -> bool {
        topological_ordering(self).is_ok()
    }

    /// A directed cycle, if any.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut mark: BTreeMap<usize, Mark> = self.nodes.iter().map(|n| (*n, Mark::New)).collect();
        let mut stack: Vec<usize> = Vec::new();
        fn visit(
            g: &ConflictGraph,
            n: usize,
            mark: &mut BTreeMap<usize, Mark>,
            stack: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            mark.insert(n, Mark::Active);
            stack.push(n);
            for s in g.successors(n) {
                match mark.get(&s).copied().unwrap_or(Mark::New) {
                    Mark::Active => {
                        let pos = stack.iter().position(|x| *x == s).expect("on stack");
                        let mut cyc = stack[pos..].to_vec();
                        cyc.push(s);
                        return Some(cyc);
                    }
                    Mark::New => {
                        if let Some(c) = visit(g, s, mark, stack) {
                            return Some(c);
                        }
                    }
                    Mark::Done => {}
                }
            }
            stack.pop();
            mark.insert(n, Mark::Done);
            None
        }
        for n in self.nodes.clone() {
            if mark[&n] == Mark::New {
                if let Some(c) = visit(self, n, &mut mark, &mut stack) {
                    return Some(c);
                }
            }
        }
        None
    }

    pub fn to_dot(&self, name: &str, label: impl Fn(usize) -> String) -> String {
        let mut s = format!("digraph {name} {{\n");
        for n in &self.nodes {
            s.push_str(&format!("  n{n} [label=\"{}\"];\n", label(*n)));
        }
        for (a, b) in &self.edges {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Kahn's algorithm with the smallest ready label first.
pub fn topological_ordering(g: &ConflictGraph) -> Result<Vec<usize>> {
    let mut indeg: BTreeMap<usize, usize> = g.nodes.iter().map(|n| (*n, 0)).collect();
    for (_, t) in &g.edges {
        *indeg.entry(*t).or_default() += 1;
    }
    let mut ready: BTreeSet<usize> = indeg.iter().filter(|(_, d)| **d == 0).map(|(n, _)| *n).collect();
    let mut out = Vec::with_capacity(g.nodes.len());
    while let Some(n) = ready.pop_first() {
        out.push(n);
        for s in g.successors(n) {
            let d = indeg.get_mut(&s).expect("edge target is a node");
            *d -= 1;
            if *d == 0 {
                ready.insert(s);
            }
        }
    }
    if out.len() < indeg.len() {
        let cyc = g.find_cycle().unwrap_or_default();
        return Err(Error::Cyclic(cyc.iter().map(|n| n.to_string()).collect()));
    }
    Ok(out)
}

fn check_index(c: &Constraint, i: usize) -> Result<()> {
    if i == 0 || i > c.nlvl() {
        return Err(Error::LayerOutOfRange { k: i as i32, nlvl: c.nlvl() });
    }
    Ok(())
}

/// Rules `C_j ⊇ C ⊆ C` for `C ∈ ig(C_{j-1}, C_j)`, deleting part of a universally bound graph.
pub fn universal_deletion_rules(c: &Constraint, j: usize) -> Vec<PlainRule> {
    let cj = c.graph(j);
    c.ig(j - 1)
        .into_iter()
        .filter(|x| x.size() < cj.size())
        .map(|x| PlainRule { lhs: cj.clone(), interface: x.clone(), rhs: x })
        .collect()
}

/// The rule `C_{k-1} ⊇ C_{k-1} ⊆ C_k` inserting an existentially bound graph.
pub fn existential_insertion_rule(c: &Constraint, k: usize) -> PlainRule {
    let lo = c.graph(k - 1).clone();
    PlainRule { lhs: lo.clone(), interface: lo, rhs: c.graph(k).clone() }
}

/// Does `C_from` cause a conflict for `C_to`? Decided by overlaps and applicability.
pub fn causes_conflict(c: &Constraint, from: usize, to: usize) -> Result<bool> {
    check_index(c, from)?;
    check_index(c, to)?;
    if Constraint::is_existential(from) && Constraint::is_universal(to) {
        let ck = c.graph(from);
        let fresh = ck.minus(c.graph(from - 1));
        let del = existential_insertion_rule(c, from).inverse();
        let cj = c.graph(to);
        Ok(glue(ck, cj, &Morphism::new(), true).into_iter().any(|o| {
            o.left.image_of(&fresh).intersects(&o.right.image_of(&cj.elements())) && del.is_applicable(&o.graph, &o.left)
        }))
    } else if Constraint::is_universal(from) && Constraint::is_existential(to) {
        let cj = c.graph(from);
        let ck = c.graph(to);
        for rule in universal_deletion_rules(c, from) {
            let removed = rule.deleted();
            for o in glue(cj, ck, &Morphism::new(), true) {
                if o.left.image_of(&removed).intersects(&o.right.image_of(&ck.elements()))
                    && rule.is_applicable(&o.graph, &o.left)
                {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    } else {
        Err(Error::Invalid(format!("graphs {from} and {to} are bound by the same quantifier")))
    }
}

/// `∀(C, false)` as a constraint.
pub fn forbid(g: &Graph) -> Constraint {
    Constraint { graphs: vec![Graph::new(), g.clone()] }
}

/// `∃(C, true)` as a constraint.
pub fn require(g: &Graph) -> Constraint {
    Constraint { graphs: vec![Graph::new(), Graph::new(), g.clone()] }
}

/// Same relation as [`causes_conflict`], decided through basic maintaining rules.
pub fn causes_conflict_basic(c: &Constraint, from: usize, to: usize) -> Result<bool> {
    check_index(c, from)?;
    check_index(c, to)?;
    if Constraint::is_existential(from) && Constraint::is_universal(to) {
        Ok(!is_basic_maintaining(&existential_insertion_rule(c, from), &forbid(c.graph(to))))
    } else if Constraint::is_universal(from) && Constraint::is_existential(to) {
        let target = require(c.graph(to));
        Ok(universal_deletion_rules(c, from).iter().any(|r| !is_basic_maintaining(r, &target)))
    } else {
        Err(Error::Invalid(format!("graphs {from} and {to} are bound by the same quantifier")))
    }
}

/// All pairs `(from, to)` with a conflict.
pub fn conflicts(c: &Constraint) -> Vec<(usize, usize)> {
    let n = c.nlvl();
    let mut out = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            let mixed = (Constraint::is_existential(a) && Constraint::is_universal(b))
                || (Constraint::is_universal(a) && Constraint::is_existential(b));
            if mixed && causes_conflict(c, a, b).expect("indices in range") {
                out.push((a, b));
            }
        }
    }
    out
}

/// Edges `k' -> j'` for a conflict of `C_k` for `C_j` over nodes `0..n`.
pub fn conflict_edges(k: usize, j: usize, n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for kp in [Some(k), k.checked_sub(1)].into_iter().flatten() {
        for jp in [Some(j), j.checked_sub(1)].into_iter().flatten() {
            if kp < n && jp < n && kp != jp {
                out.push((kp, jp));
            }
        }
    }
    out
}

pub fn conflict_graph(c: &Constraint) -> ConflictGraph {
    let n = c.nlvl();
    let mut g = ConflictGraph::new((0..n).collect());
    for (k, j) in conflicts(c) {
        for (a, b) in conflict_edges(k, j, n) {
            g.add_edge(a, b);
        }
    }
    g
}

pub fn is_circular_conflict_free(c: &Constraint) -> bool {
    conflict_graph(c).is_acyclic()
}

/// Does a sequence with concurrent rule `rule` endanger some graph of `target`?
pub fn rule_conflicts_with(rule: &PlainRule, target: &Constraint) -> bool {
    (1..=target.nlvl()).any(|j| {
        let single = if Constraint::is_universal(j) { forbid(target.graph(j)) } else { require(target.graph(j)) };
        !is_basic_maintaining(rule, &single)
    })
}

/// `c` causes a conflict for `c2` when one of the given concurrent rules of `c`'s repairing
/// sequences is not basic maintaining for a single graph of `c2`.
pub fn constraint_causes_conflict(concurrent: &[PlainRule], c2: &Constraint) -> bool {
    concurrent.iter().any(|r| rule_conflicts_with(r, c2))
}

/// Conflict graph over constraints; `concurrent[i]` are the concurrent rules of constraint `i`.
pub fn conflict_graph_of_set(constraints: &[Constraint], concurrent: &[Vec<PlainRule>]) -> ConflictGraph {
    let mut g = ConflictGraph::new((0..constraints.len()).collect());
    for (i, rules) in concurrent.iter().enumerate() {
        for (j, c2) in constraints.iter().enumerate() {
            if i != j && constraint_causes_conflict(rules, c2) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Every member is circular conflict free and the set's conflict graph is acyclic.
pub fn is_circular_conflict_free_set(constraints: &[Constraint], concurrent: &[Vec<PlainRule>]) -> bool {
    constraints.iter().all(is_circular_conflict_free) && conflict_graph_of_set(constraints, concurrent).is_acyclic()
}
