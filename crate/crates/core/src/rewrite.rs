//! Double-pushout rewriting with injective matches.

use std::ops::ControlFlow;

use crate::condition::{satisfies, shift_over_morphism, Condition, Constraint};
use crate::error::{Error, Result};
use crate::graph::{for_each_extension, glue, Elements, Graph, Morphism};

/// A span `L ⊇ K ⊆ R`; the inclusions are identities on ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlainRule {
    pub lhs: Graph,
    pub interface: Graph,
    pub rhs: Graph,
}

impl PlainRule {
    pub fn new(lhs: Graph, interface: Graph, rhs: Graph) -> Result<Self> {
        if !interface.is_subgraph_of(&lhs) || !interface.is_subgraph_of(&rhs) {
            return Err(Error::NotSubgraph("rule interface must be contained in both sides".into()));
        }
        if !lhs.is_well_formed() || !rhs.is_well_formed() || !interface.is_well_formed() {
            return Err(Error::Invalid("rule graph has dangling edges".into()));
        }
        Ok(PlainRule { lhs, interface, rhs })
    }

    pub fn inverse(&self) -> PlainRule {
        PlainRule { lhs: self.rhs.clone(), interface: self.interface.clone(), rhs: self.lhs.clone() }
    }

    pub fn deleted(&self) -> Elements {
        self.lhs.minus(&self.interface)
    }

    pub fn created(&self) -> Elements {
        self.rhs.minus(&self.interface)
    }

    /// Injective match plus dangling condition.
    pub fn is_applicable(&self, g: &Graph, m: &Morphism) -> bool {
        if !m.is_mono(&self.lhs, g) {
            return false;
        }
        let del = m.image_of(&self.deleted());
        g.edges().all(|(e, d)| del.edges.contains(&e) || (!del.nodes.contains(&d.src) && !del.nodes.contains(&d.tar)))
    }

    pub fn apply(&self, g: &Graph, m: &Morphism) -> Result<Transformation> {
        if !self.is_applicable(g, m) {
            return Err(Error::NotApplicable);
        }
        let del = m.image_of(&self.deleted());
        let mut d = g.clone();
        for e in &del.edges {
            d.remove_edge(*e);
        }
        for n in &del.nodes {
            d.remove_node(*n);
        }
        let mut h = d.clone();
        let mut comatch = m.restrict(&self.interface);
        let mut next_n = g.next_node_id();
        for (n, t) in self.rhs.nodes() {
            if !self.interface.has_node(n) {
                h.add_node(next_n, t);
                comatch.nodes.insert(n, next_n);
                next_n += 1;
            }
        }
        let mut next_e = g.next_edge_id();
        for (e, ed) in self.rhs.edges() {
            if !self.interface.has_edge(e) {
                h.add_edge(next_e, comatch.nodes[&ed.src], comatch.nodes[&ed.tar], ed.ty);
                comatch.edges.insert(e, next_e);
                next_e += 1;
            }
        }
        Ok(Transformation { g: g.clone(), d, h, m: m.clone(), comatch })
    }

    /// Matches at which the rule is applicable, in canonical order.
    pub fn applicable_matches(&self, g: &Graph) -> Vec<Morphism> {
        crate::graph::monomorphisms(&self.lhs, g).into_iter().filter(|m| self.is_applicable(g, m)).collect()
    }

    pub fn has_applicable_match(&self, g: &Graph, fixed: &Morphism) -> bool {
        for_each_extension(&self.lhs, g, fixed, |m| {
            if self.is_applicable(g, m) {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .is_break()
    }
}

/// A plain rule with an application condition over its left-hand side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub name: String,
    pub plain: PlainRule,
    pub ac: Condition,
}

impl Rule {
    pub fn new(name: &str, plain: PlainRule) -> Self {
        Rule { name: name.to_string(), plain, ac: Condition::True }
    }

    pub fn with_ac(mut self, ac: Condition) -> Self {
        self.ac = ac;
        self
    }

    pub fn lhs(&self) -> &Graph {
        &self.plain.lhs
    }

    pub fn is_applicable(&self, g: &Graph, m: &Morphism) -> bool {
        self.plain.is_applicable(g, m) && satisfies(g, m, &self.ac)
    }

    pub fn apply(&self, g: &Graph, m: &Morphism) -> Result<Transformation> {
        if !satisfies(g, m, &self.ac) {
            return Err(Error::NotApplicable);
        }
        self.plain.apply(g, m)
    }

    pub fn applicable_matches(&self, g: &Graph) -> Vec<Morphism> {
        self.plain.applicable_matches(g).into_iter().filter(|m| satisfies(g, m, &self.ac)).collect()
    }

    pub fn transformations(&self, g: &Graph) -> Vec<Transformation> {
        self.applicable_matches(g).iter().map(|m| self.plain.apply(g, m).expect("applicable")).collect()
    }
}

/// `G ⟹ H` via context `D`. `D`'s ids are kept in both `G` and `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformation {
    pub g: Graph,
    pub d: Graph,
    pub h: Graph,
    pub m: Morphism,
    pub comatch: Morphism,
}

impl Transformation {
    /// `track ∘ p`, or `None` when some image element was deleted.
    pub fn track(&self, p: &Morphism) -> Option<Morphism> {
        let img = p.image();
        if img.nodes.iter().all(|n| self.d.has_node(*n)) && img.edges.iter().all(|e| self.d.has_edge(*e)) {
            Some(p.clone())
        } else {
            None
        }
    }

    /// Does `p': X -> H` come from some `p: X -> G`?
    pub fn has_preimage(&self, p: &Morphism) -> bool {
        let img = p.image();
        img.nodes.iter().all(|n| self.d.has_node(*n)) && img.edges.iter().all(|e| self.d.has_edge(*e))
    }

    pub fn inverse(&self) -> Transformation {
        Transformation { g: self.h.clone(), d: self.d.clone(), h: self.g.clone(), m: self.comatch.clone(), comatch: self.m.clone() }
    }

    /// The rule `G ⊇ D ⊆ H` this step amounts to.
    pub fn as_rule(&self) -> PlainRule {
        PlainRule { lhs: self.g.clone(), interface: self.d.clone(), rhs: self.h.clone() }
    }
}

/// Track of a sequence: composite of the individual tracks, checked by membership.
pub fn track_sequence(steps: &[Transformation], p: &Morphism) -> Option<Morphism> {
    let mut cur = p.clone();
    for t in steps {
        cur = t.track(&cur)?;
    }
    Some(cur)
}

/// Concurrent rule `G_0 ⊇ K ⊆ G_n` of a non-empty sequence.
pub fn concurrent_rule(steps: &[Transformation]) -> Result<PlainRule> {
    let first = steps.first().ok_or_else(|| Error::Invalid("empty sequence".into()))?;
    let last = steps.last().unwrap();
    let mut k = first.g.clone();
    for t in steps {
        let drop_e: Vec<_> = k.edge_ids().filter(|e| !t.d.has_edge(*e) || t.d.edge(*e) != k.edge(*e)).collect();
        for e in drop_e {
            k.remove_edge(e);
        }
        let drop_n: Vec<_> = k.node_ids().filter(|n| !t.d.has_node(*n) || t.d.node_type(*n) != k.node_type(*n)).collect();
        for n in drop_n {
            k.remove_node(n);
        }
    }
    PlainRule::new(first.g.clone(), k, last.h.clone())
}

/// Shift a condition over `R` along a rule to a condition over `L`.
///
/// `rule` is given as `L ⊇ K ⊆ R`; the condition lives on the `R` side.
pub fn shift_over_rule(c: &Condition, rule: &PlainRule) -> Condition {
    match c {
        Condition::True => Condition::True,
        Condition::False => Condition::False,
        Condition::Exists(q) | Condition::Forall(q) => {
            let inv = rule.inverse();
            let is_forall = matches!(c, Condition::Forall(_));
            if !inv.is_applicable(&q.target, &q.morphism) {
                return if is_forall { Condition::True } else { Condition::False };
            }
            let t = inv.apply(&q.target, &q.morphism).expect("applicable");
            let derived = PlainRule { lhs: t.h.clone(), interface: t.d.clone(), rhs: t.g.clone() };
            let sub = shift_over_rule(&q.sub, &derived);
            if is_forall {
                Condition::forall(t.comatch, t.h, sub)
            } else {
                Condition::exists(t.comatch, t.h, sub)
            }
        }
        Condition::Not(c) => Condition::not(shift_over_rule(c, rule)),
        Condition::And(cs) => Condition::and(cs.iter().map(|c| shift_over_rule(c, rule)).collect()),
        Condition::Or(cs) => Condition::or(cs.iter().map(|c| shift_over_rule(c, rule)).collect()),
    }
}

/// Rules obtained by enlarging the left-hand side with graphs of the next layer.
pub fn derived_rules(rule: &Rule, c: &Constraint, k: i32) -> Result<Vec<Rule>> {
    let n = c.nlvl() as i32;
    if k < -1 || k >= n - 1 {
        return Err(Error::LayerOutOfRange { k, nlvl: c.nlvl() });
    }
    let top = (k + 2) as usize;
    let family: Vec<Graph> = if top >= c.nlvl() { vec![c.graph(top).clone()] } else { c.ig(top) };
    let mut out = Vec::new();
    for p in &family {
        for o in glue(rule.lhs(), p, &Morphism::new(), false) {
            let lp = o.graph.clone();
            let t = match rule.plain.apply(&lp, &o.left) {
                Ok(t) => t,
                Err(_) => continue,
            };
            let ac = shift_over_morphism(&rule.ac, &o.left, &lp);
            let plain = PlainRule { lhs: t.g, interface: t.d, rhs: t.h };
            out.push(Rule { name: format!("{}#{}", rule.name, out.len()), plain, ac });
        }
    }
    Ok(out)
}
