//! Construction of application conditions that make rules maintaining or increasing.

use crate::condition::{Condition, Constraint};
use crate::error::{Error, Result};
use crate::graph::{extended_overlaps, glue, overlaps, Graph, Morphism};
use crate::rewrite::{shift_over_rule, PlainRule, Rule};

/// Which rule shapes a basic application condition is built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicKind {
    /// Removes elements of an occurrence of a universally bound graph.
    Deleting,
    /// Inserts the intermediate graph `C'` of the next existential layer.
    Inserting(Graph),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynthesisStats {
    pub overlaps: usize,
    pub conjuncts: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisReport {
    pub rule: Rule,
    pub layer: Option<i32>,
    pub stats: SynthesisStats,
}

fn layer_range(c: &Constraint, k: i32) -> Result<()> {
    if k < -1 || k >= c.nlvl() as i32 {
        return Err(Error::LayerOutOfRange { k, nlvl: c.nlvl() });
    }
    Ok(())
}

/// Forbid extending the match to overlaps of `L` with intermediate graphs of the next layer
/// where deleted elements meet the part above `C_{k+2}`.
pub fn wors(rule: &PlainRule, c: &Constraint, k: i32) -> Condition {
    let n = c.nlvl() as i32;
    if k >= n - 2 {
        return Condition::True;
    }
    let top = (k + 2) as usize;
    let base = c.graph(top);
    let del = rule.deleted();
    let mut parts = Vec::new();
    for cp in c.ig(top) {
        let upper = cp.minus(base);
        for o in overlaps(&rule.lhs, &cp) {
            if o.left.image_of(&del).intersects(&o.right.image_of(&upper)) {
                parts.push(Condition::not(Condition::exists(o.left, o.graph, Condition::True)));
            }
        }
    }
    Condition::and(parts)
}

/// Forbid creating occurrences of universally bound graphs up to `C_{k+2}`.
pub fn ins(rule: &PlainRule, c: &Constraint, k: i32) -> Condition {
    let n = c.nlvl();
    let created = rule.created();
    let mut parts = Vec::new();
    for j in (1..=((k + 2).max(0) as usize).min(n)).filter(|j| Constraint::is_universal(*j)) {
        let cj = c.graph(j);
        let all = cj.elements();
        for o in overlaps(&rule.rhs, cj) {
            if o.left.image_of(&created).intersects(&o.right.image_of(&all)) {
                let post = Condition::not(Condition::exists(o.left, o.graph, Condition::True));
                parts.push(shift_over_rule(&post, rule));
            }
        }
    }
    Condition::and(parts)
}

/// Forbid deleting fresh parts of existentially bound graphs up to `C_{k+1}`.
pub fn remain(rule: &PlainRule, c: &Constraint, k: i32) -> Condition {
    let n = c.nlvl();
    let del = rule.deleted();
    let mut parts = Vec::new();
    for j in (2..=((k + 1).max(0) as usize).min(n)).filter(|j| Constraint::is_existential(*j)) {
        let cj = c.graph(j);
        let fresh = cj.minus(c.graph(j - 1));
        for o in overlaps(&rule.lhs, cj) {
            if o.left.image_of(&del).intersects(&o.right.image_of(&fresh)) {
                parts.push(Condition::not(Condition::exists(o.left, o.graph, Condition::True)));
            }
        }
    }
    Condition::and(parts)
}

pub fn main_condition(rule: &PlainRule, c: &Constraint, k: i32) -> Result<Condition> {
    layer_range(c, k)?;
    Ok(Condition::and(vec![remain(rule, c, k), ins(rule, c, k), wors(rule, c, k)]))
}

/// Rule equipped with the maintaining condition at layer `k`.
pub fn maintaining_ac_at_layer(rule: &Rule, c: &Constraint, k: i32) -> Result<Rule> {
    let m = main_condition(&rule.plain, c, k)?;
    Ok(Rule { name: rule.name.clone(), plain: rule.plain.clone(), ac: Condition::and(vec![rule.ac.clone(), m]) })
}

/// Rule equipped with a condition that is maintaining at every layer.
pub fn maintaining_ac(rule: &Rule, c: &Constraint) -> Rule {
    let n = c.nlvl() as i32;
    let mut parts = vec![rule.ac.clone()];
    let mut i = -1;
    while i < n - 2 {
        parts.push(wors(&rule.plain, c, i));
        i += 2;
    }
    parts.push(ins(&rule.plain, c, n - 1));
    Rule { name: rule.name.clone(), plain: rule.plain.clone(), ac: Condition::and(parts) }
}

fn check_increasing_layer(c: &Constraint, k: i32) -> Result<()> {
    layer_range(c, k)?;
    if k % 2 == 0 || k > c.nlvl() as i32 - 2 {
        return Err(Error::Invalid(format!("layer {k} has no existential layer above it to increase")));
    }
    Ok(())
}

/// Admissible intermediate graphs `C'` for an increasing condition at layer `k`.
pub fn increasing_targets(c: &Constraint, k: i32) -> Result<Vec<Graph>> {
    check_increasing_layer(c, k)?;
    let top = (k + 2) as usize;
    if top >= c.nlvl() {
        Ok(vec![c.graph(top).clone()])
    } else {
        Ok(c.ig(top))
    }
}

/// The per-overlap disjunction `nex ∧ rep` for one intermediate graph.
fn increasing_part(rule: &PlainRule, c: &Constraint, k: i32, cp: &Graph) -> Condition {
    let top = (k + 2) as usize;
    let ctop = c.graph(top);
    let last = top >= c.nlvl();
    let below = c.graph(top - 1);
    let fresh = ctop.minus(below);
    let del = rule.deleted();
    let incl = Morphism::identity(ctop);
    let mut disj = Vec::new();
    for o in glue(&rule.lhs, ctop, &Morphism::new(), false) {
        let nex = if last {
            Condition::exists(o.left.clone(), o.graph.clone(), Condition::True)
        } else {
            let inner = extended_overlaps(&o.graph, &o.right, cp, &incl)
                .into_iter()
                .map(|q| Condition::not(Condition::exists(q.left, q.graph, Condition::True)))
                .collect();
            Condition::exists(o.left.clone(), o.graph.clone(), Condition::and(inner))
        };
        let rep = if o.left.image_of(&del).intersects(&o.right.image_of(&fresh)) {
            Condition::True
        } else if last {
            Condition::False
        } else {
            repaired(rule, &o.graph, &o.left, &o.right, ctop, cp)
        };
        disj.push(Condition::and(vec![nex, rep]));
    }
    Condition::or(disj)
}

/// Every extension of the comatch to the shape of `P` after the step has `C'`.
fn repaired(rule: &PlainRule, p: &Graph, il: &Morphism, ic: &Morphism, ctop: &Graph, cp: &Graph) -> Condition {
    let Ok(t) = rule.apply(p, il) else { return Condition::False };
    let Some(ic2) = t.track(ic) else { return Condition::False };
    let incl = Morphism::identity(ctop);
    let witnesses = extended_overlaps(&t.h, &ic2, cp, &incl)
        .into_iter()
        .map(|q| Condition::exists(q.left, q.graph, Condition::True))
        .collect();
    let post = Condition::forall(t.comatch.clone(), t.h.clone(), Condition::or(witnesses));
    shift_over_rule(&post, rule)
}

/// Rule equipped with the increasing condition at layer `k` for intermediate graph `cp`.
pub fn increasing_ac_at_layer(rule: &Rule, c: &Constraint, k: i32, cp: &Graph) -> Result<Rule> {
    let targets = increasing_targets(c, k)?;
    if !targets.iter().any(|t| t == cp) {
        return Err(Error::Invalid("not an intermediate graph of the next existential layer".into()));
    }
    let main = main_condition(&rule.plain, c, k)?;
    let part = increasing_part(&rule.plain, c, k, cp);
    Ok(Rule { name: rule.name.clone(), plain: rule.plain.clone(), ac: Condition::and(vec![rule.ac.clone(), main, part]) })
}

/// Union over all admissible intermediate graphs.
pub fn union_increasing_ac(rule: &Rule, c: &Constraint, k: i32) -> Result<Rule> {
    let targets = increasing_targets(c, k)?;
    let main = main_condition(&rule.plain, c, k)?;
    let parts = targets.iter().map(|cp| increasing_part(&rule.plain, c, k, cp)).collect();
    Ok(Rule {
        name: rule.name.clone(),
        plain: rule.plain.clone(),
        ac: Condition::and(vec![rule.ac.clone(), main, Condition::or(parts)]),
    })
}

/// Classify a plain rule as basic deleting or inserting at layer `k`, with its increasing morphism.
pub fn classify_basic(rule: &PlainRule, c: &Constraint, k: i32) -> Result<Option<(BasicKind, Morphism)>> {
    check_increasing_layer(c, k)?;
    if !crate::consistency::basic_maintaining_at_layer(rule, c, k) {
        return Ok(None);
    }
    let top = (k + 2) as usize;
    let ctop = c.graph(top);
    let occ = crate::graph::monomorphisms(ctop, &rule.lhs);
    let del = rule.deleted();
    if let Some(p) = occ.iter().find(|p| p.image().intersects(&del)) {
        return Ok(Some((BasicKind::Deleting, p.clone())));
    }
    if k >= c.nlvl() as i32 - 2 {
        return Ok(None);
    }
    for cp in c.ig(top) {
        let d = Condition::exists_incl(ctop, &cp, Condition::True);
        for p in &occ {
            if !crate::condition::satisfies(&rule.lhs, p, &d) && crate::condition::satisfies(&rule.rhs, p, &d) {
                return Ok(Some((BasicKind::Inserting(cp), p.clone())));
            }
        }
    }
    Ok(None)
}

/// Application condition for a basic rule at layer `j` of the constraint, given its kind at layer `k`.
pub fn basic_ac(
    rule: &PlainRule,
    kind: &BasicKind,
    c: &Constraint,
    k: i32,
    anchor: &Morphism,
    j: i32,
) -> Result<Condition> {
    check_increasing_layer(c, k)?;
    let n = c.nlvl() as i32;
    if j != k {
        return Ok(Condition::False);
    }
    if k == n - 2 {
        return Ok(Condition::True);
    }
    let top = (k + 2) as usize;
    let ctop = c.graph(top);
    let cp = match kind {
        BasicKind::Inserting(cp) => cp.clone(),
        BasicKind::Deleting => c.graph(top + 1).clone(),
    };
    let incl = Morphism::identity(ctop);
    let parts = extended_overlaps(&rule.lhs, anchor, &cp, &incl)
        .into_iter()
        .map(|q| Condition::not(Condition::exists(q.left, q.graph, Condition::True)))
        .collect();
    Ok(Condition::and(parts))
}

/// A basic rule with its application condition: the occurrence of `C_{k+2}` under the
/// increasing morphism must not satisfy the next step yet.
pub fn basic_increasing_rule(rule: &Rule, c: &Constraint, k: i32) -> Result<Rule> {
    let (kind, anchor) = classify_basic(&rule.plain, c, k)?
        .ok_or_else(|| Error::Invalid("rule is not a basic increasing rule at this layer".into()))?;
    let ac = basic_ac(&rule.plain, &kind, c, k, &anchor, k)?;
    Ok(Rule { name: rule.name.clone(), plain: rule.plain.clone(), ac: Condition::and(vec![rule.ac.clone(), ac]) })
}

pub fn report(rule: Rule, layer: Option<i32>, lhs: &Graph, c: &Constraint) -> SynthesisReport {
    let overlaps = c.graphs.iter().skip(1).map(|g| glue(lhs, g, &Morphism::new(), true).len()).sum();
    let conjuncts = match &rule.ac {
        Condition::And(cs) => cs.len(),
        Condition::True => 0,
        _ => 1,
    };
    let size = rule.ac.size();
    SynthesisReport { rule, layer, stats: SynthesisStats { overlaps, conjuncts, size } }
}
