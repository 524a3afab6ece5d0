//! Consistency notions for transformations and rules.

use crate::condition::{satisfies, Condition, Constraint, Nv};
use crate::graph::{glue, monomorphisms, Graph, Morphism};
use crate::rewrite::{PlainRule, Rule, Transformation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Notion {
    Maintaining,
    Increasing,
    DirectMaintaining,
    DirectIncreasing,
    Sustaining,
    Improving,
    DirectSustaining,
    DirectImproving,
    Guaranteeing,
    Preserving,
}

impl Notion {
    pub const ALL: [Notion; 10] = [
        Notion::Maintaining,
        Notion::Increasing,
        Notion::DirectMaintaining,
        Notion::DirectIncreasing,
        Notion::Sustaining,
        Notion::Improving,
        Notion::DirectSustaining,
        Notion::DirectImproving,
        Notion::Guaranteeing,
        Notion::Preserving,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Notion::Maintaining => "maintaining",
            Notion::Increasing => "increasing",
            Notion::DirectMaintaining => "direct-maintaining",
            Notion::DirectIncreasing => "direct-increasing",
            Notion::Sustaining => "sustaining",
            Notion::Improving => "improving",
            Notion::DirectSustaining => "direct-sustaining",
            Notion::DirectImproving => "direct-improving",
            Notion::Guaranteeing => "guaranteeing",
            Notion::Preserving => "preserving",
        }
    }

    pub fn parse(s: &str) -> Option<Notion> {
        Notion::ALL.iter().copied().find(|n| n.name() == s)
    }
}

/// Verdicts of every notion for one transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub maintaining: bool,
    pub increasing: bool,
    pub direct_maintaining: bool,
    pub direct_increasing: bool,
    pub sustaining: bool,
    pub improving: bool,
    pub direct_sustaining: bool,
    pub direct_improving: bool,
    pub guaranteeing: bool,
    pub preserving: bool,
}

impl Classification {
    pub fn get(&self, n: Notion) -> bool {
        match n {
            Notion::Maintaining => self.maintaining,
            Notion::Increasing => self.increasing,
            Notion::DirectMaintaining => self.direct_maintaining,
            Notion::DirectIncreasing => self.direct_increasing,
            Notion::Sustaining => self.sustaining,
            Notion::Improving => self.improving,
            Notion::DirectSustaining => self.direct_sustaining,
            Notion::DirectImproving => self.direct_improving,
            Notion::Guaranteeing => self.guaranteeing,
            Notion::Preserving => self.preserving,
        }
    }
}

pub fn nv_vector(c: &Constraint, g: &Graph) -> Vec<Nv> {
    let k = c.kmax(g);
    (-1..c.nlvl() as i32).map(|j| c.nv_with_kmax(g, j, k)).collect()
}

pub fn is_maintaining(t: &Transformation, c: &Constraint) -> bool {
    let a = nv_vector(c, &t.g);
    let b = nv_vector(c, &t.h);
    a.iter().zip(&b).all(|(x, y)| y <= x)
}

pub fn is_increasing(t: &Transformation, c: &Constraint) -> bool {
    let k = c.kmax(&t.g);
    if k + 1 >= c.nlvl() as i32 {
        return false;
    }
    let kh = c.kmax(&t.h);
    is_maintaining(t, c) && c.nv_with_kmax(&t.h, k + 1, kh) < c.nv_with_kmax(&t.g, k + 1, k)
}

fn exists_c(c: &Constraint, lo: usize, cp: &Graph) -> Condition {
    Condition::exists_incl(c.graph(lo), cp, Condition::True)
}

/// The four formulas that forbid new violations at the first unsatisfied layer and below.
pub fn is_direct_maintaining(t: &Transformation, c: &Constraint) -> bool {
    if c.satisfied_by(&t.g) {
        return c.satisfied_by(&t.h);
    }
    let k = c.kmax(&t.g);
    let top = (k + 2) as usize;
    let n = c.nlvl();
    let ctop = c.graph(top);
    // no new violation by deletion
    if top < n {
        let igs = c.ig(top);
        for p in monomorphisms(ctop, &t.g) {
            let Some(tp) = t.track(&p) else { continue };
            for cp in &igs {
                let d = exists_c(c, top, cp);
                if satisfies(&t.g, &p, &d) && !satisfies(&t.h, &tp, &d) {
                    return false;
                }
            }
        }
    }
    // no new violation by insertion
    let d = c.first_step(top);
    for p in monomorphisms(ctop, &t.h) {
        if !t.has_preimage(&p) && !satisfies(&t.h, &p, &d) {
            return false;
        }
    }
    // universally bound graphs below the first unsatisfied layer gain no occurrences
    for i in (1..=k.max(0) as usize).filter(|i| Constraint::is_universal(*i)) {
        let prev = c.graph(i - 1);
        for p in monomorphisms(c.graph(i), &t.h) {
            if t.has_preimage(&p.restrict(prev)) && !t.has_preimage(&p) {
                return false;
            }
        }
    }
    // existentially bound graphs up to the first unsatisfied layer lose no occurrences
    for i in (2..=((k + 1).max(0) as usize).min(n)).filter(|i| Constraint::is_existential(*i)) {
        let prev = c.graph(i - 1);
        for p in monomorphisms(c.graph(i), &t.g) {
            if t.track(&p.restrict(prev)).is_some() && t.track(&p).is_none() {
                return false;
            }
        }
    }
    true
}

pub fn is_direct_increasing(t: &Transformation, c: &Constraint) -> bool {
    if c.satisfied_by(&t.g) || !is_direct_maintaining(t, c) {
        return false;
    }
    let k = c.kmax(&t.g);
    let top = (k + 2) as usize;
    let occ = monomorphisms(c.graph(top), &t.g);
    if top >= c.nlvl() {
        return occ.iter().any(|p| t.track(p).is_none());
    }
    let igs = c.ig(top);
    occ.iter().any(|p| {
        let tp = t.track(p);
        igs.iter().any(|cp| {
            let d = exists_c(c, top, cp);
            !satisfies(&t.g, p, &d) && tp.as_ref().is_none_or(|tp| satisfies(&t.h, tp, &d))
        })
    })
}

/// Existential constraints are stored with an empty first graph.
fn is_existential_constraint(c: &Constraint) -> bool {
    c.nlvl() >= 2 && c.graph(1).is_empty()
}

fn violations_c1(c: &Constraint, g: &Graph) -> usize {
    let d = c.scond(1);
    monomorphisms(c.graph(1), g).iter().filter(|p| !satisfies(g, p, &d)).count()
}

pub fn is_sustaining(t: &Transformation, c: &Constraint) -> bool {
    if c.nlvl() == 0 || is_existential_constraint(c) {
        return is_preserving(t, c);
    }
    violations_c1(c, &t.g) >= violations_c1(c, &t.h)
}

pub fn is_improving(t: &Transformation, c: &Constraint) -> bool {
    if c.nlvl() == 0 || is_existential_constraint(c) {
        return is_guaranteeing(t, c);
    }
    violations_c1(c, &t.g) > violations_c1(c, &t.h)
}

pub fn is_direct_sustaining(t: &Transformation, c: &Constraint) -> bool {
    if c.nlvl() == 0 || is_existential_constraint(c) {
        return is_preserving(t, c);
    }
    let d = c.scond(1);
    let c1 = c.graph(1);
    for p in monomorphisms(c1, &t.g) {
        if let Some(tp) = t.track(&p) {
            if satisfies(&t.g, &p, &d) && !satisfies(&t.h, &tp, &d) {
                return false;
            }
        }
    }
    monomorphisms(c1, &t.h).iter().all(|p| t.has_preimage(p) || satisfies(&t.h, p, &d))
}

pub fn is_direct_improving(t: &Transformation, c: &Constraint) -> bool {
    if c.nlvl() == 0 || is_existential_constraint(c) {
        return is_guaranteeing(t, c);
    }
    if !is_direct_sustaining(t, c) {
        return false;
    }
    let d = c.scond(1);
    monomorphisms(c.graph(1), &t.g).iter().any(|p| {
        !satisfies(&t.g, p, &d) && t.track(p).is_none_or(|tp| satisfies(&t.h, &tp, &d))
    })
}

pub fn is_guaranteeing(t: &Transformation, c: &Constraint) -> bool {
    c.satisfied_by(&t.h)
}

pub fn is_preserving(t: &Transformation, c: &Constraint) -> bool {
    !c.satisfied_by(&t.g) || c.satisfied_by(&t.h)
}

pub fn classify_transformation(t: &Transformation, c: &Constraint) -> Classification {
    let maintaining = is_maintaining(t, c);
    let direct_maintaining = is_direct_maintaining(t, c);
    Classification {
        maintaining,
        increasing: maintaining && is_increasing(t, c),
        direct_maintaining,
        direct_increasing: direct_maintaining && is_direct_increasing(t, c),
        sustaining: is_sustaining(t, c),
        improving: is_improving(t, c),
        direct_sustaining: is_direct_sustaining(t, c),
        direct_improving: is_direct_improving(t, c),
        guaranteeing: is_guaranteeing(t, c),
        preserving: is_preserving(t, c),
    }
}

pub fn holds(n: Notion, t: &Transformation, c: &Constraint) -> bool {
    match n {
        Notion::Maintaining => is_maintaining(t, c),
        Notion::Increasing => is_increasing(t, c),
        Notion::DirectMaintaining => is_direct_maintaining(t, c),
        Notion::DirectIncreasing => is_direct_increasing(t, c),
        Notion::Sustaining => is_sustaining(t, c),
        Notion::Improving => is_improving(t, c),
        Notion::DirectSustaining => is_direct_sustaining(t, c),
        Notion::DirectImproving => is_direct_improving(t, c),
        Notion::Guaranteeing => is_guaranteeing(t, c),
        Notion::Preserving => is_preserving(t, c),
    }
}

/// Overlaps of `side` and `cj` where `side_part` meets `cj_part` and `rule` applies at the side.
fn blocked_everywhere(rule: &PlainRule, side: &Graph, side_part: &crate::graph::Elements, cj: &Graph, cj_part: &crate::graph::Elements) -> bool {
    for o in glue(side, cj, &Morphism::new(), true) {
        if o.left.image_of(side_part).intersects(&o.right.image_of(cj_part)) && rule.is_applicable(&o.graph, &o.left) {
            return false;
        }
    }
    true
}

fn clause_existential(rule: &PlainRule, c: &Constraint, j: usize) -> bool {
    let cj = c.graph(j);
    let part = cj.minus(c.graph(j - 1));
    blocked_everywhere(rule, &rule.lhs, &rule.deleted(), cj, &part)
}

fn clause_universal(rule: &PlainRule, c: &Constraint, j: usize) -> bool {
    let cj = c.graph(j);
    let inv = rule.inverse();
    blocked_everywhere(&inv, &rule.rhs, &rule.created(), cj, &cj.elements())
}

/// Static sufficient check that every application at a graph with `kmax = k` is direct maintaining.
pub fn basic_maintaining_at_layer(rule: &PlainRule, c: &Constraint, k: i32) -> bool {
    let n = c.nlvl();
    for j in (2..=((k + 1).max(0) as usize).min(n)).filter(|j| Constraint::is_existential(*j)) {
        if !clause_existential(rule, c, j) {
            return false;
        }
    }
    for j in (1..=((k + 2).max(0) as usize).min(n)).filter(|j| Constraint::is_universal(*j)) {
        if !clause_universal(rule, c, j) {
            return false;
        }
    }
    if k + 3 <= n as i32 {
        let j = (k + 3) as usize;
        let cj = c.graph(j);
        let part = cj.minus(c.graph(j - 1));
        let del = rule.deleted();
        if glue(&rule.lhs, cj, &Morphism::new(), true)
            .iter()
            .any(|o| o.left.image_of(&del).intersects(&o.right.image_of(&part)))
        {
            return false;
        }
    }
    true
}

/// No application deletes an occurrence of an existentially bound graph or creates one of a
/// universally bound graph.
pub fn is_basic_maintaining(rule: &PlainRule, c: &Constraint) -> bool {
    let n = c.nlvl();
    (2..=n).filter(|j| Constraint::is_existential(*j)).all(|j| clause_existential(rule, c, j))
        && (1..=n).filter(|j| Constraint::is_universal(*j)).all(|j| clause_universal(rule, c, j))
}

/// Outcome of a rule-level check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleVerdict {
    /// Holds for every host, by a static argument.
    Proved(String),
    /// No counterexample among the enumerated hosts.
    Holds { checked: usize },
    Refuted(Box<Transformation>),
}

impl RuleVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, RuleVerdict::Refuted(_))
    }
}

/// Check `notion` for every application of `rule` at hosts with `kmax = k`, or at every host when `k` is `None`.
pub fn check_rule(rule: &Rule, c: &Constraint, notion: Notion, k: Option<i32>, hosts: &[Graph]) -> RuleVerdict {
    if rule.ac.is_false() {
        return RuleVerdict::Proved("application condition is unsatisfiable".into());
    }
    if rule.ac.is_true() && matches!(notion, Notion::Maintaining | Notion::DirectMaintaining) {
        let ok = match k {
            Some(k) => basic_maintaining_at_layer(&rule.plain, c, k),
            None => (-1..c.nlvl() as i32).all(|k| basic_maintaining_at_layer(&rule.plain, c, k)),
        };
        if ok {
            return RuleVerdict::Proved("no application creates or removes a relevant occurrence".into());
        }
    }
    let mut checked = 0;
    for g in hosts {
        if let Some(k) = k {
            if c.kmax(g) != k {
                continue;
            }
        }
        for t in rule.transformations(g) {
            checked += 1;
            if !holds(notion, &t, c) {
                return RuleVerdict::Refuted(Box::new(t));
            }
        }
    }
    RuleVerdict::Holds { checked }
}
