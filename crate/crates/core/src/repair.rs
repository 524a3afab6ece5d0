//! Repairing sequences, repairing sets and the repair algorithms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::condition::{satisfies, Constraint};
use crate::conflicts::{causes_conflict, conflict_graph, conflict_graph_of_set, forbid, is_circular_conflict_free, topological_ordering};
use crate::consistency::{is_basic_maintaining, nv_vector};
use crate::error::{Error, Result};
use crate::graph::{extensions, monomorphisms, Graph, Morphism};
use crate::rewrite::{concurrent_rule, track_sequence, PlainRule, Rule, Transformation};

/// A chain of transformations repairing one graph of a constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairingSequence {
    pub target: usize,
    pub universal: bool,
    pub rules: Vec<String>,
    pub steps: Vec<Transformation>,
    pub concurrent: PlainRule,
}

impl RepairingSequence {
    pub fn from_steps(target: usize, rules: Vec<String>, steps: Vec<Transformation>) -> Result<Self> {
        let concurrent = concurrent_rule(&steps)?;
        Ok(RepairingSequence { target, universal: Constraint::is_universal(target), rules, steps, concurrent })
    }

    pub fn start(&self) -> &Graph {
        &self.concurrent.lhs
    }

    pub fn end(&self) -> &Graph {
        &self.concurrent.rhs
    }

    pub fn describe(&self) -> String {
        let kind = if self.universal { "universal" } else { "existential" };
        format!("{kind} C{} via [{}]", self.target, self.rules.join(", "))
    }
}

/// One step of a sequence given by rule name and an optional match into the current graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepSpec {
    pub rule: String,
    pub matching: Option<Morphism>,
}

/// First graph of a repairing sequence for `C_k`.
pub fn sequence_start(c: &Constraint, k: usize) -> Result<&Graph> {
    if k == 0 || k > c.nlvl() {
        return Err(Error::LayerOutOfRange { k: k as i32, nlvl: c.nlvl() });
    }
    Ok(if Constraint::is_universal(k) { c.graph(k) } else { c.graph(k - 1) })
}

/// Build a sequence by applying the named rules from the start graph.
pub fn build_sequence(c: &Constraint, k: usize, rules: &[Rule], steps: &[StepSpec]) -> Result<RepairingSequence> {
    let mut cur = sequence_start(c, k)?.clone();
    let mut out = Vec::new();
    let mut names = Vec::new();
    for s in steps {
        let rule = rules
            .iter()
            .find(|r| r.name == s.rule)
            .ok_or_else(|| Error::Invalid(format!("unknown rule `{}`", s.rule)))?;
        let m = match &s.matching {
            Some(m) => m.clone(),
            None => rule
                .plain
                .applicable_matches(&cur)
                .into_iter()
                .next()
                .ok_or_else(|| Error::Invalid(format!("rule `{}` is not applicable in the sequence", s.rule)))?,
        };
        let t = rule.plain.apply(&cur, &m)?;
        cur = t.h.clone();
        out.push(t);
        names.push(rule.name.clone());
    }
    RepairingSequence::from_steps(k, names, out)
}

/// Outcome of a validation with the reasons for rejection.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Validation {
    pub reasons: Vec<String>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.reasons.is_empty()
    }

    fn fail(&mut self, r: impl Into<String>) {
        self.reasons.push(r.into());
    }
}

fn is_chained(seq: &RepairingSequence) -> bool {
    seq.steps.windows(2).all(|w| w[0].h == w[1].g)
}

/// Does the sequence end in a copy of `C_k` that agrees with the track on `C_{k-1}`?
fn lands_on_target(seq: &RepairingSequence, c: &Constraint, k: usize) -> bool {
    let ck = c.graph(k);
    let end = seq.end();
    end.size() == ck.size()
        && !extensions(end, ck, &Morphism::identity(c.graph(k - 1))).is_empty()
}

pub fn validate_repairing_sequence(seq: &RepairingSequence, c: &Constraint) -> Result<Validation> {
    let k = seq.target;
    let start = sequence_start(c, k)?;
    let mut v = Validation::default();
    if seq.steps.is_empty() {
        v.fail("the sequence has no steps");
        return Ok(v);
    }
    if !is_chained(seq) {
        return Err(Error::Invalid("steps are not chained".into()));
    }
    if seq.steps[0].g != *start {
        v.fail(format!("the sequence does not start at C{}", if seq.universal { k } else { k - 1 }));
        return Ok(v);
    }
    if !c.satisfied_up_to(seq.end(), k as i32) {
        v.fail(format!("the final graph does not satisfy the constraint up to layer {k}"));
    }
    if seq.universal {
        let kept = seq.steps.iter().all(|t| start.node_ids().all(|n| t.d.has_node(n)));
        if !kept {
            v.fail("a node of the universally bound graph is deleted");
        }
        let shortcut = c.graph(k - 1).is_subgraph_of(&seq.concurrent.interface)
            && seq.concurrent.rhs == seq.concurrent.interface;
        if !shortcut {
            for j in (1..=c.nlvl()).filter(|j| Constraint::is_universal(*j)) {
                if !is_basic_maintaining(&seq.concurrent, &forbid(c.graph(j))) {
                    v.fail(format!("the concurrent rule may create an occurrence of C{j}"));
                }
            }
        }
    } else {
        if track_sequence(&seq.steps, &Morphism::identity(start)).is_none() {
            v.fail(format!("the track of C{} is not total", k - 1));
        }
        if !lands_on_target(seq, c, k) {
            for j in (1..=c.nlvl()).filter(|j| Constraint::is_universal(*j)) {
                if !causes_conflict(c, k, j)? && !is_basic_maintaining(&seq.concurrent, &forbid(c.graph(j))) {
                    v.fail(format!("the concurrent rule may create an occurrence of C{j}"));
                }
            }
        }
    }
    Ok(v)
}

/// Rules with the registered repairing sequences of one constraint, keyed by graph index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepairingSet {
    pub rules: Vec<Rule>,
    pub sequences: BTreeMap<usize, RepairingSequence>,
}

impl RepairingSet {
    pub fn concurrent_rules(&self) -> Vec<PlainRule> {
        self.sequences.values().map(|s| s.concurrent.clone()).collect()
    }
}

/// Graph indices that need a repairing sequence.
pub fn required_targets(c: &Constraint) -> Vec<usize> {
    let n = c.nlvl();
    let mut out: Vec<usize> = (2..=n).filter(|k| Constraint::is_existential(*k)).collect();
    if n % 2 == 1 {
        out.push(n);
    }
    out
}

pub fn validate_repairing_set(set: &RepairingSet, c: &Constraint) -> Result<Validation> {
    let mut v = Validation::default();
    let n = c.nlvl();
    if n % 2 == 1 && c.graph(n).edge_count() == 0 {
        v.fail(format!("no repairing set exists: C{n} is universally bound and has no edges"));
    }
    if !is_circular_conflict_free(c) {
        v.fail("the constraint has a circular conflict");
    }
    for k in required_targets(c) {
        if !set.sequences.contains_key(&k) {
            v.fail(format!("missing repairing sequence for C{k}"));
        }
    }
    for (k, seq) in &set.sequences {
        if seq.target != *k {
            v.fail(format!("sequence registered for C{k} targets C{}", seq.target));
            continue;
        }
        for r in validate_repairing_sequence(seq, c)?.reasons {
            v.fail(format!("C{k}: {r}"));
        }
    }
    Ok(v)
}

/// Validate one rule set against every constraint of a set.
pub fn validate_for_set(sets: &[RepairingSet], cs: &[Constraint]) -> Result<Validation> {
    let mut v = Validation::default();
    if sets.len() != cs.len() {
        v.fail("one repairing set per constraint is required");
        return Ok(v);
    }
    for (i, (s, c)) in sets.iter().zip(cs).enumerate() {
        for r in validate_repairing_set(s, c)?.reasons {
            v.fail(format!("constraint {i}: {r}"));
        }
    }
    Ok(v)
}

/// Breadth-first search for a valid sequence of at most `max_len` rule applications.
pub fn discover_sequence(c: &Constraint, k: usize, rules: &[Rule], max_len: usize) -> Result<Option<RepairingSequence>> {
    const STATE_LIMIT: usize = 4096;
    let start = sequence_start(c, k)?.clone();
    let mut queue: VecDeque<(Graph, Vec<Transformation>, Vec<String>)> = VecDeque::new();
    queue.push_back((start, Vec::new(), Vec::new()));
    let mut seen = 0;
    while let Some((g, steps, names)) = queue.pop_front() {
        if steps.len() >= max_len {
            continue;
        }
        for rule in rules {
            for m in rule.plain.applicable_matches(&g) {
                let t = rule.plain.apply(&g, &m)?;
                let mut s2 = steps.clone();
                s2.push(t.clone());
                let mut n2 = names.clone();
                n2.push(rule.name.clone());
                let seq = RepairingSequence::from_steps(k, n2.clone(), s2.clone())?;
                if validate_repairing_sequence(&seq, c)?.is_valid() {
                    return Ok(Some(seq));
                }
                seen += 1;
                if seen > STATE_LIMIT {
                    return Ok(None);
                }
                queue.push_back((t.h, s2, n2));
            }
        }
    }
    Ok(None)
}

/// Register a discovered sequence for every required target without one.
pub fn complete_sequences(set: &mut RepairingSet, c: &Constraint, max_len: usize) -> Result<()> {
    for k in required_targets(c) {
        if set.sequences.contains_key(&k) {
            continue;
        }
        if let Some(seq) = discover_sequence(c, k, &set.rules, max_len)? {
            set.sequences.insert(k, seq);
        }
    }
    Ok(())
}

fn proper_pairs(family: &[Graph]) -> Vec<(Graph, Graph)> {
    let mut out = Vec::new();
    for a in family {
        for b in family {
            if a != b && a.is_subgraph_of(b) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Apply `lo ⊇ lo ⊆ lo + x` one element at a time along `hi ∖ lo`, nodes first.
fn insertion_steps(
    lo: &Graph,
    hi: &Graph,
    host: &Graph,
    emb: &Morphism,
    rules: &[Rule],
    steps: &mut Vec<Transformation>,
    names: &mut Vec<String>,
) -> Result<(Graph, Morphism)> {
    let mut x = lo.clone();
    let mut cur = host.clone();
    let mut emb = emb.clone();
    let fresh = hi.minus(lo);
    let mut order: Vec<Graph> = Vec::new();
    for n in &fresh.nodes {
        x.add_node(*n, hi.node_type(*n).expect("node of hi"));
        order.push(x.clone());
    }
    for e in &fresh.edges {
        let d = hi.edge(*e).expect("edge of hi");
        x.add_edge(*e, d.src, d.tar, d.ty);
        order.push(x.clone());
    }
    let mut prev = lo.clone();
    for next in order {
        let plain = PlainRule { lhs: prev.clone(), interface: prev.clone(), rhs: next.clone() };
        let name = rules
            .iter()
            .find(|r| r.plain == plain)
            .map(|r| r.name.clone())
            .ok_or_else(|| Error::Internal("missing single-element insertion rule".into()))?;
        let t = plain.apply(&cur, &emb)?;
        emb = t.comatch.clone();
        cur = t.h.clone();
        steps.push(t);
        names.push(name);
        prev = next;
    }
    Ok((cur, emb))
}

/// Rules and sequences built from the graphs of a circular conflict free constraint.
pub fn construct_repairing_set(c: &Constraint) -> Result<RepairingSet> {
    let n = c.nlvl();
    if n == 0 {
        return Err(Error::Invalid("the constraint is trivially satisfied".into()));
    }
    if n == 1 && c.graph(1).edge_count() == 0 {
        return Err(Error::Invalid("no repairing set exists: C1 is universally bound and has no edges".into()));
    }
    reject_circular(c)?;
    let mut rules: Vec<Rule> = Vec::new();
    let mut push = |plain: PlainRule, prefix: &str, k: usize| {
        if !rules.iter().any(|r| r.plain == plain) {
            let name = format!("{prefix}{k}_{}", rules.len());
            rules.push(Rule::new(&name, plain));
        }
    };
    for k in 1..=n {
        let ig = c.ig(k - 1);
        if Constraint::is_universal(k) {
            for (a, b) in proper_pairs(&ig) {
                push(PlainRule { lhs: b, interface: a.clone(), rhs: a }, "del", k);
            }
            let lo = c.graph(k - 1);
            let hi = c.graph(k);
            if lo.node_count() == hi.node_count() {
                push(PlainRule { lhs: hi.clone(), interface: lo.clone(), rhs: lo.clone() }, "del", k);
            }
        } else {
            let mut family = ig;
            family.push(c.graph(k - 1).clone());
            for (a, b) in proper_pairs(&family) {
                push(PlainRule { lhs: a.clone(), interface: a, rhs: b }, "ins", k);
            }
        }
    }
    let mut set = RepairingSet { rules, sequences: BTreeMap::new() };
    for k in (2..=n).filter(|k| Constraint::is_existential(*k)) {
        if let Some(seq) = constructed_existential(c, k, &set.rules)? {
            set.sequences.insert(k, seq);
        }
    }
    for k in (1..=n).filter(|k| Constraint::is_universal(*k)) {
        if let Some(seq) = constructed_universal(c, k, &set.rules)? {
            set.sequences.insert(k, seq);
        }
    }
    Ok(set)
}

fn constructed_existential(c: &Constraint, k: usize, rules: &[Rule]) -> Result<Option<RepairingSequence>> {
    const EXTENSIONS: usize = 16;
    let start = c.graph(k - 1).clone();
    let mut steps = Vec::new();
    let mut names = Vec::new();
    let (mut cur, _) =
        insertion_steps(&start, c.graph(k), &start, &Morphism::identity(&start), rules, &mut steps, &mut names)?;
    for _ in 0..EXTENSIONS {
        if c.satisfied_up_to(&cur, k as i32) {
            break;
        }
        let mut fixed = false;
        for j in (1..k).filter(|j| Constraint::is_universal(*j)) {
            let step = c.first_step(j);
            let bad = monomorphisms(c.graph(j), &cur).into_iter().find(|q| !satisfies(&cur, q, &step));
            if let Some(q) = bad {
                cur = match reuse_step(c, j, &cur, &q, rules)? {
                    Some((t, name)) => {
                        let h = t.h.clone();
                        steps.push(t);
                        names.push(name);
                        h
                    }
                    None => insertion_steps(c.graph(j), c.graph(j + 1), &cur, &q, rules, &mut steps, &mut names)?.0,
                };
                fixed = true;
                break;
            }
        }
        if !fixed {
            break;
        }
    }
    let seq = RepairingSequence::from_steps(k, names, steps)?;
    Ok(validate_repairing_sequence(&seq, c)?.is_valid().then_some(seq))
}

/// Insert the missing edges of `C_{j+1}` at `q`, mapping its fresh nodes onto existing ones.
fn reuse_step(c: &Constraint, j: usize, cur: &Graph, q: &Morphism, rules: &[Rule]) -> Result<Option<(Transformation, String)>> {
    let hi = c.graph(j + 1);
    let mut nodes = c.graph(j).clone();
    for n in hi.minus(c.graph(j)).nodes {
        nodes.add_node(n, hi.node_type(n).expect("node of hi"));
    }
    if nodes.size() == hi.size() || nodes.node_count() == c.graph(j).node_count() {
        return Ok(None);
    }
    let plain = PlainRule { lhs: nodes.clone(), interface: nodes.clone(), rhs: hi.clone() };
    let Some(rule) = rules.iter().find(|r| r.plain == plain) else { return Ok(None) };
    for m in extensions(&nodes, cur, q) {
        let t = plain.apply(cur, &m)?;
        if satisfies(&t.h, q, &c.first_step(j)) {
            return Ok(Some((t, rule.name.clone())));
        }
    }
    Ok(None)
}

fn constructed_universal(c: &Constraint, k: usize, rules: &[Rule]) -> Result<Option<RepairingSequence>> {
    let hi = c.graph(k);
    for e in hi.minus(c.graph(k - 1)).edges {
        let mut lo = hi.clone();
        lo.remove_edge(e);
        let plain = PlainRule { lhs: hi.clone(), interface: lo.clone(), rhs: lo };
        let Some(rule) = rules.iter().find(|r| r.plain == plain) else { continue };
        let t = plain.apply(hi, &Morphism::identity(hi))?;
        let seq = RepairingSequence::from_steps(k, vec![rule.name.clone()], vec![t])?;
        if validate_repairing_sequence(&seq, c)?.is_valid() {
            return Ok(Some(seq));
        }
    }
    Ok(None)
}

/// Apply the concurrent rule of a sequence at an occurrence of its start graph.
pub fn apply_sequence_at(seq: &RepairingSequence, p: &Morphism, g: &Graph) -> Result<Transformation> {
    seq.concurrent
        .apply(g, p)
        .map_err(|_| Error::Internal(format!("{} is not applicable at the occurrence", seq.describe())))
}

/// Apply the steps one by one, returning the resulting transformations.
pub fn apply_stepwise(seq: &RepairingSequence, p: &Morphism, g: &Graph) -> Result<Vec<Transformation>> {
    let mut cur = g.clone();
    let mut emb = p.clone();
    let mut out = Vec::new();
    for step in &seq.steps {
        let t = step.as_rule().apply(&cur, &emb)?;
        emb = t.comatch.clone();
        cur = t.h.clone();
        out.push(t);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RepairOptions {
    pub seed: u64,
    pub max_iterations: Option<usize>,
}

/// Cap on sequence applications for one run of the single-constraint repair.
pub fn iteration_bound(g: &Graph, c: &Constraint) -> usize {
    64 * (g.size() + 1) * (c.nlvl() + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub constraint: usize,
    pub iteration: usize,
    pub phase: &'static str,
    pub kmax: i32,
    pub layer: usize,
    pub occurrence: BTreeMap<u32, u32>,
    pub branch: u8,
    pub sequence: String,
    pub nv: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepairTrace {
    pub entries: Vec<TraceEntry>,
}

impl RepairTrace {
    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(&serde_json::to_string(e).expect("trace entry serializes"));
            s.push('\n');
        }
        s
    }
}

struct Run<'a> {
    c: &'a Constraint,
    set: &'a RepairingSet,
    index: usize,
    rng: &'a mut ChaCha8Rng,
    cap: usize,
    applied: usize,
    guard: &'a dyn Fn(&Graph) -> Result<()>,
    trace: &'a mut RepairTrace,
}

type Occurrence = (usize, Morphism);

impl Run<'_> {
    /// Apply the repairing sequence for `C_j` (branch 0) or `C_{j+1}` (branch 1) at `p`.
    fn step(&mut self, g: &Graph, j: usize, p: &Morphism, phase: &'static str, kmax: i32, iteration: usize) -> Result<Transformation> {
        let r: u8 = self.rng.gen_range(0..2);
        let uni = self.set.sequences.get(&j).filter(|_| Constraint::is_universal(j));
        let ex = self.set.sequences.get(&(j + 1)).filter(|_| j < self.c.nlvl());
        let (seq, branch) = match (r, uni, ex) {
            (0, Some(u), _) => (u, 0),
            (_, _, Some(e)) => (e, 1),
            (_, Some(u), None) => (u, 0),
            _ => return Err(Error::MissingSequence(j)),
        };
        let t = apply_sequence_at(seq, p, g)?;
        self.applied += 1;
        if self.applied > self.cap {
            return Err(Error::IterationLimit(self.cap));
        }
        (self.guard)(&t.h)?;
        self.trace.entries.push(TraceEntry {
            constraint: self.index,
            iteration,
            phase,
            kmax,
            layer: j,
            occurrence: p.nodes.clone(),
            branch,
            sequence: seq.describe(),
            nv: nv_vector(self.c, &t.h).iter().map(|v| v.to_string()).collect(),
        });
        Ok(t)
    }

    /// Occurrences of universally bound graphs up to `kmax` that were inserted or lost their witness.
    fn damaged(&self, t: &Transformation, kmax: i32) -> Result<Vec<Occurrence>> {
        let mut out = Vec::new();
        for j in (1..(kmax + 2).max(0) as usize).filter(|j| Constraint::is_universal(*j)) {
            let step = self.c.first_step(j);
            let candidates: BTreeSet<Morphism> =
                self.c.potentially_increasing(&t.h, j as i32 - 2)?.into_iter().collect();
            for q in monomorphisms(self.c.graph(j), &t.h) {
                let fresh = !t.has_preimage(&q);
                let lost = !fresh && satisfies(&t.g, &q, &step) && !satisfies(&t.h, &q, &step);
                if (fresh || lost) && candidates.contains(&q) {
                    out.push((j, q));
                }
            }
        }
        Ok(out)
    }

    fn still_violating(&self, h: &Graph, m: Vec<Occurrence>) -> Result<Vec<Occurrence>> {
        let mut cache: BTreeMap<usize, BTreeSet<Morphism>> = BTreeMap::new();
        let mut out = Vec::new();
        for (j, q) in m {
            if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(j) {
                e.insert(self.c.potentially_increasing(h, j as i32 - 2)?.into_iter().collect());
            }
            if cache[&j].contains(&q) {
                out.push((j, q));
            }
        }
        Ok(out)
    }

    fn repair(&mut self, g: &Graph) -> Result<Graph> {
        let mut g = g.clone();
        let mut iteration = 0;
        while !self.c.satisfied_by(&g) {
            iteration += 1;
            let kmax = self.c.kmax(&g);
            let top = (kmax + 2) as usize;
            let p_set = self.c.potentially_increasing(&g, kmax)?;
            if p_set.is_empty() {
                return Err(Error::Internal(format!("no potentially increasing occurrence at layer {kmax}")));
            }
            let p = p_set[self.rng.gen_range(0..p_set.len())].clone();
            let t = self.step(&g, top, &p, "outer", kmax, iteration)?;
            let mut m = self.damaged(&t, kmax)?;
            let mut h = t.h;
            while !self.c.satisfied_up_to(&h, kmax) {
                m = self.still_violating(&h, m)?;
                let mut phase = "inner";
                if m.is_empty() {
                    let k2 = self.c.kmax(&h);
                    m = self.c.potentially_increasing(&h, k2)?.into_iter().map(|q| ((k2 + 2) as usize, q)).collect();
                    phase = "refill";
                }
                if m.is_empty() {
                    return Err(Error::Internal("no occurrence left to restore the satisfied layer".into()));
                }
                let (j, q) = m.remove(self.rng.gen_range(0..m.len()));
                let t2 = self.step(&h, j, &q, phase, kmax, iteration)?;
                let mut next: BTreeSet<Occurrence> = self.damaged(&t2, kmax)?.into_iter().collect();
                next.extend(m.into_iter().filter_map(|(j, q)| t2.track(&q).map(|q| (j, q))));
                m = next.into_iter().collect();
                h = t2.h;
            }
            g = h;
        }
        Ok(g)
    }
}

/// Fails with the conflict cycle when `c` has a circular conflict.
fn reject_circular(c: &Constraint) -> Result<()> {
    match conflict_graph(c).find_cycle() {
        Some(cyc) => Err(Error::Cyclic(cyc.iter().map(|n| n.to_string()).collect())),
        None => Ok(()),
    }
}

fn check_inputs(set: &RepairingSet, c: &Constraint) -> Result<()> {
    reject_circular(c)?;
    let v = validate_repairing_set(set, c)?;
    if !v.is_valid() {
        return Err(Error::Invalid(v.reasons.join("; ")));
    }
    Ok(())
}

/// Repair `g` for one circular conflict free constraint.
pub fn repair_one(g: &Graph, c: &Constraint, set: &RepairingSet, opts: RepairOptions) -> Result<(Graph, RepairTrace)> {
    check_inputs(set, c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut trace = RepairTrace::default();
    let guard = |_: &Graph| Ok(());
    let mut run = Run {
        c,
        set,
        index: 0,
        rng: &mut rng,
        cap: opts.max_iterations.unwrap_or_else(|| iteration_bound(g, c)),
        applied: 0,
        guard: &guard,
        trace: &mut trace,
    };
    let h = run.repair(g)?;
    Ok((h, trace))
}

/// Order in which a set of constraints is repaired.
pub fn repair_order(cs: &[Constraint], sets: &[RepairingSet]) -> Result<Vec<usize>> {
    let concurrent: Vec<Vec<PlainRule>> = sets.iter().map(|s| s.concurrent_rules()).collect();
    topological_ordering(&conflict_graph_of_set(cs, &concurrent))
}

/// Repair `g` for a set of constraints, one after another in topological order.
///
/// After every sequence application the constraints repaired earlier must still hold.
pub fn repair_set(g: &Graph, cs: &[Constraint], sets: &[RepairingSet], opts: RepairOptions) -> Result<(Graph, RepairTrace)> {
    let v = validate_for_set(sets, cs)?;
    if !v.is_valid() {
        return Err(Error::Invalid(v.reasons.join("; ")));
    }
    let order = repair_order(cs, sets)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut trace = RepairTrace::default();
    let mut g = g.clone();
    for (pos, &i) in order.iter().enumerate() {
        let done: Vec<usize> = order[..pos].to_vec();
        let guard = |h: &Graph| -> Result<()> {
            match done.iter().find(|d| !cs[**d].satisfied_by(h)) {
                Some(d) => Err(Error::Internal(format!("constraint {d} no longer holds while repairing constraint {i}"))),
                None => Ok(()),
            }
        };
        let mut run = Run {
            c: &cs[i],
            set: &sets[i],
            index: i,
            rng: &mut rng,
            cap: opts.max_iterations.unwrap_or_else(|| iteration_bound(&g, &cs[i])),
            applied: 0,
            guard: &guard,
            trace: &mut trace,
        };
        g = run.repair(&g)?;
    }
    Ok((g, trace))
}
