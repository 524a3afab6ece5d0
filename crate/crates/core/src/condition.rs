//! Nested graph conditions, constraints in alternating normal form, and layered satisfaction.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::graph::{extended_overlaps, for_each_extension, glue, intermediate_graphs, Graph, Morphism};

/// A quantified subcondition: an injective morphism from the enclosing root into `target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quantified {
    pub morphism: Morphism,
    pub target: Graph,
    pub sub: Condition,
}

/// A nested condition over an implicit root graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    True,
    False,
    Exists(Box<Quantified>),
    Forall(Box<Quantified>),
    Not(Box<Condition>),
    And(Vec<Condition>),
    Or(Vec<Condition>),
}

impl Condition {
    pub fn exists(morphism: Morphism, target: Graph, sub: Condition) -> Self {
        Condition::Exists(Box::new(Quantified { morphism, target, sub }))
    }

    pub fn forall(morphism: Morphism, target: Graph, sub: Condition) -> Self {
        Condition::Forall(Box::new(Quantified { morphism, target, sub }))
    }

    /// `∃(root ↪ target, sub)` where `root ⊆ target` by ids.
    pub fn exists_incl(root: &Graph, target: &Graph, sub: Condition) -> Self {
        Condition::exists(Morphism::identity(root), target.clone(), sub)
    }

    pub fn forall_incl(root: &Graph, target: &Graph, sub: Condition) -> Self {
        Condition::forall(Morphism::identity(root), target.clone(), sub)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Condition) -> Self {
        match c {
            Condition::True => Condition::False,
            Condition::False => Condition::True,
            Condition::Not(inner) => *inner,
            c => Condition::Not(Box::new(c)),
        }
    }

    /// Conjunction with constant folding and flattening.
    pub fn and(parts: Vec<Condition>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Condition::True => {}
                Condition::False => return Condition::False,
                Condition::And(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Condition::True,
            1 => out.pop().unwrap(),
            _ => Condition::And(out),
        }
    }

    pub fn or(parts: Vec<Condition>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Condition::False => {}
                Condition::True => return Condition::True,
                Condition::Or(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Condition::False,
            1 => out.pop().unwrap(),
            _ => Condition::Or(out),
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Condition::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Condition::False)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Condition::True | Condition::False => 1,
            Condition::Exists(q) | Condition::Forall(q) => 1 + q.sub.size(),
            Condition::Not(c) => 1 + c.size(),
            Condition::And(cs) | Condition::Or(cs) => 1 + cs.iter().map(|c| c.size()).sum::<usize>(),
        }
    }

    /// Quantifier nesting depth.
    pub fn depth(&self) -> usize {
        match self {
            Condition::True | Condition::False => 0,
            Condition::Exists(q) | Condition::Forall(q) => 1 + q.sub.depth(),
            Condition::Not(c) => c.depth(),
            Condition::And(cs) | Condition::Or(cs) => cs.iter().map(|c| c.depth()).max().unwrap_or(0),
        }
    }
}

/// Does `p: root -> host` satisfy `c`?
pub fn satisfies(host: &Graph, p: &Morphism, c: &Condition) -> bool {
    match c {
        Condition::True => true,
        Condition::False => false,
        Condition::Exists(q) => {
            let fixed = p.after(&q.morphism.inverse());
            for_each_extension(&q.target, host, &fixed, |e| {
                if satisfies(host, e, &q.sub) {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })
            .is_break()
        }
        Condition::Forall(q) => {
            let fixed = p.after(&q.morphism.inverse());
            for_each_extension(&q.target, host, &fixed, |e| {
                if satisfies(host, e, &q.sub) {
                    ControlFlow::Continue(())
                } else {
                    ControlFlow::Break(())
                }
            })
            .is_continue()
        }
        Condition::Not(c) => !satisfies(host, p, c),
        Condition::And(cs) => cs.iter().all(|c| satisfies(host, p, c)),
        Condition::Or(cs) => cs.iter().any(|c| satisfies(host, p, c)),
    }
}

/// Graph-level satisfaction of a condition over the empty graph.
pub fn graph_satisfies(host: &Graph, c: &Condition) -> bool {
    satisfies(host, &Morphism::new(), c)
}

/// Shift `c` (over `C0`) along the injective morphism `i: C0 -> C0p`.
pub fn shift_over_morphism(c: &Condition, i: &Morphism, c0p: &Graph) -> Condition {
    match c {
        Condition::True => Condition::True,
        Condition::False => Condition::False,
        Condition::Exists(q) => {
            let forced = i.after(&q.morphism.inverse());
            let parts = glue(c0p, &q.target, &forced, false)
                .into_iter()
                .map(|o| Condition::exists(o.left, o.graph.clone(), shift_over_morphism(&q.sub, &o.right, &o.graph)))
                .collect();
            Condition::or(parts)
        }
        Condition::Forall(q) => {
            let forced = i.after(&q.morphism.inverse());
            let parts = glue(c0p, &q.target, &forced, false)
                .into_iter()
                .map(|o| Condition::forall(o.left, o.graph.clone(), shift_over_morphism(&q.sub, &o.right, &o.graph)))
                .collect();
            Condition::and(parts)
        }
        Condition::Not(c) => Condition::not(shift_over_morphism(c, i, c0p)),
        Condition::And(cs) => Condition::and(cs.iter().map(|c| shift_over_morphism(c, i, c0p)).collect()),
        Condition::Or(cs) => Condition::or(cs.iter().map(|c| shift_over_morphism(c, i, c0p)).collect()),
    }
}

/// Number of violations at a layer; `Infinite` above the first unsatisfied layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nv {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for Nv {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Nv::Finite(n) => write!(f, "{n}"),
            Nv::Infinite => write!(f, "inf"),
        }
    }
}

/// A constraint in universal alternating normal form.
///
/// `graphs[0]` is empty and `graphs[i] ⊆ graphs[i+1]` by ids. Quantifiers alternate
/// starting with `∀`, so graphs with odd index are universally bound. The chain ends
/// with `∀(C_n, false)` when `n` is odd and `∃(C_n, true)` when `n` is even.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub graphs: Vec<Graph>,
}

impl Constraint {
    pub fn new(graphs: Vec<Graph>) -> Result<Self> {
        let c = Constraint { graphs };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<()> {
        if self.graphs.is_empty() || !self.graphs[0].is_empty() {
            return Err(Error::NotAlternating("the chain must start with the empty graph".into()));
        }
        for i in 0..self.graphs.len() - 1 {
            if !self.graphs[i].is_subgraph_of(&self.graphs[i + 1]) {
                return Err(Error::NotAlternating(format!("graph {i} is not included in graph {}", i + 1)));
            }
            if i >= 1 && self.graphs[i].size() == self.graphs[i + 1].size() {
                return Err(Error::NotAlternating(format!("inclusion {i} is bijective")));
            }
        }
        Ok(())
    }

    pub fn nlvl(&self) -> usize {
        self.graphs.len() - 1
    }

    pub fn graph(&self, i: usize) -> &Graph {
        &self.graphs[i]
    }

    pub fn is_universal(i: usize) -> bool {
        i % 2 == 1
    }

    pub fn is_existential(i: usize) -> bool {
        i >= 2 && i.is_multiple_of(2)
    }

    /// Value of the innermost subcondition.
    pub fn terminal(&self) -> Condition {
        if self.nlvl() % 2 == 1 {
            Condition::False
        } else {
            Condition::True
        }
    }

    /// Subcondition rooted at `C_i` (`scond_i`).
    pub fn scond(&self, i: usize) -> Condition {
        self.chain(i, self.nlvl(), self.terminal())
    }

    /// Quantifier chain from `C_from` up to `C_to`, with `inner` at `C_to`.
    fn chain(&self, from: usize, to: usize, inner: Condition) -> Condition {
        let mut c = inner;
        for i in (from..to).rev() {
            let (root, tgt) = (&self.graphs[i], &self.graphs[i + 1]);
            c = if i % 2 == 0 {
                Condition::forall_incl(root, tgt, c)
            } else {
                Condition::exists_incl(root, tgt, c)
            };
        }
        c
    }

    pub fn to_condition(&self) -> Condition {
        self.scond(0)
    }

    /// `c` with the subcondition at `C_k` replaced by `d`.
    pub fn repl(&self, k: usize, d: Condition) -> Condition {
        self.chain(0, k, d)
    }

    /// Truncation at layer `k`, for `-1 <= k < nlvl`.
    pub fn cut(&self, k: i32) -> Result<Condition> {
        self.layer_check(k)?;
        if k == -1 {
            return Ok(Condition::True);
        }
        let d = if k % 2 != 0 { Condition::True } else { Condition::False };
        Ok(self.repl(k as usize + 1, d))
    }

    fn layer_check(&self, k: i32) -> Result<()> {
        if k < -1 || k >= self.nlvl() as i32 {
            return Err(Error::LayerOutOfRange { k, nlvl: self.nlvl() });
        }
        Ok(())
    }

    /// Intermediate condition at odd layer `k` with `C' ∈ ig(C_k, C_{k+1})`.
    pub fn ic(&self, k: usize, c_prime: &Graph) -> Condition {
        self.repl(k, Condition::exists_incl(&self.graphs[k], c_prime, Condition::True))
    }

    /// Intermediate graphs between `C_lo` and `C_{lo+1}`.
    pub fn ig(&self, lo: usize) -> Vec<Graph> {
        intermediate_graphs(&self.graphs[lo], &self.graphs[lo + 1]).expect("chain inclusion")
    }

    pub fn satisfied_by(&self, g: &Graph) -> bool {
        graph_satisfies(g, &self.to_condition())
    }

    /// `G ⊨_k c`. Layers at or above `nlvl - 1` mean full satisfaction.
    pub fn satisfied_up_to(&self, g: &Graph, k: i32) -> bool {
        if k >= self.nlvl() as i32 - 1 {
            return self.satisfied_by(g);
        }
        match self.cut(k) {
            Ok(c) => graph_satisfies(g, &c),
            Err(_) => true,
        }
    }

    /// Largest satisfied layer.
    pub fn kmax(&self, g: &Graph) -> i32 {
        let n = self.nlvl() as i32;
        if self.satisfied_by(g) {
            return n - 1;
        }
        let mut k = -1;
        let mut i = 1;
        while i < n - 1 {
            if self.satisfied_up_to(g, i) {
                k = i;
            } else {
                break;
            }
            i += 2;
        }
        k
    }

    /// Existential subcondition at `C_{k+2}` truncated to its first quantifier,
    /// or `false` when `C_{k+2}` is the last graph.
    pub fn first_step(&self, j: usize) -> Condition {
        if j >= self.nlvl() {
            Condition::False
        } else {
            Condition::exists_incl(&self.graphs[j], &self.graphs[j + 1], Condition::True)
        }
    }

    /// Number of violations at layer `j`.
    pub fn nv(&self, g: &Graph, j: i32) -> Result<Nv> {
        self.layer_check(j)?;
        let k = self.kmax(g);
        Ok(self.nv_with_kmax(g, j, k))
    }

    pub fn nv_with_kmax(&self, g: &Graph, j: i32, kmax: i32) -> Nv {
        if j < kmax + 1 {
            return Nv::Finite(0);
        }
        if j > kmax + 1 {
            return Nv::Infinite;
        }
        let top = (kmax + 2) as usize;
        let occ = crate::graph::monomorphisms(&self.graphs[top], g);
        if top >= self.nlvl() {
            return Nv::Finite(occ.len());
        }
        let mut n = 0;
        for cp in self.ig(top) {
            let d = Condition::exists_incl(&self.graphs[top], &cp, Condition::True);
            n += occ.iter().filter(|p| !satisfies(g, p, &d)).count();
        }
        Nv::Finite(n)
    }

    /// Occurrences of `C_{k+2}` whose repair can raise the satisfied layer beyond odd `k`.
    pub fn potentially_increasing(&self, g: &Graph, k: i32) -> Result<Vec<Morphism>> {
        self.layer_check(k)?;
        let top = (k + 2) as usize;
        if top > self.nlvl() {
            return Ok(Vec::new());
        }
        let first = self.first_step(top);
        let cutk = if k >= 0 { Some(self.cut_chain(k)) } else { None };
        let occ = crate::graph::monomorphisms(&self.graphs[top], g);
        Ok(occ
            .into_iter()
            .filter(|p| !satisfies(g, p, &first))
            .filter(|p| match &cutk {
                None => true,
                Some(sub) => (0..=k as usize).all(|i| {
                    let r = p.restrict(&self.graphs[i + 1]);
                    satisfies(g, &r, &sub[i + 1])
                }),
            })
            .collect())
    }

    /// Subconditions of `cut(k)` rooted at each `C_i`, `i <= k + 1`.
    fn cut_chain(&self, k: i32) -> Vec<Condition> {
        let top = k as usize + 1;
        let mut inner = if k % 2 != 0 { Condition::True } else { Condition::False };
        let mut out = vec![Condition::True; top + 1];
        out[top] = inner.clone();
        for i in (0..top).rev() {
            inner = if i % 2 == 0 {
                Condition::forall_incl(&self.graphs[i], &self.graphs[i + 1], inner)
            } else {
                Condition::exists_incl(&self.graphs[i], &self.graphs[i + 1], inner)
            };
            out[i] = inner.clone();
        }
        out
    }

    /// Convert a condition in alternating normal form into this representation.
    pub fn from_condition(c: &Condition) -> Result<Self> {
        let c = normalize_ends(c);
        let mut graphs = vec![Graph::new()];
        let mut quants = Vec::new();
        let mut cur = &c;
        let terminal;
        loop {
            match cur {
                Condition::Exists(q) | Condition::Forall(q) => {
                    let is_forall = matches!(cur, Condition::Forall(_));
                    let root = graphs.last().unwrap().clone();
                    if !q.morphism.is_mono(&root, &q.target) {
                        return Err(Error::NotAlternating("quantifier morphism is not an injective morphism".into()));
                    }
                    graphs.push(rename_along(&root, &q.morphism, &q.target));
                    quants.push(is_forall);
                    cur = &q.sub;
                }
                Condition::True => {
                    terminal = true;
                    break;
                }
                Condition::False => {
                    terminal = false;
                    break;
                }
                _ => return Err(Error::NotAlternating("boolean connective inside a quantifier chain".into())),
            }
        }
        for w in quants.windows(2) {
            if w[0] == w[1] {
                return Err(Error::NotAlternating("quantifiers do not alternate".into()));
            }
        }
        if let Some(last) = quants.last() {
            if *last == terminal {
                return Err(Error::NotAlternating("chain ends with a trivial quantifier".into()));
            }
        }
        if quants.first() == Some(&false) {
            graphs.insert(1, Graph::new());
            quants.insert(0, true);
        }
        if quants.is_empty() {
            if terminal {
                return Ok(Constraint { graphs });
            }
            return Ok(Constraint { graphs: vec![Graph::new(), Graph::new()] });
        }
        collapse(graphs)
    }
}

/// Rename the ids of `target` so that `m: root -> target` becomes an inclusion.
fn rename_along(root: &Graph, m: &Morphism, target: &Graph) -> Graph {
    let inv = m.inverse();
    let mut g = root.clone();
    let mut nmap = std::collections::BTreeMap::new();
    let mut next_n = root.next_node_id();
    for (n, t) in target.nodes() {
        let id = match inv.node(n) {
            Some(r) => r,
            None => {
                let id = next_n;
                next_n += 1;
                g.add_node(id, t);
                id
            }
        };
        nmap.insert(n, id);
    }
    let mut next_e = root.next_edge_id();
    for (e, d) in target.edges() {
        if inv.edge(e).is_none() {
            g.add_edge(next_e, nmap[&d.src], nmap[&d.tar], d.ty);
            next_e += 1;
        }
    }
    g
}

/// Fold `∃(a, false)` to false and `∀(a, true)` to true, bottom-up.
pub fn normalize_ends(c: &Condition) -> Condition {
    match c {
        Condition::Exists(q) => {
            let sub = normalize_ends(&q.sub);
            if sub.is_false() {
                Condition::False
            } else {
                Condition::exists(q.morphism.clone(), q.target.clone(), sub)
            }
        }
        Condition::Forall(q) => {
            let sub = normalize_ends(&q.sub);
            if sub.is_true() {
                Condition::True
            } else {
                Condition::forall(q.morphism.clone(), q.target.clone(), sub)
            }
        }
        Condition::Not(c) => Condition::not(normalize_ends(c)),
        Condition::And(cs) => Condition::and(cs.iter().map(normalize_ends).collect()),
        Condition::Or(cs) => Condition::or(cs.iter().map(normalize_ends).collect()),
        c => c.clone(),
    }
}

/// Remove bijective inner inclusions by merging the surrounding quantifiers.
fn collapse(mut graphs: Vec<Graph>) -> Result<Constraint> {
    loop {
        let n = graphs.len() - 1;
        let bij = (1..n).find(|&i| graphs[i].size() == graphs[i + 1].size());
        let Some(i) = bij else { break };
        if i + 1 < n {
            graphs.drain(i..i + 2);
        } else {
            // the last quantifier is trivial and the one above it folds to its unit
            graphs.truncate(i);
            if graphs.len() <= 1 {
                return Ok(Constraint { graphs: vec![Graph::new()] });
            }
        }
    }
    Constraint::new(graphs)
}

/// Extended overlaps for an anchored graph: `eol(G, anchor, e)`.
pub fn eol(g: &Graph, anchor: &Morphism, h: &Graph, e: &Morphism) -> Vec<crate::graph::Overlap> {
    extended_overlaps(g, anchor, h, e)
}
