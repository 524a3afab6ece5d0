//! Typed graphs, injective morphisms, matching and overlap construction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::ops::ControlFlow;

use crate::error::Error;

pub type NodeId = u32;
pub type EdgeId = u32;
pub type TypeId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeType {
    pub name: String,
    pub src: TypeId,
    pub tar: TypeId,
}

/// Node and edge type vocabulary. Graphs store indices into these tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeGraph {
    pub node_types: Vec<String>,
    pub edge_types: Vec<EdgeType>,
}

impl TypeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node_type(&mut self, name: &str) -> TypeId {
        self.node_types.push(name.to_string());
        (self.node_types.len() - 1) as TypeId
    }

    pub fn add_edge_type(&mut self, name: &str, src: TypeId, tar: TypeId) -> TypeId {
        self.edge_types.push(EdgeType { name: name.to_string(), src, tar });
        (self.edge_types.len() - 1) as TypeId
    }

    pub fn node_type(&self, name: &str) -> Option<TypeId> {
        self.node_types.iter().position(|n| n == name).map(|i| i as TypeId)
    }

    pub fn edge_type(&self, name: &str) -> Option<TypeId> {
        self.edge_types.iter().position(|e| e.name == name).map(|i| i as TypeId)
    }

    pub fn node_type_name(&self, t: TypeId) -> &str {
        self.node_types.get(t as usize).map(|s| s.as_str()).unwrap_or("?")
    }

    pub fn edge_type_name(&self, t: TypeId) -> &str {
        self.edge_types.get(t as usize).map(|e| e.name.as_str()).unwrap_or("?")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: NodeId,
    pub tar: NodeId,
    pub ty: TypeId,
}

/// A set of node ids and edge ids, used for differences, images and intersections.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elements {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Elements {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    pub fn len(&self) -> usize {
        self.nodes.len() + self.edges.len()
    }

    pub fn intersects(&self, other: &Elements) -> bool {
        self.nodes.intersection(&other.nodes).next().is_some()
            || self.edges.intersection(&other.edges).next().is_some()
    }

    pub fn is_subset(&self, other: &Elements) -> bool {
        self.nodes.is_subset(&other.nodes) && self.edges.is_subset(&other.edges)
    }
}

/// A finite directed multigraph typed over a [`TypeGraph`].
///
/// Ids are stable: inclusions between graphs in this crate are identities on ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    nodes: BTreeMap<NodeId, TypeId>,
    edges: BTreeMap<EdgeId, Edge>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: NodeId, ty: TypeId) {
        self.nodes.insert(id, ty);
    }

    pub fn add_edge(&mut self, id: EdgeId, src: NodeId, tar: NodeId, ty: TypeId) {
        self.edges.insert(id, Edge { src, tar, ty });
    }

    pub fn with_node(mut self, id: NodeId, ty: TypeId) -> Self {
        self.add_node(id, ty);
        self
    }

    pub fn with_edge(mut self, id: EdgeId, src: NodeId, tar: NodeId, ty: TypeId) -> Self {
        self.add_edge(id, src, tar, ty);
        self
    }

    pub fn remove_node(&mut self, id: NodeId) -> Option<TypeId> {
        self.nodes.remove(&id)
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Option<Edge> {
        self.edges.remove(&id)
    }

    pub fn node_type(&self, id: NodeId) -> Option<TypeId> {
        self.nodes.get(&id).copied()
    }

    pub fn edge(&self, id: EdgeId) -> Option<Edge> {
        self.edges.get(&id).copied()
    }

    pub fn has_node(&self, id: NodeId) -> bool {
        self.nodes.contains_key(&id)
    }

    pub fn has_edge(&self, id: EdgeId) -> bool {
        self.edges.contains_key(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, TypeId)> + '_ {
        self.nodes.iter().map(|(a, b)| (*a, *b))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Edge)> + '_ {
        self.edges.iter().map(|(a, b)| (*a, *b))
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn size(&self) -> usize {
        self.nodes.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    pub fn next_node_id(&self) -> NodeId {
        self.nodes.keys().next_back().map_or(0, |m| m + 1)
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.edges.keys().next_back().map_or(0, |m| m + 1)
    }

    pub fn elements(&self) -> Elements {
        Elements {
            nodes: self.nodes.keys().copied().collect(),
            edges: self.edges.keys().copied().collect(),
        }
    }

    /// Elements of `self` whose ids do not occur in `sub`.
    pub fn minus(&self, sub: &Graph) -> Elements {
        Elements {
            nodes: self.nodes.keys().filter(|n| !sub.has_node(**n)).copied().collect(),
            edges: self.edges.keys().filter(|e| !sub.has_edge(**e)).copied().collect(),
        }
    }

    /// True if every element of `self` occurs in `other` with the same label and endpoints.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.nodes.iter().all(|(n, t)| other.nodes.get(n) == Some(t))
            && self.edges.iter().all(|(e, d)| other.edges.get(e) == Some(d))
    }

    /// The part of `self` spanned by `els`; edges whose endpoints are missing are dropped.
    pub fn restrict_to(&self, els: &Elements) -> Graph {
        let mut g = Graph::new();
        for n in &els.nodes {
            if let Some(t) = self.node_type(*n) {
                g.add_node(*n, t);
            }
        }
        for e in &els.edges {
            if let Some(d) = self.edge(*e) {
                if g.has_node(d.src) && g.has_node(d.tar) {
                    g.edges.insert(*e, d);
                }
            }
        }
        g
    }

    /// Endpoints of every edge exist.
    pub fn is_well_formed(&self) -> bool {
        self.edges.values().all(|d| self.has_node(d.src) && self.has_node(d.tar))
    }

    fn type_counts(&self) -> (BTreeMap<TypeId, usize>, BTreeMap<TypeId, usize>) {
        let mut a = BTreeMap::new();
        for t in self.nodes.values() {
            *a.entry(*t).or_insert(0) += 1;
        }
        let mut b = BTreeMap::new();
        for d in self.edges.values() {
            *b.entry(d.ty).or_insert(0) += 1;
        }
        (a, b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownNodeType { node: NodeId, ty: TypeId },
    UnknownEdgeType { edge: EdgeId, ty: TypeId },
    DanglingEdge { edge: EdgeId, node: NodeId },
    EndpointTypeMismatch { edge: EdgeId },
    DuplicateNode { node: NodeId },
    DuplicateEdge { edge: EdgeId },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UnknownNodeType { node, ty } => write!(f, "node {node} has unknown type {ty}"),
            Violation::UnknownEdgeType { edge, ty } => write!(f, "edge {edge} has unknown type {ty}"),
            Violation::DanglingEdge { edge, node } => write!(f, "edge {edge} refers to missing node {node}"),
            Violation::EndpointTypeMismatch { edge } => {
                write!(f, "edge {edge} endpoints do not match its type")
            }
            Violation::DuplicateNode { node } => write!(f, "duplicate node id {node}"),
            Violation::DuplicateEdge { edge } => write!(f, "duplicate edge id {edge}"),
        }
    }
}

pub fn validate_graph(tg: &TypeGraph, g: &Graph) -> Vec<Violation> {
    let mut out = Vec::new();
    for (n, t) in g.nodes() {
        if t as usize >= tg.node_types.len() {
            out.push(Violation::UnknownNodeType { node: n, ty: t });
        }
    }
    for (e, d) in g.edges() {
        let Some(et) = tg.edge_types.get(d.ty as usize) else {
            out.push(Violation::UnknownEdgeType { edge: e, ty: d.ty });
            continue;
        };
        let mut dangling = false;
        for n in [d.src, d.tar] {
            if !g.has_node(n) {
                out.push(Violation::DanglingEdge { edge: e, node: n });
                dangling = true;
            }
        }
        if !dangling && (g.node_type(d.src) != Some(et.src) || g.node_type(d.tar) != Some(et.tar)) {
            out.push(Violation::EndpointTypeMismatch { edge: e });
        }
    }
    out
}

/// A partial map between the element ids of two graphs.
///
/// Domain and codomain are not stored; callers pass them where needed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    pub nodes: BTreeMap<NodeId, NodeId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
}

impl Morphism {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity(g: &Graph) -> Self {
        Morphism {
            nodes: g.node_ids().map(|n| (n, n)).collect(),
            edges: g.edge_ids().map(|e| (e, e)).collect(),
        }
    }

    pub fn node(&self, n: NodeId) -> Option<NodeId> {
        self.nodes.get(&n).copied()
    }

    pub fn edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.edges.get(&e).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    /// `self ∘ first`, defined where both are defined.
    pub fn after(&self, first: &Morphism) -> Morphism {
        Morphism {
            nodes: first.nodes.iter().filter_map(|(a, b)| self.node(*b).map(|c| (*a, c))).collect(),
            edges: first.edges.iter().filter_map(|(a, b)| self.edge(*b).map(|c| (*a, c))).collect(),
        }
    }

    pub fn is_total_on(&self, g: &Graph) -> bool {
        g.node_ids().all(|n| self.nodes.contains_key(&n)) && g.edge_ids().all(|e| self.edges.contains_key(&e))
    }

    pub fn is_injective(&self) -> bool {
        let ns: BTreeSet<_> = self.nodes.values().collect();
        let es: BTreeSet<_> = self.edges.values().collect();
        ns.len() == self.nodes.len() && es.len() == self.edges.len()
    }

    /// Total on `dom`, lands in `cod`, preserves types and incidence.
    pub fn is_morphism(&self, dom: &Graph, cod: &Graph) -> bool {
        if !self.is_total_on(dom) {
            return false;
        }
        for (n, t) in dom.nodes() {
            if cod.node_type(self.nodes[&n]) != Some(t) {
                return false;
            }
        }
        for (e, d) in dom.edges() {
            let Some(img) = cod.edge(self.edges[&e]) else { return false };
            if img.ty != d.ty || img.src != self.nodes[&d.src] || img.tar != self.nodes[&d.tar] {
                return false;
            }
        }
        true
    }

    pub fn is_mono(&self, dom: &Graph, cod: &Graph) -> bool {
        self.is_morphism(dom, cod) && self.is_injective()
    }

    /// Restriction of the domain to the ids of `sub`.
    pub fn restrict(&self, sub: &Graph) -> Morphism {
        Morphism {
            nodes: sub.node_ids().filter_map(|n| self.node(n).map(|m| (n, m))).collect(),
            edges: sub.edge_ids().filter_map(|e| self.edge(e).map(|m| (e, m))).collect(),
        }
    }

    pub fn image(&self) -> Elements {
        Elements { nodes: self.nodes.values().copied().collect(), edges: self.edges.values().copied().collect() }
    }

    pub fn image_of(&self, els: &Elements) -> Elements {
        Elements {
            nodes: els.nodes.iter().filter_map(|n| self.node(*n)).collect(),
            edges: els.edges.iter().filter_map(|e| self.edge(*e)).collect(),
        }
    }

    pub fn inverse(&self) -> Morphism {
        Morphism {
            nodes: self.nodes.iter().map(|(a, b)| (*b, *a)).collect(),
            edges: self.edges.iter().map(|(a, b)| (*b, *a)).collect(),
        }
    }

    /// Union of two partial maps; `None` if they disagree on a shared key.
    pub fn union(&self, other: &Morphism) -> Option<Morphism> {
        let mut m = self.clone();
        for (a, b) in &other.nodes {
            if *m.nodes.entry(*a).or_insert(*b) != *b {
                return None;
            }
        }
        for (a, b) in &other.edges {
            if *m.edges.entry(*a).or_insert(*b) != *b {
                return None;
            }
        }
        Some(m)
    }
}

/// Restrict `f` to `sub_dom` and check that the image lies in `sub_cod`.
///
/// Errors if `f` is undefined somewhere on `sub_dom`; `Ok(None)` if the image escapes `sub_cod`.
pub fn restrict_morphism(f: &Morphism, sub_dom: &Graph, sub_cod: &Graph) -> Result<Option<Morphism>, Error> {
    if !f.is_total_on(sub_dom) {
        return Err(Error::NotSubgraph("restriction domain is not contained in the morphism domain".into()));
    }
    let r = f.restrict(sub_dom);
    let img = r.image();
    if img.nodes.iter().all(|n| sub_cod.has_node(*n)) && img.edges.iter().all(|e| sub_cod.has_edge(*e)) {
        Ok(Some(r))
    } else {
        Ok(None)
    }
}

struct HostIndex {
    by_type: BTreeMap<TypeId, Vec<NodeId>>,
    between: HashMap<(NodeId, NodeId, TypeId), Vec<EdgeId>>,
    out_deg: HashMap<NodeId, usize>,
    in_deg: HashMap<NodeId, usize>,
}

impl HostIndex {
    fn new(host: &Graph) -> Self {
        let mut by_type: BTreeMap<TypeId, Vec<NodeId>> = BTreeMap::new();
        for (n, t) in host.nodes() {
            by_type.entry(t).or_default().push(n);
        }
        let mut between: HashMap<(NodeId, NodeId, TypeId), Vec<EdgeId>> = HashMap::new();
        let mut out_deg = HashMap::new();
        let mut in_deg = HashMap::new();
        for (e, d) in host.edges() {
            between.entry((d.src, d.tar, d.ty)).or_default().push(e);
            *out_deg.entry(d.src).or_insert(0) += 1;
            *in_deg.entry(d.tar).or_insert(0) += 1;
        }
        HostIndex { by_type, between, out_deg, in_deg }
    }
}

struct Matcher<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    idx: HostIndex,
    node_order: Vec<NodeId>,
    edge_order: Vec<EdgeId>,
    map: Morphism,
    used_nodes: BTreeSet<NodeId>,
    used_edges: BTreeSet<EdgeId>,
    incident: BTreeMap<NodeId, Vec<EdgeId>>,
    p_out: HashMap<NodeId, usize>,
    p_in: HashMap<NodeId, usize>,
}

impl<'a> Matcher<'a> {
    fn new(pattern: &'a Graph, host: &'a Graph, fixed: &Morphism) -> Option<Self> {
        let mut map = Morphism::new();
        let mut used_nodes = BTreeSet::new();
        let mut used_edges = BTreeSet::new();
        let bind_node = |map: &mut Morphism, used: &mut BTreeSet<NodeId>, p: NodeId, h: NodeId| -> bool {
            if let Some(prev) = map.node(p) {
                return prev == h;
            }
            if pattern.node_type(p).is_none() || pattern.node_type(p) != host.node_type(h) || !used.insert(h) {
                return false;
            }
            map.nodes.insert(p, h);
            true
        };
        for (p, h) in &fixed.nodes {
            if !bind_node(&mut map, &mut used_nodes, *p, *h) {
                return None;
            }
        }
        for (p, h) in &fixed.edges {
            let (Some(pd), Some(hd)) = (pattern.edge(*p), host.edge(*h)) else { return None };
            if pd.ty != hd.ty || !used_edges.insert(*h) {
                return None;
            }
            if !bind_node(&mut map, &mut used_nodes, pd.src, hd.src)
                || !bind_node(&mut map, &mut used_nodes, pd.tar, hd.tar)
            {
                return None;
            }
            map.edges.insert(*p, *h);
        }
        // edges between already fixed nodes must have at least one candidate
        let idx = HostIndex::new(host);
        let mut incident: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
        let mut p_out = HashMap::new();
        let mut p_in = HashMap::new();
        for (e, d) in pattern.edges() {
            incident.entry(d.src).or_default().push(e);
            if d.tar != d.src {
                incident.entry(d.tar).or_default().push(e);
            }
            *p_out.entry(d.src).or_insert(0) += 1;
            *p_in.entry(d.tar).or_insert(0) += 1;
        }
        let mut node_order = Vec::new();
        let mut placed: BTreeSet<NodeId> = map.nodes.keys().copied().collect();
        let mut rest: BTreeSet<NodeId> = pattern.node_ids().filter(|n| !placed.contains(n)).collect();
        while !rest.is_empty() {
            let next = rest
                .iter()
                .copied()
                .max_by_key(|n| {
                    let links = incident
                        .get(n)
                        .map(|es| {
                            es.iter()
                                .filter(|e| {
                                    let d = pattern.edge(**e).unwrap();
                                    placed.contains(&d.src) || placed.contains(&d.tar)
                                })
                                .count()
                        })
                        .unwrap_or(0);
                    (links, std::cmp::Reverse(*n))
                })
                .unwrap();
            rest.remove(&next);
            placed.insert(next);
            node_order.push(next);
        }
        let edge_order = pattern.edge_ids().filter(|e| !map.edges.contains_key(e)).collect();
        Some(Matcher {
            pattern,
            host,
            idx,
            node_order,
            edge_order,
            map,
            used_nodes,
            used_edges,
            incident,
            p_out,
            p_in,
        })
    }

    fn node_ok(&self, p: NodeId, h: NodeId) -> bool {
        if self.idx.out_deg.get(&h).copied().unwrap_or(0) < self.p_out.get(&p).copied().unwrap_or(0)
            || self.idx.in_deg.get(&h).copied().unwrap_or(0) < self.p_in.get(&p).copied().unwrap_or(0)
        {
            return false;
        }
        if let Some(es) = self.incident.get(&p) {
            for e in es {
                let d = self.pattern.edge(*e).unwrap();
                let s = if d.src == p { Some(h) } else { self.map.node(d.src) };
                let t = if d.tar == p { Some(h) } else { self.map.node(d.tar) };
                if let (Some(s), Some(t)) = (s, t) {
                    if !self.idx.between.contains_key(&(s, t, d.ty)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run<F: FnMut(&Morphism) -> ControlFlow<()>>(&mut self, i: usize, f: &mut F) -> ControlFlow<()> {
        if i < self.node_order.len() {
            let p = self.node_order[i];
            let ty = self.pattern.node_type(p).unwrap();
            let cands = self.idx.by_type.get(&ty).cloned().unwrap_or_default();
            for h in cands {
                if self.used_nodes.contains(&h) || !self.node_ok(p, h) {
                    continue;
                }
                self.map.nodes.insert(p, h);
                self.used_nodes.insert(h);
                let r = self.run(i + 1, f);
                self.used_nodes.remove(&h);
                self.map.nodes.remove(&p);
                r?;
            }
            return ControlFlow::Continue(());
        }
        let j = i - self.node_order.len();
        if j < self.edge_order.len() {
            let e = self.edge_order[j];
            let d = self.pattern.edge(e).unwrap();
            let key = (self.map.nodes[&d.src], self.map.nodes[&d.tar], d.ty);
            let cands = self.idx.between.get(&key).cloned().unwrap_or_default();
            for h in cands {
                if self.used_edges.contains(&h) {
                    continue;
                }
                self.map.edges.insert(e, h);
                self.used_edges.insert(h);
                let r = self.run(i + 1, f);
                self.used_edges.remove(&h);
                self.map.edges.remove(&e);
                r?;
            }
            return ControlFlow::Continue(());
        }
        debug_assert!(self.map.is_mono(self.pattern, self.host));
        f(&self.map)
    }
}

/// Visit every injective morphism `pattern -> host` that extends the partial map `fixed`.
pub fn for_each_extension<F: FnMut(&Morphism) -> ControlFlow<()>>(
    pattern: &Graph,
    host: &Graph,
    fixed: &Morphism,
    mut f: F,
) -> ControlFlow<()> {
    match Matcher::new(pattern, host, fixed) {
        Some(mut m) => m.run(0, &mut f),
        None => ControlFlow::Continue(()),
    }
}

/// All injective extensions of `fixed`, in canonical order.
pub fn extensions(pattern: &Graph, host: &Graph, fixed: &Morphism) -> Vec<Morphism> {
    let mut out = Vec::new();
    let _ = for_each_extension(pattern, host, fixed, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    out.sort();
    out
}

pub fn exists_extension(pattern: &Graph, host: &Graph, fixed: &Morphism) -> bool {
    for_each_extension(pattern, host, fixed, |_| ControlFlow::Break(())).is_break()
}

/// All injective morphisms `pattern -> host`, in canonical order.
pub fn monomorphisms(pattern: &Graph, host: &Graph) -> Vec<Morphism> {
    extensions(pattern, host, &Morphism::new())
}

pub fn count_monomorphisms(pattern: &Graph, host: &Graph) -> usize {
    let mut n = 0;
    let _ = for_each_extension(pattern, host, &Morphism::new(), |_| {
        n += 1;
        ControlFlow::Continue(())
    });
    n
}

pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Morphism> {
    if g.type_counts() != h.type_counts() {
        return None;
    }
    let mut found = None;
    let _ = for_each_extension(g, h, &Morphism::new(), |m| {
        found = Some(m.clone());
        ControlFlow::Break(())
    });
    found
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Every graph `C` with `lo ⊊ C ⊆ hi` (by ids), including `hi` itself.
pub fn intermediate_graphs(lo: &Graph, hi: &Graph) -> Result<Vec<Graph>, Error> {
    if !lo.is_subgraph_of(hi) {
        return Err(Error::NotSubgraph("lower graph is not a subgraph of the upper graph".into()));
    }
    let diff = hi.minus(lo);
    let dn: Vec<NodeId> = diff.nodes.iter().copied().collect();
    let de: Vec<EdgeId> = diff.edges.iter().copied().collect();
    if dn.len() + de.len() > 24 {
        return Err(Error::Invalid("too many intermediate elements".into()));
    }
    let mut out = Vec::new();
    for nmask in 0u32..(1 << dn.len()) {
        let mut base = lo.clone();
        for (i, n) in dn.iter().enumerate() {
            if nmask & (1 << i) != 0 {
                base.add_node(*n, hi.node_type(*n).unwrap());
            }
        }
        let avail: Vec<EdgeId> = de
            .iter()
            .copied()
            .filter(|e| {
                let d = hi.edge(*e).unwrap();
                base.has_node(d.src) && base.has_node(d.tar)
            })
            .collect();
        for emask in 0u32..(1 << avail.len()) {
            if nmask == 0 && emask == 0 {
                continue;
            }
            let mut g = base.clone();
            for (i, e) in avail.iter().enumerate() {
                if emask & (1 << i) != 0 {
                    let d = hi.edge(*e).unwrap();
                    g.add_edge(*e, d.src, d.tar, d.ty);
                }
            }
            out.push(g);
        }
    }
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// A jointly surjective pair of injective morphisms `left: A -> graph`, `right: B -> graph`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Overlap {
    pub graph: Graph,
    pub left: Morphism,
    pub right: Morphism,
}

/// Enumerate gluings of `a` and `b` along injective partial maps `b -> a` that extend `forced`.
///
/// The glued graph keeps the ids of `a`; unmatched parts of `b` get fresh ids.
/// With `nonempty`, the shared part must be non-empty.
pub fn glue(a: &Graph, b: &Graph, forced: &Morphism, nonempty: bool) -> Vec<Overlap> {
    let bn: Vec<NodeId> = b.node_ids().collect();
    let be: Vec<EdgeId> = b.edge_ids().collect();
    let mut out = Vec::new();
    for (p, q) in &forced.nodes {
        if b.node_type(*p).is_none() || b.node_type(*p) != a.node_type(*q) {
            return out;
        }
    }
    if !forced.is_injective() {
        return out;
    }
    for (p, q) in &forced.edges {
        let (Some(pd), Some(qd)) = (b.edge(*p), a.edge(*q)) else { return out };
        if pd.ty != qd.ty || forced.node(pd.src) != Some(qd.src) || forced.node(pd.tar) != Some(qd.tar) {
            return out;
        }
    }
    let mut map = forced.clone();
    glue_nodes(a, b, &bn, &be, 0, &mut map, nonempty, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn glue_nodes(
    a: &Graph,
    b: &Graph,
    bn: &[NodeId],
    be: &[EdgeId],
    i: usize,
    map: &mut Morphism,
    nonempty: bool,
    out: &mut Vec<Overlap>,
) {
    if i == bn.len() {
        glue_edges(a, b, be, 0, map, nonempty, out);
        return;
    }
    let n = bn[i];
    if map.nodes.contains_key(&n) {
        glue_nodes(a, b, bn, be, i + 1, map, nonempty, out);
        return;
    }
    glue_nodes(a, b, bn, be, i + 1, map, nonempty, out);
    let ty = b.node_type(n).unwrap();
    let used: BTreeSet<NodeId> = map.nodes.values().copied().collect();
    for (m, t) in a.nodes() {
        if t == ty && !used.contains(&m) {
            map.nodes.insert(n, m);
            glue_nodes(a, b, bn, be, i + 1, map, nonempty, out);
            map.nodes.remove(&n);
        }
    }
}

fn glue_edges(
    a: &Graph,
    b: &Graph,
    be: &[EdgeId],
    i: usize,
    map: &mut Morphism,
    nonempty: bool,
    out: &mut Vec<Overlap>,
) {
    if i == be.len() {
        if nonempty && map.is_empty() {
            return;
        }
        out.push(build_gluing(a, b, map));
        return;
    }
    let e = be[i];
    if map.edges.contains_key(&e) {
        glue_edges(a, b, be, i + 1, map, nonempty, out);
        return;
    }
    glue_edges(a, b, be, i + 1, map, nonempty, out);
    let d = b.edge(e).unwrap();
    let (Some(s), Some(t)) = (map.node(d.src), map.node(d.tar)) else { return };
    let used: BTreeSet<EdgeId> = map.edges.values().copied().collect();
    for (f, fd) in a.edges() {
        if fd.ty == d.ty && fd.src == s && fd.tar == t && !used.contains(&f) {
            map.edges.insert(e, f);
            glue_edges(a, b, be, i + 1, map, nonempty, out);
            map.edges.remove(&e);
        }
    }
}

fn build_gluing(a: &Graph, b: &Graph, shared: &Morphism) -> Overlap {
    let mut g = a.clone();
    let mut right = shared.clone();
    let mut next_n = a.next_node_id();
    for (n, t) in b.nodes() {
        if let std::collections::btree_map::Entry::Vacant(e) = right.nodes.entry(n) {
            g.add_node(next_n, t);
            e.insert(next_n);
            next_n += 1;
        }
    }
    let mut next_e = a.next_edge_id();
    for (e, d) in b.edges() {
        if !right.edges.contains_key(&e) {
            g.add_edge(next_e, right.nodes[&d.src], right.nodes[&d.tar], d.ty);
            right.edges.insert(e, next_e);
            next_e += 1;
        }
    }
    Overlap { graph: g, left: Morphism::identity(a), right }
}

/// Non-trivial overlaps of `g1` and `g2`, one per shared partial map.
pub fn overlaps(g1: &Graph, g2: &Graph) -> Vec<Overlap> {
    glue(g1, g2, &Morphism::new(), true)
}

/// Gluings of `g` and `h` that agree on a common subgraph: `left ∘ anchor = right ∘ e`.
///
/// The shared part may be empty when the common subgraph is.
///
/// `anchor: C0 -> g` and `e: C0 -> h` must be injective and defined on the same domain.
pub fn extended_overlaps(g: &Graph, anchor: &Morphism, h: &Graph, e: &Morphism) -> Vec<Overlap> {
    let forced = anchor.after(&e.inverse());
    glue(g, h, &forced, false)
}

pub fn to_dot(g: &Graph, tg: Option<&TypeGraph>, name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph {name} {{");
    for (n, t) in g.nodes() {
        let label = tg.map_or_else(|| t.to_string(), |tg| tg.node_type_name(t).to_string());
        let _ = writeln!(s, "  n{n} [label=\"{n}:{label}\"];");
    }
    for (e, d) in g.edges() {
        let label = tg.map_or_else(|| d.ty.to_string(), |tg| tg.edge_type_name(d.ty).to_string());
        let _ = writeln!(s, "  n{} -> n{} [label=\"{e}:{label}\"];", d.src, d.tar);
    }
    s.push_str("}\n");
    s
}
