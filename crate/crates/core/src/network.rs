//! The network type: a simple undirected graph with labelled leaves.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::decompose;

/// Vertex identifier. Ids need not be contiguous.
pub type Vertex = u32;

/// Leaf label.
pub type Taxon = String;

/// An undirected graph with a partial labelling of its vertices by taxa.
///
/// A *valid* network (see [`validate`]) is connected and simple, every
/// degree-1 vertex carries exactly one taxon, every internal vertex has
/// degree 3, and every cut-edge induces a distinct, non-degenerate split of
/// the taxon set. The struct itself does not enforce validity so that
/// diagnostics can be reported on malformed input; algorithms state in their
/// documentation when they require a valid network.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Network {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
    taxa: BTreeMap<Taxon, Vertex>,
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a network from an edge list and `(taxon, leaf-vertex)` pairs.
    pub fn from_parts<E, L>(edges: E, labels: L) -> Self
    where
        E: IntoIterator<Item = (Vertex, Vertex)>,
        L: IntoIterator<Item = (Taxon, Vertex)>,
    {
        let mut n = Self::new();
        for (u, v) in edges {
            n.add_edge(u, v);
        }
        for (t, v) in labels {
            n.set_taxon(t, v);
        }
        n
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.adj.entry(v).or_default();
    }

    /// Inserts an undirected edge, creating endpoints as needed.
    /// Re-adding an existing edge has no effect (edges form a set).
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        if let Some(s) = self.adj.get_mut(&u) {
            s.remove(&v);
        }
        if let Some(s) = self.adj.get_mut(&v) {
            s.remove(&u);
        }
    }

    /// Removes a vertex together with its incident edges and label, if any.
    pub fn remove_vertex(&mut self, v: Vertex) {
        if let Some(ns) = self.adj.remove(&v) {
            for u in ns {
                if let Some(s) = self.adj.get_mut(&u) {
                    s.remove(&v);
                }
            }
        }
        self.taxa.retain(|_, &mut w| w != v);
    }

    /// Assigns `taxon` to vertex `v` (replacing any previous assignment of
    /// the same taxon).
    pub fn set_taxon(&mut self, taxon: impl Into<Taxon>, v: Vertex) {
        self.add_vertex(v);
        self.taxa.insert(taxon.into(), v);
    }

    pub fn remove_taxon(&mut self, taxon: &str) {
        self.taxa.remove(taxon);
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    /// Edge list with each edge reported once as `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for (&u, ns) in &self.adj {
            for &v in ns {
                if u <= v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn n_edges(&self) -> usize {
        self.edges().len()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.degree(v) == 1
    }

    /// The unique neighbor of a degree-1 vertex.
    pub fn leaf_neighbor(&self, v: Vertex) -> Option<Vertex> {
        let mut it = self.neighbors(v);
        match (it.next(), it.next()) {
            (Some(u), None) => Some(u),
            _ => None,
        }
    }

    /// Taxa in sorted order with their leaf vertices.
    pub fn taxa(&self) -> impl Iterator<Item = (&Taxon, Vertex)> + '_ {
        self.taxa.iter().map(|(t, &v)| (t, v))
    }

    pub fn taxa_set(&self) -> BTreeSet<Taxon> {
        self.taxa.keys().cloned().collect()
    }

    pub fn n_taxa(&self) -> usize {
        self.taxa.len()
    }

    pub fn leaf_vertex(&self, taxon: &str) -> Option<Vertex> {
        self.taxa.get(taxon).copied()
    }

    /// Reverse label lookup.
    pub fn taxon_of(&self, v: Vertex) -> Option<&Taxon> {
        self.taxa
            .iter()
            .find_map(|(t, &w)| (w == v).then_some(t))
    }

    /// Smallest id not currently in use.
    pub fn fresh_vertex(&self) -> Vertex {
        self.adj.keys().next_back().map_or(0, |&v| v + 1)
    }

    /// Breadth-first distances (in edges) from `src` to every reachable vertex.
    pub fn bfs_distances(&self, src: Vertex) -> BTreeMap<Vertex, u32> {
        let mut dist = BTreeMap::new();
        if !self.adj.contains_key(&src) {
            return dist;
        }
        dist.insert(src, 0);
        let mut frontier = Vec::from([src]);
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for u in frontier {
                for v in self.neighbors(u) {
                    if let alloc::collections::btree_map::Entry::Vacant(e) = dist.entry(v) {
                        e.insert(d);
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        match self.adj.keys().next() {
            None => true,
            Some(&v) => self.bfs_distances(v).len() == self.adj.len(),
        }
    }

    /// Taxa found on the `u`-side once the edge `(u, v)` is ignored.
    ///
    /// For a cut-edge this is one side of the induced split; for a non-cut
    /// edge the walk reaches `v` anyway and the result is the full taxon set.
    pub fn taxa_beyond(&self, u: Vertex, v: Vertex) -> BTreeSet<Taxon> {
        let mut seen = BTreeSet::from([u]);
        let mut stack = Vec::from([u]);
        while let Some(w) = stack.pop() {
            for x in self.neighbors(w) {
                if w == u && x == v {
                    continue;
                }
                if seen.insert(x) {
                    stack.push(x);
                }
            }
        }
        self.taxa
            .iter()
            .filter(|(_, w)| seen.contains(w))
            .map(|(t, _)| t.clone())
            .collect()
    }
}

/// A structural defect found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    /// Valid networks carry at least two taxa.
    TooFewTaxa { found: usize },
    Disconnected,
    SelfLoop(Vertex),
    /// Internal vertices must have degree 3 (degree-1 vertices are leaves).
    BadDegree { vertex: Vertex, degree: usize },
    /// A degree-1 vertex with no taxon.
    UnlabelledLeaf(Vertex),
    /// A taxon assigned to a vertex of degree other than 1.
    LabelOnInternal { taxon: Taxon, vertex: Vertex },
    /// Two taxa assigned to the same vertex.
    SharedLabelVertex(Vertex),
    /// A cut-edge with no taxa on one side (redundant pendant structure).
    EmptySplitSide { edge: (Vertex, Vertex) },
    /// Two cut-edges inducing the same split of the taxa.
    DuplicateSplit {
        e1: (Vertex, Vertex),
        e2: (Vertex, Vertex),
    },
}

/// Checks all structural requirements and reports every violation found.
///
/// An empty result means the network is valid: simple, connected, internal
/// degrees all 3, leaves bijectively labelled, and every cut-edge induces a
/// distinct split with taxa on both sides.
pub fn validate(net: &Network) -> Vec<Violation> {
    let mut out = Vec::new();
    if net.n_vertices() == 0 {
        out.push(Violation::Empty);
        return out;
    }
    if net.n_taxa() < 2 {
        out.push(Violation::TooFewTaxa { found: net.n_taxa() });
    }
    if !net.is_connected() {
        out.push(Violation::Disconnected);
    }

    let mut label_targets: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (t, v) in net.taxa() {
        *label_targets.entry(v).or_default() += 1;
        if net.degree(v) != 1 {
            out.push(Violation::LabelOnInternal {
                taxon: t.clone(),
                vertex: v,
            });
        }
    }
    for (&v, &count) in &label_targets {
        if count > 1 {
            out.push(Violation::SharedLabelVertex(v));
        }
    }

    for v in net.vertices() {
        if net.neighbors(v).any(|u| u == v) {
            out.push(Violation::SelfLoop(v));
        }
        match net.degree(v) {
            1 => {
                if !label_targets.contains_key(&v) {
                    out.push(Violation::UnlabelledLeaf(v));
                }
            }
            3 => {}
            d => out.push(Violation::BadDegree { vertex: v, degree: d }),
        }
    }

    // The split restriction only makes sense on connected graphs.
    if net.is_connected() {
        let all = net.taxa_set();
        let mut seen: BTreeMap<Vec<Taxon>, (Vertex, Vertex)> = BTreeMap::new();
        for (u, v) in decompose::bridges(net) {
            let side = net.taxa_beyond(u, v);
            if side.is_empty() || side.len() == all.len() {
                out.push(Violation::EmptySplitSide { edge: (u, v) });
                continue;
            }
            // Normalize so that complementary sides compare equal.
            let min = all.iter().next().expect("taxa nonempty");
            let key: Vec<Taxon> = if side.contains(min) {
                side.iter().cloned().collect()
            } else {
                all.difference(&side).cloned().collect()
            };
            if let Some(&prev) = seen.get(&key) {
                out.push(Violation::DuplicateSplit {
                    e1: prev,
                    e2: (u, v),
                });
            } else {
                seen.insert(key, (u, v));
            }
        }
    }
    out
}
