//! Blob decomposition: biconnected components, the blob tree and the generator.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::network::{Network, Taxon, Vertex};

/// A maximal 2-connected subgraph with at least three vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blob {
    pub vertices: BTreeSet<Vertex>,
    pub edges: BTreeSet<(Vertex, Vertex)>,
}

impl Blob {
    /// Cycle rank of the blob: `|E| - |V| + 1`.
    pub fn level(&self) -> u32 {
        (self.edges.len() + 1 - self.vertices.len()) as u32
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }
}

/// Node of the [`BlobTree`]: a blob, or an internal vertex lying on no blob.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlobTreeNode {
    Blob(usize),
    Plain(Vertex),
}

/// Edge of the [`BlobTree`], one per non-trivial cut-edge of the network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlobTreeEdge {
    /// Indices into [`BlobTree::nodes`].
    pub a: usize,
    pub b: usize,
    /// The underlying network edge, oriented from node `a` to node `b`.
    pub cut_edge: (Vertex, Vertex),
}

/// The coarse tree structure of a network: blobs and plain internal vertices
/// joined by the non-trivial cut-edges. Leaves and their pendant edges are
/// not represented.
#[derive(Clone, Debug, Default)]
pub struct BlobTree {
    pub nodes: Vec<BlobTreeNode>,
    pub edges: Vec<BlobTreeEdge>,
}

/// Result of [`decompose`].
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub blobs: Vec<Blob>,
    pub blob_tree: BlobTree,
}

impl Decomposition {
    pub fn blob_of(&self, v: Vertex) -> Option<usize> {
        self.blobs.iter().position(|b| b.contains(v))
    }
}

/// All biconnected components as edge sets. Single-edge components are the
/// bridges of the graph.
pub fn biconnected_components(net: &Network) -> Vec<Vec<(Vertex, Vertex)>> {
    let mut disc: BTreeMap<Vertex, u32> = BTreeMap::new();
    let mut low: BTreeMap<Vertex, u32> = BTreeMap::new();
    let mut time = 0u32;
    let mut components = Vec::new();
    let mut edge_stack: Vec<(Vertex, Vertex)> = Vec::new();

    struct Frame {
        v: Vertex,
        parent: Option<Vertex>,
        neighbors: Vec<Vertex>,
        idx: usize,
    }

    for root in net.vertices().collect::<Vec<_>>() {
        if disc.contains_key(&root) {
            continue;
        }
        disc.insert(root, time);
        low.insert(root, time);
        time += 1;
        let mut stack = Vec::from([Frame {
            v: root,
            parent: None,
            neighbors: net.neighbors(root).collect(),
            idx: 0,
        }]);
        while let Some(frame) = stack.last_mut() {
            let v = frame.v;
            if frame.idx < frame.neighbors.len() {
                let w = frame.neighbors[frame.idx];
                frame.idx += 1;
                if w == v || Some(w) == frame.parent {
                    continue;
                }
                if let Some(&dw) = disc.get(&w) {
                    // Back edge to an ancestor (or cross within the DFS tree).
                    if dw < disc[&v] {
                        edge_stack.push((v, w));
                        let lv = low[&v].min(dw);
                        low.insert(v, lv);
                    }
                } else {
                    edge_stack.push((v, w));
                    disc.insert(w, time);
                    low.insert(w, time);
                    time += 1;
                    stack.push(Frame {
                        v: w,
                        parent: Some(v),
                        neighbors: net.neighbors(w).collect(),
                        idx: 0,
                    });
                }
            } else {
                let finished = stack.pop().expect("frame present");
                if let Some(parent) = stack.last() {
                    let u = parent.v;
                    let w = finished.v;
                    let lu = low[&u].min(low[&w]);
                    low.insert(u, lu);
                    if low[&w] >= disc[&u] {
                        let mut comp = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            comp.push(e);
                            if e == (u, w) {
                                break;
                            }
                        }
                        components.push(comp);
                    }
                }
            }
        }
    }
    components
}

/// Cut-edges (bridges), each reported once as `(min, max)`, sorted.
pub fn bridges(net: &Network) -> Vec<(Vertex, Vertex)> {
    let mut out: Vec<(Vertex, Vertex)> = biconnected_components(net)
        .into_iter()
        .filter(|c| c.len() == 1)
        .map(|c| {
            let (u, v) = c[0];
            (u.min(v), u.max(v))
        })
        .collect();
    out.sort_unstable();
    out
}

/// Splits a network into its blobs and builds the blob tree.
///
/// Expects a valid network (see [`crate::network::validate`]); in particular
/// no two blobs may share a vertex, which degree-3 internal vertices ensure.
pub fn decompose(net: &Network) -> Decomposition {
    let comps = biconnected_components(net);
    let mut blobs: Vec<Blob> = comps
        .iter()
        .filter(|c| c.len() >= 2)
        .map(|c| {
            let mut vertices = BTreeSet::new();
            let mut edges = BTreeSet::new();
            for &(u, v) in c {
                vertices.insert(u);
                vertices.insert(v);
                edges.insert((u.min(v), u.max(v)));
            }
            Blob { vertices, edges }
        })
        .collect();
    blobs.sort_by(|a, b| a.vertices.cmp(&b.vertices));

    let mut vertex_blob: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (i, b) in blobs.iter().enumerate() {
        for &v in &b.vertices {
            vertex_blob.insert(v, i);
        }
    }

    let mut tree = BlobTree::default();
    let mut node_index: BTreeMap<BlobTreeNode, usize> = BTreeMap::new();
    let mut node_of = |tree: &mut BlobTree, n: BlobTreeNode| -> usize {
        *node_index.entry(n).or_insert_with(|| {
            tree.nodes.push(n);
            tree.nodes.len() - 1
        })
    };

    for (u, v) in bridges(net) {
        if net.is_leaf(u) || net.is_leaf(v) {
            continue;
        }
        let side = |x: Vertex| match vertex_blob.get(&x) {
            Some(&i) => BlobTreeNode::Blob(i),
            None => BlobTreeNode::Plain(x),
        };
        let a = node_of(&mut tree, side(u));
        let b = node_of(&mut tree, side(v));
        tree.edges.push(BlobTreeEdge {
            a,
            b,
            cut_edge: (u, v),
        });
    }
    // Isolated nodes (single blob, or a lone plain vertex in a star) still
    // deserve a node entry.
    for i in 0..blobs.len() {
        node_of(&mut tree, BlobTreeNode::Blob(i));
    }

    Decomposition {
        blobs,
        blob_tree: tree,
    }
}

/// Level of the network: the maximum cycle rank over its blobs, 0 for trees.
pub fn level(net: &Network) -> u32 {
    decompose(net)
        .blobs
        .iter()
        .map(Blob::level)
        .max()
        .unwrap_or(0)
}

/// Cut-edges with exactly one endpoint inside the blob, each tagged with
/// whether it is trivial (leads directly to a leaf), sorted.
pub fn incident_cut_edges(net: &Network, blob: &Blob) -> Vec<((Vertex, Vertex), bool)> {
    let mut out = Vec::new();
    for &v in &blob.vertices {
        for w in net.neighbors(v) {
            if !blob.contains(w) {
                out.push(((v, w), net.is_leaf(w)));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Errors from [`generator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorError {
    /// The network contains no cycle, so stripping leaves nothing.
    IsTree,
}

/// One side of a generator: a maximal path between generator vertices whose
/// interior vertices all kept degree 2 after stripping pendant trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Side {
    /// Generator vertices the side connects; equal endpoints form a loop.
    pub ends: (Vertex, Vertex),
    /// Interior vertices in path order from `ends.0` to `ends.1`.
    pub spine: Vec<Vertex>,
    /// For each spine vertex, the taxon of a directly attached leaf, if the
    /// third edge of that vertex leads to a single leaf.
    pub leaves: Vec<Option<Taxon>>,
}

impl Side {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    /// The ordered taxa on this side when every spine vertex carries a leaf.
    pub fn chain(&self) -> Option<Vec<Taxon>> {
        self.leaves.iter().cloned().collect()
    }

    /// Taxa attached along the side, skipping bare spine vertices.
    pub fn taxa(&self) -> Vec<Taxon> {
        self.leaves.iter().flatten().cloned().collect()
    }
}

/// The generator: what remains after deleting all pendant subtrees and
/// suppressing degree-2 vertices, kept as explicit paths so that leaves can
/// be assigned to sides.
///
/// A network whose cycle structure is a single cycle has no degree-3 vertex
/// left after suppression; by convention the smallest core vertex is then
/// the unique generator vertex and the cycle is recorded as one loop side
/// (any leaf attached to that vertex itself is assigned to no side).
#[derive(Clone, Debug)]
pub struct GeneratorGraph {
    pub vertices: BTreeSet<Vertex>,
    pub sides: Vec<Side>,
}

impl GeneratorGraph {
    /// Degree of a generator vertex, a loop counting twice.
    pub fn degree(&self, v: Vertex) -> usize {
        self.sides
            .iter()
            .map(|s| {
                (s.ends.0 == v) as usize + (s.ends.1 == v) as usize
            })
            .sum()
    }

    /// Cycle rank of the generator as a multigraph.
    pub fn cycle_rank(&self) -> u32 {
        (self.sides.len() + 1).saturating_sub(self.vertices.len()) as u32
    }
}

/// Computes the generator of a network. Fails with [`GeneratorError::IsTree`]
/// when the network has no cycles.
pub fn generator(net: &Network) -> Result<GeneratorGraph, GeneratorError> {
    // Strip pendant trees: repeatedly delete degree <= 1 vertices.
    let mut deg: BTreeMap<Vertex, usize> = net
        .vertices()
        .map(|v| (v, net.degree(v)))
        .collect();
    let mut queue: Vec<Vertex> = deg
        .iter()
        .filter(|(_, &d)| d <= 1)
        .map(|(&v, _)| v)
        .collect();
    let mut gone: BTreeSet<Vertex> = BTreeSet::new();
    while let Some(v) = queue.pop() {
        if !gone.insert(v) {
            continue;
        }
        deg.remove(&v);
        for u in net.neighbors(v) {
            if let Some(d) = deg.get_mut(&u) {
                *d -= 1;
                if *d <= 1 {
                    queue.push(u);
                }
            }
        }
    }
    if deg.is_empty() {
        return Err(GeneratorError::IsTree);
    }
    let core: BTreeSet<Vertex> = deg.keys().copied().collect();
    let core_deg = |v: Vertex| net.neighbors(v).filter(|w| core.contains(w)).count();

    let gen_vertices: BTreeSet<Vertex> = core
        .iter()
        .copied()
        .filter(|&v| core_deg(v) == 3)
        .collect();

    let leaf_at = |v: Vertex| -> Option<Taxon> {
        net.neighbors(v)
            .find(|&w| net.is_leaf(w))
            .and_then(|w| net.taxon_of(w).cloned())
    };

    if gen_vertices.is_empty() {
        // Single cycle. Walk it starting from the smallest core vertex.
        let start = *core.iter().next().expect("core nonempty");
        let mut spine = Vec::new();
        let mut leaves = Vec::new();
        let mut prev = start;
        let mut cur = net
            .neighbors(start)
            .find(|w| core.contains(w))
            .expect("cycle vertex has core neighbors");
        while cur != start {
            spine.push(cur);
            leaves.push(leaf_at(cur));
            let next = net
                .neighbors(cur)
                .find(|&w| core.contains(&w) && w != prev)
                .expect("cycle continues");
            prev = cur;
            cur = next;
        }
        return Ok(GeneratorGraph {
            vertices: BTreeSet::from([start]),
            sides: Vec::from([Side {
                ends: (start, start),
                spine,
                leaves,
            }]),
        });
    }

    // Walk each side once. Mark traversed network edges.
    let mut used: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut sides = Vec::new();
    for &g in &gen_vertices {
        let starts: Vec<Vertex> = net
            .neighbors(g)
            .filter(|w| core.contains(w))
            .collect();
        for first in starts {
            let e0 = (g.min(first), g.max(first));
            if used.contains(&e0) {
                continue;
            }
            used.insert(e0);
            let mut spine = Vec::new();
            let mut leaves = Vec::new();
            let mut prev = g;
            let mut cur = first;
            while !gen_vertices.contains(&cur) {
                spine.push(cur);
                leaves.push(leaf_at(cur));
                let next = net
                    .neighbors(cur)
                    .find(|&w| core.contains(&w) && w != prev)
                    .expect("side continues to a generator vertex");
                used.insert((cur.min(next), cur.max(next)));
                prev = cur;
                cur = next;
            }
            sides.push(Side {
                ends: (g, cur),
                spine,
                leaves,
            });
        }
    }
    sides.sort_by(|a, b| (a.ends, &a.spine).cmp(&(b.ends, &b.spine)));
    Ok(GeneratorGraph {
        vertices: gen_vertices,
        sides,
    })
}

/// Human-readable rendering of a blob, used in diagnostics.
pub fn blob_summary(net: &Network, blob: &Blob) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    let leaves: Vec<&Taxon> = blob
        .vertices
        .iter()
        .flat_map(|&v| net.neighbors(v))
        .filter_map(|w| net.taxon_of(w))
        .collect();
    let _ = write!(
        s,
        "level-{} blob on {} vertices ({} leaves)",
        blob.level(),
        blob.vertices.len(),
        leaves.len()
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::string::ToString;

    #[test]
    fn bridges_of_tree_are_all_edges() {
        let net = Network::from_parts(
            [(0, 4), (1, 4), (4, 3), (3, 2), (3, 5)],
            [
                ("x".to_string(), 0),
                ("y".to_string(), 1),
                ("u".to_string(), 2),
                ("w".to_string(), 5),
            ],
        );
        assert_eq!(bridges(&net).len(), 5);
        let d = decompose(&net);
        assert!(d.blobs.is_empty());
        // Only the internal edge (3,4) is non-trivial.
        assert_eq!(d.blob_tree.edges.len(), 1);
        assert_eq!(d.blob_tree.edges[0].cut_edge, (3, 4));
    }

    #[test]
    fn golden_network_decomposes_into_two_blobs() {
        let net = fixtures::golden_network();
        let d = decompose(&net);
        assert_eq!(d.blobs.len(), 2);
        let mut levels: Vec<u32> = d.blobs.iter().map(|b| b.level()).collect();
        levels.sort_unstable();
        assert_eq!(levels, [1, 2]);
        // Three non-trivial cut-edges join blob, fork vertices and blob.
        assert_eq!(d.blob_tree.edges.len(), 3);
    }

    #[test]
    fn generator_of_golden_network() {
        let net = fixtures::golden_network();
        let g = generator(&net).expect("has cycles");
        // Poles and attachment vertex of the level-2 blob plus the
        // attachment vertex of the triangle; the cherry junction gets
        // suppressed into a side.
        assert_eq!(g.vertices.len(), 4);
        assert_eq!(g.sides.len(), 6);
        for &v in &g.vertices {
            assert_eq!(g.degree(v), 3, "generator vertex {v} degree");
        }
        assert_eq!(g.cycle_rank(), 3);
    }

    #[test]
    fn generator_of_plain_cycle_uses_loop_convention() {
        // 4-cycle, each vertex with a leaf.
        let net = Network::from_parts(
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (0, 10),
                (1, 11),
                (2, 12),
                (3, 13),
            ],
            [
                ("a".to_string(), 10),
                ("b".to_string(), 11),
                ("c".to_string(), 12),
                ("d".to_string(), 13),
            ],
        );
        let g = generator(&net).expect("cycle");
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.sides.len(), 1);
        assert!(g.sides[0].is_loop());
        assert_eq!(g.sides[0].spine.len(), 3);
    }

    #[test]
    fn tree_has_no_generator() {
        let net = Network::from_parts(
            [(0, 1)],
            [("x".to_string(), 0), ("y".to_string(), 1)],
        );
        assert!(matches!(generator(&net), Err(GeneratorError::IsTree)));
    }
}
