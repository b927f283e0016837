//! Leaf-to-leaf distance matrices: shortest, longest, and the paired
//! sl-matrix.
//!
//! Shortest distances come from breadth-first search. Longest simple-path
//! distances decompose along the block-cut tree: any simple path between two
//! leaves crosses each block on the unique tree path exactly once, so the
//! longest distance is the sum over those blocks of the longest in-block
//! path between entry and exit. In-block maxima are found by exhaustive
//! search, which stays tiny because blocks of a level <= 2 network admit at
//! most a handful of routings; blocks of higher cycle rank are rejected. An
//! unconditional whole-graph enumeration is kept as an oracle.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::decompose;
use crate::network::{Network, Taxon, Vertex};

/// Failures of the longest-distance computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricsError {
    /// A block's cycle rank exceeds 2; the structured computation does not
    /// cover it (the brute-force oracle still may).
    LevelTooHigh { rank: u32 },
    /// Network too large for the brute-force oracle.
    TooLarge { vertices: usize },
}

/// Read access shared by [`ShortestMatrix`] and [`SlMatrix`], letting the
/// reconstruction pipeline run on either. Taxa are kept sorted; all cell
/// access is symmetric.
pub trait Matrix: Clone + core::fmt::Debug + PartialEq {
    /// Whether longest distances are available ([`Matrix::dl_at`] is `Some`).
    const HAS_LONGEST: bool;

    fn taxa(&self) -> &[Taxon];
    fn dm_at(&self, i: usize, j: usize) -> u32;
    fn dl_at(&self, i: usize, j: usize) -> Option<u32>;

    /// Builds a matrix over `taxa` (which must be sorted and duplicate-free)
    /// from a cell function called once per pair `i < j` returning
    /// `(shortest, longest)`; the longest component is dropped when the type
    /// does not carry it.
    fn from_fn<F: FnMut(usize, usize) -> (u32, u32)>(taxa: Vec<Taxon>, f: F) -> Self;

    fn n(&self) -> usize {
        self.taxa().len()
    }

    fn index_of(&self, t: &str) -> Option<usize> {
        self.taxa().iter().position(|x| x == t)
    }

    /// Cell by taxon names; panics on unknown taxa.
    fn dm(&self, x: &str, y: &str) -> u32 {
        let i = self.index_of(x).expect("taxon in matrix");
        let j = self.index_of(y).expect("taxon in matrix");
        self.dm_at(i, j)
    }

    fn dl(&self, x: &str, y: &str) -> Option<u32> {
        let i = self.index_of(x).expect("taxon in matrix");
        let j = self.index_of(y).expect("taxon in matrix");
        self.dl_at(i, j)
    }
}

/// All-pairs shortest leaf distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestMatrix {
    taxa: Vec<Taxon>,
    d: Vec<u32>,
}

/// All-pairs longest simple-path leaf distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongestMatrix {
    taxa: Vec<Taxon>,
    d: Vec<u32>,
}

/// Paired (shortest, longest) distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlMatrix {
    taxa: Vec<Taxon>,
    dm: Vec<u32>,
    dl: Vec<u32>,
}

fn grid_from_fn<F: FnMut(usize, usize) -> u32>(n: usize, mut f: F) -> Vec<u32> {
    let mut d = vec![0u32; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let v = f(i, j);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    d
}

fn assert_sorted(taxa: &[Taxon]) {
    debug_assert!(
        taxa.windows(2).all(|w| w[0] < w[1]),
        "matrix taxa must be sorted and distinct"
    );
}

impl Matrix for ShortestMatrix {
    const HAS_LONGEST: bool = false;

    fn taxa(&self) -> &[Taxon] {
        &self.taxa
    }

    fn dm_at(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.taxa.len() + j]
    }

    fn dl_at(&self, _i: usize, _j: usize) -> Option<u32> {
        None
    }

    fn from_fn<F: FnMut(usize, usize) -> (u32, u32)>(taxa: Vec<Taxon>, mut f: F) -> Self {
        assert_sorted(&taxa);
        let d = grid_from_fn(taxa.len(), |i, j| f(i, j).0);
        ShortestMatrix { taxa, d }
    }
}

impl Matrix for SlMatrix {
    const HAS_LONGEST: bool = true;

    fn taxa(&self) -> &[Taxon] {
        &self.taxa
    }

    fn dm_at(&self, i: usize, j: usize) -> u32 {
        self.dm[i * self.taxa.len() + j]
    }

    fn dl_at(&self, i: usize, j: usize) -> Option<u32> {
        Some(self.dl[i * self.taxa.len() + j])
    }

    fn from_fn<F: FnMut(usize, usize) -> (u32, u32)>(taxa: Vec<Taxon>, mut f: F) -> Self {
        assert_sorted(&taxa);
        let n = taxa.len();
        let mut dl = vec![0u32; n * n];
        let dm = grid_from_fn(n, |i, j| {
            let (m, l) = f(i, j);
            dl[i * n + j] = l;
            dl[j * n + i] = l;
            m
        });
        SlMatrix { taxa, dm, dl }
    }
}

impl SlMatrix {
    pub fn from_parts(shortest: &ShortestMatrix, longest: &LongestMatrix) -> Self {
        assert_eq!(shortest.taxa, longest.taxa, "taxa sets must agree");
        SlMatrix {
            taxa: shortest.taxa.clone(),
            dm: shortest.d.clone(),
            dl: longest.d.clone(),
        }
    }

    /// Projection to the shortest components.
    pub fn shortest(&self) -> ShortestMatrix {
        ShortestMatrix {
            taxa: self.taxa.clone(),
            d: self.dm.clone(),
        }
    }

    /// Projection to the longest components.
    pub fn longest(&self) -> LongestMatrix {
        LongestMatrix {
            taxa: self.taxa.clone(),
            d: self.dl.clone(),
        }
    }

    /// Both components by taxon names.
    pub fn pair(&self, x: &str, y: &str) -> (u32, u32) {
        (self.dm(x, y), self.dl(x, y).expect("sl matrix"))
    }
}

impl LongestMatrix {
    pub fn taxa(&self) -> &[Taxon] {
        &self.taxa
    }

    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.taxa.len() + j]
    }

    pub fn get(&self, x: &str, y: &str) -> u32 {
        let i = self.taxa.iter().position(|t| t == x).expect("taxon");
        let j = self.taxa.iter().position(|t| t == y).expect("taxon");
        self.at(i, j)
    }
}

/// A defect in a matrix that no valid network can produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixViolation {
    /// Off-diagonal distance 0, or 1 with more than two taxa.
    TooSmall { x: Taxon, y: Taxon, value: u32 },
    /// Shortest distances must satisfy the triangle inequality.
    TriangleInequality { x: Taxon, y: Taxon, via: Taxon },
    /// Longest below shortest.
    LongestBelowShortest { x: Taxon, y: Taxon },
}

/// Checks the shortest components: positivity (>= 2 off-diagonal unless the
/// matrix has exactly two taxa) and the triangle inequality; for matrices
/// carrying longest components, also `dm <= dl`.
pub fn matrix_violations<M: Matrix>(m: &M) -> Vec<MatrixViolation> {
    let mut out = Vec::new();
    let n = m.n();
    let floor = if n == 2 { 1 } else { 2 };
    for i in 0..n {
        for j in i + 1..n {
            let d = m.dm_at(i, j);
            if d < floor {
                out.push(MatrixViolation::TooSmall {
                    x: m.taxa()[i].clone(),
                    y: m.taxa()[j].clone(),
                    value: d,
                });
            }
            if let Some(l) = m.dl_at(i, j) {
                if l < d {
                    out.push(MatrixViolation::LongestBelowShortest {
                        x: m.taxa()[i].clone(),
                        y: m.taxa()[j].clone(),
                    });
                }
            }
            for k in 0..n {
                if m.dm_at(i, k) + m.dm_at(k, j) < d {
                    out.push(MatrixViolation::TriangleInequality {
                        x: m.taxa()[i].clone(),
                        y: m.taxa()[j].clone(),
                        via: m.taxa()[k].clone(),
                    });
                }
            }
        }
    }
    out
}

/// All-pairs shortest leaf distances by breadth-first search.
///
/// Requires a connected network with labelled leaves.
pub fn shortest_matrix(net: &Network) -> ShortestMatrix {
    let taxa: Vec<Taxon> = net.taxa().map(|(t, _)| t.clone()).collect();
    let leaves: Vec<Vertex> = net.taxa().map(|(_, v)| v).collect();
    let n = taxa.len();
    let mut d = vec![0u32; n * n];
    for i in 0..n {
        let dist = net.bfs_distances(leaves[i]);
        for j in 0..n {
            d[i * n + j] = *dist.get(&leaves[j]).expect("network connected");
        }
    }
    ShortestMatrix { taxa, d }
}

struct Blocks {
    /// Adjacency restricted to each block.
    adj: Vec<BTreeMap<Vertex, Vec<Vertex>>>,
    /// Blocks containing each vertex.
    of: BTreeMap<Vertex, Vec<usize>>,
    max_rank: u32,
}

fn block_structure(net: &Network) -> Blocks {
    let comps = decompose::biconnected_components(net);
    let mut adj = Vec::new();
    let mut of: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    let mut max_rank = 0;
    for comp in comps {
        let mut a: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for &(u, v) in &comp {
            a.entry(u).or_default().push(v);
            a.entry(v).or_default().push(u);
        }
        let idx = adj.len();
        for &v in a.keys() {
            of.entry(v).or_default().push(idx);
        }
        max_rank = max_rank.max((comp.len() + 1 - a.len()) as u32);
        adj.push(a);
    }
    Blocks { adj, of, max_rank }
}

/// Longest simple path between `u` and `v` using only the block's edges.
fn longest_in_block(adj: &BTreeMap<Vertex, Vec<Vertex>>, u: Vertex, v: Vertex) -> u32 {
    fn rec(
        adj: &BTreeMap<Vertex, Vec<Vertex>>,
        cur: Vertex,
        target: Vertex,
        visited: &mut BTreeSet<Vertex>,
        len: u32,
        best: &mut u32,
    ) {
        if cur == target {
            *best = (*best).max(len);
            return;
        }
        for &w in &adj[&cur] {
            if visited.insert(w) {
                rec(adj, w, target, visited, len + 1, best);
                visited.remove(&w);
            }
        }
    }
    let mut best = 0;
    let mut visited = BTreeSet::from([u]);
    rec(adj, u, v, &mut visited, 0, &mut best);
    best
}

/// The alternating block/cut-vertex walk from one block to another in the
/// block-cut tree: `(block, entry vertex)` pairs; entry of the first block
/// is the start vertex the caller already knows, so it is omitted.
fn block_path(blocks: &Blocks, from: usize, to: usize) -> Vec<(usize, Vertex)> {
    if from == to {
        return Vec::new();
    }
    // Breadth-first over blocks, stepping through shared cut vertices.
    let mut prev: BTreeMap<usize, (usize, Vertex)> = BTreeMap::new();
    let mut frontier = vec![from];
    let mut seen = BTreeSet::from([from]);
    'outer: while !frontier.is_empty() {
        let mut next = Vec::new();
        for b in frontier {
            for (&v, owners) in blocks.of.iter() {
                if !blocks.adj[b].contains_key(&v) || owners.len() < 2 {
                    continue;
                }
                for &nb in owners {
                    if nb != b && seen.insert(nb) {
                        prev.insert(nb, (b, v));
                        if nb == to {
                            break 'outer;
                        }
                        next.push(nb);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, via) = prev[&cur];
        path.push((cur, via));
        cur = p;
    }
    path.reverse();
    path
}

/// All-pairs longest simple-path distances via block-cut decomposition.
///
/// Fails with [`MetricsError::LevelTooHigh`] when any block has cycle rank
/// 3 or more.
pub fn longest_matrix(net: &Network) -> Result<LongestMatrix, MetricsError> {
    let blocks = block_structure(net);
    if blocks.max_rank > 2 {
        return Err(MetricsError::LevelTooHigh {
            rank: blocks.max_rank,
        });
    }
    let taxa: Vec<Taxon> = net.taxa().map(|(t, _)| t.clone()).collect();
    let leaves: Vec<Vertex> = net.taxa().map(|(_, v)| v).collect();
    let n = taxa.len();
    let mut d = vec![0u32; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (leaves[i], leaves[j]);
            let bx = blocks.of[&x][0];
            let by = blocks.of[&y][0];
            let mut total = 0;
            let mut at = x;
            for (block, via) in block_path(&blocks, bx, by) {
                // Close out the previous block up to the shared cut vertex.
                let prev_block = blocks.of[&via]
                    .iter()
                    .copied()
                    .find(|&b| blocks.adj[b].contains_key(&at) && b != block)
                    .expect("cut vertex joins consecutive blocks");
                total += longest_in_block(&blocks.adj[prev_block], at, via);
                at = via;
            }
            total += longest_in_block(&blocks.adj[by], at, y);
            d[i * n + j] = total;
            d[j * n + i] = total;
        }
    }
    Ok(LongestMatrix { taxa, d })
}

/// Paired shortest and longest distances.
pub fn sl_matrix(net: &Network) -> Result<SlMatrix, MetricsError> {
    let shortest = shortest_matrix(net);
    let longest = longest_matrix(net)?;
    Ok(SlMatrix::from_parts(&shortest, &longest))
}

/// Default vertex-count bound for [`brute_force_longest`].
pub const BRUTE_FORCE_CAP: usize = 60;

/// Longest distances by exhaustive enumeration of simple paths, any level.
pub fn brute_force_longest(net: &Network) -> Result<LongestMatrix, MetricsError> {
    brute_force_longest_capped(net, BRUTE_FORCE_CAP)
}

pub fn brute_force_longest_capped(
    net: &Network,
    cap: usize,
) -> Result<LongestMatrix, MetricsError> {
    if net.n_vertices() > cap {
        return Err(MetricsError::TooLarge {
            vertices: net.n_vertices(),
        });
    }
    let taxa: Vec<Taxon> = net.taxa().map(|(t, _)| t.clone()).collect();
    let leaves: Vec<Vertex> = net.taxa().map(|(_, v)| v).collect();
    let n = taxa.len();
    let target: BTreeMap<Vertex, usize> = leaves
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();

    fn rec(
        net: &Network,
        cur: Vertex,
        src: usize,
        target: &BTreeMap<Vertex, usize>,
        visited: &mut BTreeSet<Vertex>,
        len: u32,
        d: &mut [u32],
        n: usize,
    ) {
        if let Some(&j) = target.get(&cur) {
            if len > 0 {
                let v = &mut d[src * n + j];
                *v = (*v).max(len);
                // Leaves have degree 1; a simple path cannot continue.
                return;
            }
        }
        for w in net.neighbors(cur) {
            if visited.insert(w) {
                rec(net, w, src, target, visited, len + 1, d, n);
                visited.remove(&w);
            }
        }
    }

    let mut d = vec![0u32; n * n];
    for i in 0..n {
        let mut visited = BTreeSet::from([leaves[i]]);
        rec(net, leaves[i], i, &target, &mut visited, 0, &mut d, n);
    }
    // Paths were found in both directions; keep the symmetric max.
    for i in 0..n {
        for j in i + 1..n {
            let v = d[i * n + j].max(d[j * n + i]);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    Ok(LongestMatrix { taxa, d })
}

/// Rebuilds a matrix with the `drop` taxa removed and `fresh` added, filling
/// the fresh taxon's cells from `fresh_cell(old index of the kept taxon)`.
/// Cells between kept taxa are copied unchanged.
pub(crate) fn replace_group<M: Matrix>(
    m: &M,
    drop: &BTreeSet<Taxon>,
    fresh: &Taxon,
    mut fresh_cell: impl FnMut(usize) -> (u32, u32),
) -> M {
    let kept: Vec<usize> = (0..m.n())
        .filter(|&i| !drop.contains(&m.taxa()[i]))
        .collect();
    let mut taxa: Vec<Taxon> = kept.iter().map(|&i| m.taxa()[i].clone()).collect();
    let fpos = taxa
        .binary_search(fresh)
        .expect_err("fresh taxon must not collide");
    taxa.insert(fpos, fresh.clone());
    let old_of = move |idx: usize| -> Option<usize> {
        match idx.cmp(&fpos) {
            core::cmp::Ordering::Less => Some(kept[idx]),
            core::cmp::Ordering::Equal => None,
            core::cmp::Ordering::Greater => Some(kept[idx - 1]),
        }
    };
    M::from_fn(taxa, |i, j| match (old_of(i), old_of(j)) {
        (Some(a), Some(b)) => (m.dm_at(a, b), m.dl_at(a, b).unwrap_or(0)),
        (None, Some(b)) | (Some(b), None) => fresh_cell(b),
        (None, None) => unreachable!("fresh taxon appears once"),
    })
}

/// True iff the network's distances reproduce `m` cell-exactly (including
/// the longest components when `m` carries them).
pub fn realizes<M: Matrix>(net: &Network, m: &M) -> bool {
    if net.taxa_set() != m.taxa().iter().cloned().collect::<BTreeSet<String>>() {
        return false;
    }
    let sm = shortest_matrix(net);
    let n = m.n();
    for i in 0..n {
        for j in i + 1..n {
            if sm.dm_at(i, j) != m.dm_at(i, j) {
                return false;
            }
        }
    }
    if M::HAS_LONGEST {
        let Ok(lm) = longest_matrix(net) else {
            return false;
        };
        for i in 0..n {
            for j in i + 1..n {
                if m.dl_at(i, j) != Some(lm.at(i, j)) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::string::ToString;

    #[test]
    fn golden_matrix_matches_table() {
        let m = sl_matrix(&fixtures::golden_network()).expect("level 2");
        for (x, y, want) in fixtures::golden_sl_cells() {
            assert_eq!(m.pair(x, y), want, "cell ({x},{y})");
        }
    }

    #[test]
    fn two_leaf_edge_distances() {
        let net = Network::from_parts([(0, 1)], [("x".to_string(), 0), ("y".to_string(), 1)]);
        let m = sl_matrix(&net).unwrap();
        assert_eq!(m.pair("x", "y"), (1, 1));
        assert!(matrix_violations(&m).is_empty());
    }

    #[test]
    fn tree_shortest_equals_longest() {
        let net = Network::from_parts(
            [(0, 4), (1, 4), (4, 3), (3, 2), (3, 5)],
            [
                ("p".to_string(), 0),
                ("q".to_string(), 1),
                ("r".to_string(), 2),
                ("s".to_string(), 5),
            ],
        );
        let m = sl_matrix(&net).unwrap();
        for x in ["p", "q", "r", "s"] {
            for y in ["p", "q", "r", "s"] {
                if x < y {
                    let (dm, dl) = m.pair(x, y);
                    assert_eq!(dm, dl);
                }
            }
        }
    }

    #[test]
    fn ambiguous_pair_shortest_same_longest_differ() {
        let (first, second) = fixtures::ambiguous_pair();
        assert_eq!(shortest_matrix(&first), shortest_matrix(&second));
        let l1 = longest_matrix(&first).unwrap();
        let l2 = longest_matrix(&second).unwrap();
        assert_ne!(l1, l2);
        assert_eq!(l1.get("a", "b"), 6);
        assert_eq!(l1.get("c", "d"), 4);
        assert_eq!(l2.get("a", "b"), 4);
        assert_eq!(l2.get("c", "d"), 6);
    }

    #[test]
    fn structured_longest_matches_brute_force_on_fixtures() {
        for net in [
            fixtures::golden_network(),
            fixtures::ambiguous_pair().0,
            fixtures::ambiguous_pair().1,
        ] {
            assert_eq!(
                longest_matrix(&net).unwrap(),
                brute_force_longest(&net).unwrap()
            );
        }
    }

    #[test]
    fn grid_rejected_by_structured_longest() {
        let grid = fixtures::level3_grid();
        assert_eq!(
            longest_matrix(&grid),
            Err(MetricsError::LevelTooHigh { rank: 3 })
        );
        assert!(brute_force_longest(&grid).is_ok());
    }

    #[test]
    fn brute_force_cap_enforced() {
        let net = fixtures::golden_network();
        assert_eq!(
            brute_force_longest_capped(&net, 5),
            Err(MetricsError::TooLarge { vertices: 20 })
        );
    }

    #[test]
    fn golden_matrix_satisfies_invariants() {
        let m = sl_matrix(&fixtures::golden_network()).unwrap();
        assert!(matrix_violations(&m).is_empty());
        assert!(matrix_violations(&m.shortest()).is_empty());
    }

    #[test]
    fn realizes_detects_mismatch() {
        let (first, second) = fixtures::ambiguous_pair();
        let m1 = sl_matrix(&first).unwrap();
        assert!(realizes(&first, &m1));
        assert!(!realizes(&second, &m1));
        assert!(realizes(&second, &shortest_matrix(&first)));
    }
}
