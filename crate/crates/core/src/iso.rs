//! Leaf-label-preserving isomorphism via canonical labelling.
//!
//! Vertices are recoloured by iterative refinement seeded with taxon ranks;
//! remaining symmetric vertices are individualized one class at a time and
//! the lexicographically smallest relabelled encoding over all branches is
//! the canonical form. Networks compare equal up to isomorphism exactly when
//! their canonical forms match, so the form doubles as a deterministic sort
//! and deduplication key.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::network::{Network, Taxon, Vertex};

/// Canonical relabelling of a network: vertices renamed to `0..n`, edges
/// sorted, taxa mapped to their new leaf ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub edges: Vec<(u32, u32)>,
    pub taxa: Vec<(Taxon, u32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoError {
    /// The networks carry different taxon sets.
    TaxaMismatch,
}

/// True iff a graph isomorphism exists that maps each taxon's leaf in `a`
/// to the same taxon's leaf in `b`.
pub fn is_isomorphic(a: &Network, b: &Network) -> Result<bool, IsoError> {
    if a.taxa_set() != b.taxa_set() {
        return Err(IsoError::TaxaMismatch);
    }
    if a.n_vertices() != b.n_vertices() || a.n_edges() != b.n_edges() {
        return Ok(false);
    }
    Ok(canonical_form(a) == canonical_form(b))
}

/// Computes the canonical form. Two networks on the same taxa are isomorphic
/// iff their canonical forms are equal.
pub fn canonical_form(net: &Network) -> CanonicalForm {
    let verts: Vec<Vertex> = net.vertices().collect();
    let index: BTreeMap<Vertex, usize> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let adj: Vec<Vec<usize>> = verts
        .iter()
        .map(|&v| net.neighbors(v).map(|u| index[&u]).collect())
        .collect();

    // Seed colours: taxon rank + 1 for labelled leaves, 0 for the rest.
    let mut colors = Vec::from_iter(core::iter::repeat(0usize).take(verts.len()));
    for (rank, (_, v)) in net.taxa().enumerate() {
        colors[index[&v]] = rank + 1;
    }

    let mut best: Option<CanonicalForm> = None;
    search(net, &verts, &adj, colors, &mut best);
    best.expect("at least one labelling branch")
}

fn search(
    net: &Network,
    verts: &[Vertex],
    adj: &[Vec<usize>],
    mut colors: Vec<usize>,
    best: &mut Option<CanonicalForm>,
) {
    refine(&mut colors, adj);
    let n = colors.len();
    let mut class_size = Vec::from_iter(core::iter::repeat(0usize).take(n));
    for &c in &colors {
        class_size[c] += 1;
    }
    // First colour whose class is not a singleton, if any.
    let split = colors
        .iter()
        .copied()
        .filter(|&c| class_size[c] > 1)
        .min();
    match split {
        None => {
            let form = encode(net, verts, &colors);
            if best.as_ref().is_none_or(|b| form < *b) {
                *best = Some(form);
            }
        }
        Some(c) => {
            for v in 0..n {
                if colors[v] != c {
                    continue;
                }
                let mut branch = colors.clone();
                // Distinguish v from its class; rank compression inside
                // refine() turns the marker into a proper colour.
                branch[v] = n + 1;
                search(net, verts, adj, branch, best);
            }
        }
    }
}

/// Iteratively recolours vertices by (own colour, sorted neighbour colours)
/// until the partition stabilizes. Colour ids are ranks of the sorted
/// signature set, so they are invariant under vertex renumbering.
fn refine(colors: &mut Vec<usize>, adj: &[Vec<usize>]) {
    let n = colors.len();
    loop {
        let mut sigs: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut ns: Vec<usize> = adj[v].iter().map(|&u| colors[u]).collect();
            ns.sort_unstable();
            sigs.push((colors[v], ns));
        }
        let mut sorted: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let rank: BTreeMap<&(usize, Vec<usize>), usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, i))
            .collect();
        let next: Vec<usize> = sigs.iter().map(|s| rank[s]).collect();
        let stabilized = next == *colors;
        *colors = next;
        if stabilized {
            return;
        }
    }
}

fn encode(net: &Network, verts: &[Vertex], colors: &[usize]) -> CanonicalForm {
    // Discrete partition: colour is the new vertex id.
    let relabel: BTreeMap<Vertex, u32> = verts
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, colors[i] as u32))
        .collect();
    let mut edges: Vec<(u32, u32)> = net
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (relabel[&u], relabel[&v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    let taxa: Vec<(Taxon, u32)> = net
        .taxa()
        .map(|(t, v)| (t.clone(), relabel[&v]))
        .collect();
    CanonicalForm { edges, taxa }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::string::ToString;

    fn relabelled(net: &Network, shift: Vertex) -> Network {
        let edges: Vec<_> = net
            .edges()
            .into_iter()
            .map(|(u, v)| (v * 2 + shift + 7, u * 2 + shift + 7))
            .collect();
        let taxa: Vec<_> = net
            .taxa()
            .map(|(t, v)| (t.clone(), v * 2 + shift + 7))
            .collect();
        Network::from_parts(edges, taxa)
    }

    #[test]
    fn identity_is_isomorphic() {
        let net = fixtures::golden_network();
        assert_eq!(is_isomorphic(&net, &net), Ok(true));
    }

    #[test]
    fn vertex_renaming_is_isomorphic() {
        let net = fixtures::golden_network();
        assert_eq!(is_isomorphic(&net, &relabelled(&net, 3)), Ok(true));
        let demo = fixtures::genside_demo();
        assert_eq!(is_isomorphic(&demo, &relabelled(&demo, 1)), Ok(true));
    }

    #[test]
    fn ambiguous_pair_not_isomorphic() {
        let (first, second) = fixtures::ambiguous_pair();
        assert_eq!(is_isomorphic(&first, &second), Ok(false));
    }

    #[test]
    fn label_swap_detected() {
        // Same shape, two taxa exchanged: not label-preserving isomorphic
        // because the triangle leaves sit at distance 3, the cherry at 2.
        let a = Network::from_parts(
            [(0, 1), (1, 2), (2, 0), (0, 10), (1, 11), (2, 3), (3, 12), (3, 13)],
            [
                ("w".to_string(), 10),
                ("x".to_string(), 11),
                ("y".to_string(), 12),
                ("z".to_string(), 13),
            ],
        );
        let b = Network::from_parts(
            [(0, 1), (1, 2), (2, 0), (0, 10), (1, 11), (2, 3), (3, 12), (3, 13)],
            [
                ("w".to_string(), 10),
                ("y".to_string(), 11),
                ("x".to_string(), 12),
                ("z".to_string(), 13),
            ],
        );
        assert_eq!(is_isomorphic(&a, &b), Ok(false));
    }

    #[test]
    fn taxa_mismatch_is_an_error() {
        let a = Network::from_parts([(0, 1)], [("x".to_string(), 0), ("y".to_string(), 1)]);
        let b = Network::from_parts([(0, 1)], [("x".to_string(), 0), ("q".to_string(), 1)]);
        assert_eq!(is_isomorphic(&a, &b), Err(IsoError::TaxaMismatch));
    }

    #[test]
    fn canonical_form_is_stable_under_renaming() {
        let (first, _) = fixtures::ambiguous_pair();
        assert_eq!(canonical_form(&first), canonical_form(&relabelled(&first, 9)));
    }
}
