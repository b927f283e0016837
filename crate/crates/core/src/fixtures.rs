//! Hand-built reference networks used across the test suites.
//!
//! Each fixture is a small network whose distances and structure were worked
//! out by hand, so tests can pin algorithm output to known-good values.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::network::Network;

/// Eight-taxon network with two pendant blobs: a level-2 blob of the form
/// `((a),(b),(c1,c2),-)` and a level-1 triangle holding `d1,d2`, joined
/// through a bridge that also carries the cherry `{f,g}`.
///
/// Layout (vertex ids): poles 0,1; main paths 0-2-1 (leaf a), 0-3-1 (leaf b),
/// 0-4-5-6-1 (leaves c1,c2; 6 is the blob's cut vertex); bridge 6-7, 7-9,
/// 7-8; cherry f,g on 8; triangle 9-10-11 with leaves d1,d2.
pub fn golden_network() -> Network {
    Network::from_parts(
        [
            // level-2 blob
            (0, 2),
            (2, 1),
            (0, 3),
            (3, 1),
            (0, 4),
            (4, 5),
            (5, 6),
            (6, 1),
            // bridge and cherry junction
            (6, 7),
            (7, 9),
            (7, 8),
            (8, 18),
            (8, 19),
            // triangle
            (9, 10),
            (9, 11),
            (10, 11),
            // pendant leaf edges
            (2, 12),
            (3, 13),
            (4, 14),
            (5, 15),
            (10, 16),
            (11, 17),
        ],
        [
            ("a".to_string(), 12),
            ("b".to_string(), 13),
            ("c1".to_string(), 14),
            ("c2".to_string(), 15),
            ("d1".to_string(), 16),
            ("d2".to_string(), 17),
            ("f".to_string(), 18),
            ("g".to_string(), 19),
        ],
    )
}

/// The full upper triangle of [`golden_network`]'s sl-distance matrix,
/// 28 cells as `(taxon, taxon, (shortest, longest))`.
pub fn golden_sl_cells() -> Vec<(&'static str, &'static str, (u32, u32))> {
    Vec::from([
        ("a", "b", (4, 8)),
        ("a", "c1", (4, 8)),
        ("a", "c2", (5, 7)),
        ("a", "d1", (7, 12)),
        ("a", "d2", (7, 12)),
        ("a", "f", (6, 10)),
        ("a", "g", (6, 10)),
        ("b", "c1", (4, 8)),
        ("b", "c2", (5, 7)),
        ("b", "d1", (7, 12)),
        ("b", "d2", (7, 12)),
        ("b", "f", (6, 10)),
        ("b", "g", (6, 10)),
        ("c1", "c2", (3, 7)),
        ("c1", "d1", (7, 10)),
        ("c1", "d2", (7, 10)),
        ("c1", "f", (6, 8)),
        ("c1", "g", (6, 8)),
        ("c2", "d1", (6, 11)),
        ("c2", "d2", (6, 11)),
        ("c2", "f", (5, 9)),
        ("c2", "g", (5, 9)),
        ("d1", "d2", (3, 4)),
        ("d1", "f", (5, 6)),
        ("d1", "g", (5, 6)),
        ("d2", "f", (5, 6)),
        ("d2", "g", (5, 6)),
        ("f", "g", (2, 2)),
    ])
}

/// Two non-isomorphic four-taxon networks with identical shortest distances.
///
/// Each joins a pendant level-2 blob of the form `(2,0,0,0)` to a pendant
/// triangle. In the first network the level-2 blob holds `{a,b}`; in the
/// second it holds `{c,d}`. Longest distances tell them apart: the chain
/// inside the level-2 blob yields a longest distance of 6 between its two
/// taxa, the triangle only 4.
pub fn ambiguous_pair() -> (Network, Network) {
    // 0,1 poles; chain vertices 2,3; 4 the blob's cut vertex; 5 the
    // triangle's attachment; 6,7 its leaf spines; leaves 8..=11.
    let shape = [
        (0, 2),
        (2, 3),
        (3, 1),
        (0, 1),
        (0, 4),
        (4, 1),
        (4, 5),
        (5, 6),
        (5, 7),
        (6, 7),
        (2, 8),
        (3, 9),
        (6, 10),
        (7, 11),
    ];
    let first = Network::from_parts(
        shape,
        [
            ("a".to_string(), 8),
            ("b".to_string(), 9),
            ("c".to_string(), 10),
            ("d".to_string(), 11),
        ],
    );
    let second = Network::from_parts(
        shape,
        [
            ("c".to_string(), 8),
            ("d".to_string(), 9),
            ("a".to_string(), 10),
            ("b".to_string(), 11),
        ],
    );
    (first, second)
}

/// Level-3 network on a 2x6 grid with crossed middle rungs.
///
/// The bipartition `{a, ap} | {b, bp}` satisfies both distance conditions
/// for a cut-edge induced split, yet no cut-edge induces it; the split
/// criterion is only guaranteed for networks of level at most 2 and this
/// fixture pins that boundary.
pub fn level3_grid() -> Network {
    // Row 0: vertices 0..=5, row 1: 6..=11; corners are the leaves.
    Network::from_parts(
        [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (6, 7),
            (7, 8),
            (8, 9),
            (9, 10),
            (10, 11),
            (1, 7),
            (2, 9),
            (3, 8),
            (4, 10),
        ],
        [
            ("a".to_string(), 0),
            ("ap".to_string(), 6),
            ("b".to_string(), 5),
            ("bp".to_string(), 11),
        ],
    )
}

/// Level-3 network with a leaf on every generator side: nine 2-leaf chains
/// `a..i` arranged so the end-leaf constructs are the pairwise adjacent
/// triples `(a,b,f), (b,c,e), (a,c,d), (d,e,g), (f,g,h)` and the bulb
/// `(i,h)` with petal `i` (a loop at the `west` vertex).
pub fn genside_demo() -> Network {
    // Generator vertices: north 0, origin 1, sw 2, se 3, east 4, west 5.
    // Chain j in 0..9 (a..i) gets spine vertices 6+2j, 7+2j and leaf
    // vertices 24+2j, 25+2j.
    let sides: [(u32, u32); 9] = [
        (0, 2), // a: north-sw
        (0, 1), // b: north-origin
        (1, 2), // c: origin-sw
        (2, 3), // d: sw-se
        (1, 3), // e: origin-se
        (0, 4), // f: north-east
        (3, 4), // g: se-east
        (4, 5), // h: east-west
        (5, 5), // i: loop at west
    ];
    let names = ["a", "b", "c", "d", "e", "f", "g", "h", "i"];
    let mut net = Network::new();
    let mut labels = Vec::new();
    for (j, &(u, v)) in sides.iter().enumerate() {
        let j = j as u32;
        let (s1, s2) = (6 + 2 * j, 7 + 2 * j);
        let (l1, l2) = (24 + 2 * j, 25 + 2 * j);
        net.add_edge(u, s1);
        net.add_edge(s1, s2);
        net.add_edge(s2, v);
        net.add_edge(s1, l1);
        net.add_edge(s2, l2);
        let mut t1 = names[j as usize].to_string();
        let mut t2 = t1.clone();
        t1.push('1');
        t2.push('2');
        labels.push((t1, l1));
        labels.push((t2, l2));
    }
    for (t, v) in labels {
        net.set_taxon(t, v);
    }
    net
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::validate;
    use alloc::vec;

    #[test]
    fn fixtures_are_valid_networks() {
        assert_eq!(validate(&golden_network()), vec![]);
        let (first, second) = ambiguous_pair();
        assert_eq!(validate(&first), vec![]);
        assert_eq!(validate(&second), vec![]);
        assert_eq!(validate(&level3_grid()), vec![]);
        assert_eq!(validate(&genside_demo()), vec![]);
    }

    #[test]
    fn fixture_sizes() {
        let g = golden_network();
        assert_eq!(g.n_vertices(), 20);
        assert_eq!(g.n_edges(), 22);
        assert_eq!(g.n_taxa(), 8);
        let d = genside_demo();
        assert_eq!(d.n_vertices(), 42);
        assert_eq!(d.n_taxa(), 18);
    }

    #[test]
    fn grid_is_level_3() {
        assert_eq!(crate::decompose::level(&level3_grid()), 3);
    }

    #[test]
    fn genside_demo_is_level_3() {
        assert_eq!(crate::decompose::level(&genside_demo()), 3);
    }

    #[test]
    fn ambiguous_pair_levels() {
        let (first, _) = ambiguous_pair();
        let d = crate::decompose::decompose(&first);
        assert_eq!(d.blobs.len(), 2);
        let mut levels: Vec<u32> = d.blobs.iter().map(|b| b.level()).collect();
        levels.sort_unstable();
        assert_eq!(levels, [1, 2]);
    }
}
