//! End-to-end acceptance checks: golden fixtures plus seeded property
//! sweeps, each with a wall-clock budget. Every check prints one pass or
//! fail line; run with `--nocapture` to see them all.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use phynet_core::altpath::{build_altpath, is_shortest_reconstructible, similar};
use phynet_core::chains::{chain_adjacency, chains_from_matrix};
use phynet_core::decompose::bridges;
use phynet_core::fixtures;
use phynet_core::iso::is_isomorphic;
use phynet_core::metrics::{
    brute_force_longest, longest_matrix, realizes, shortest_matrix, sl_matrix,
};
use phynet_core::network::Taxon;
use phynet_core::reconstruct::{
    extract_triples_and_bulbs, reconstruct_genside, reconstruct_shortest, reconstruct_sl,
    ReconstructionResult,
};
use phynet_core::splits::{all_splits, is_cut_split, Split};
use phynet_core::testkit::{random_colored_tree, random_network, GenParams};

fn criterion(name: &str, limit: Duration, body: impl FnOnce()) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    if result.is_ok() && in_time {
        println!("{name}: pass ({elapsed:.2?})");
    } else {
        println!("{name}: fail ({elapsed:.2?}, limit {limit:.2?})");
    }
    if let Err(cause) = result {
        resume_unwind(cause);
    }
    assert!(in_time, "{name} exceeded its {limit:?} budget: {elapsed:?}");
}

fn assert_unique_iso(result: &ReconstructionResult, want: &phynet_core::network::Network, tag: &str) {
    match result {
        ReconstructionResult::Unique(got) => {
            assert_eq!(is_isomorphic(got, want), Ok(true), "{tag}: wrong network");
        }
        other => panic!("{tag}: expected unique reconstruction, got {other:?}"),
    }
}

#[test]
fn criterion_1_golden_sl_matrix() {
    criterion("golden sl matrix", Duration::from_secs(1), || {
        let net = fixtures::golden_network();
        let m = sl_matrix(&net).expect("matrix computes");
        let cells = fixtures::golden_sl_cells();
        assert_eq!(cells.len(), 28, "8 taxa give 28 upper-triangle cells");
        for (x, y, want) in cells {
            assert_eq!(m.pair(x, y), want, "cell ({x},{y})");
        }
    });
}

#[test]
fn criterion_2_ambiguous_pair() {
    criterion("ambiguous pair", Duration::from_secs(5), || {
        let (first, second) = fixtures::ambiguous_pair();
        let m = shortest_matrix(&first);
        assert_eq!(m, shortest_matrix(&second), "shortest matrices must agree");
        let l1 = longest_matrix(&first).expect("longest computes");
        let l2 = longest_matrix(&second).expect("longest computes");
        let differing = {
            let taxa = l1.taxa().to_vec();
            let mut count = 0;
            for i in 0..taxa.len() {
                for j in (i + 1)..taxa.len() {
                    if l1.at(i, j) != l2.get(&taxa[i], &taxa[j]) {
                        count += 1;
                    }
                }
            }
            count
        };
        assert!(differing >= 1, "longest matrices must differ somewhere");
        match reconstruct_shortest(&m) {
            ReconstructionResult::Ambiguous(nets) => {
                assert_eq!(nets.len(), 2, "exactly two survivors");
                assert_eq!(is_isomorphic(&nets[0], &nets[1]), Ok(false));
                for net in &nets {
                    assert!(realizes(net, &m), "survivor must realize the matrix");
                }
                assert!(nets.iter().any(|n| is_isomorphic(n, &first) == Ok(true)));
                assert!(nets.iter().any(|n| is_isomorphic(n, &second) == Ok(true)));
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
    });
}

#[test]
fn criterion_3_sl_roundtrip() {
    criterion("sl round trip x500", Duration::from_secs(300), || {
        for seed in 0..500u64 {
            let p = GenParams {
                leaves: (5, 20),
                allow_bad_blobs: true,
                seed,
                ..GenParams::default()
            };
            let net = random_network(&p).expect("generation succeeds");
            let m = sl_matrix(&net).expect("matrix computes");
            assert_unique_iso(&reconstruct_sl(&m), &net, &format!("seed {seed}"));
        }
    });
}

#[test]
fn criterion_4_shortest_roundtrip_without_bad_blobs() {
    criterion("shortest round trip x300", Duration::from_secs(180), || {
        for seed in 0..300u64 {
            let p = GenParams {
                leaves: (5, 20),
                allow_bad_blobs: false,
                seed,
                ..GenParams::default()
            };
            let net = random_network(&p).expect("generation succeeds");
            let m = shortest_matrix(&net);
            assert_unique_iso(&reconstruct_shortest(&m), &net, &format!("seed {seed}"));
        }
    });
}

#[test]
fn criterion_5_split_finder_equivalence() {
    criterion("split finder equivalence x300", Duration::from_secs(180), || {
        for seed in 0..300u64 {
            let p = GenParams {
                leaves: (5, 16),
                allow_bad_blobs: true,
                seed,
                ..GenParams::default()
            };
            let net = random_network(&p).expect("generation succeeds");
            let m = shortest_matrix(&net);
            let from_matrix = all_splits(&m).expect("splits compute");
            let all: BTreeSet<Taxon> = net.taxa_set();
            let structural: BTreeSet<Split> = bridges(&net)
                .into_iter()
                .map(|(u, v)| {
                    let side = net.taxa_beyond(u, v);
                    assert!(!side.is_empty() && side.len() < all.len(), "seed {seed}");
                    let other = all.difference(&side).cloned().collect();
                    Split::new(side, other)
                })
                .collect();
            assert_eq!(from_matrix, structural, "seed {seed}");
        }
        // Distance conditions can hold without a witnessing cut-edge once a
        // blob of cycle rank 3 is present: the taxon pair (a, ap) passes the
        // matrix test while every bridge of the fixture is a pendant edge.
        let grid = fixtures::level3_grid();
        let m = shortest_matrix(&grid);
        let side = BTreeSet::from(["a".to_string(), "ap".to_string()]);
        assert_eq!(is_cut_split(&m, &side), Ok(true));
        for (u, v) in bridges(&grid) {
            assert!(grid.is_leaf(u) || grid.is_leaf(v));
        }
    });
}

#[test]
fn criterion_6_longest_distance_oracle() {
    criterion("longest distance oracle x200", Duration::from_secs(180), || {
        for seed in 0..200u64 {
            let p = GenParams {
                leaves: (4, 12),
                blobs: (1, 3),
                allow_bad_blobs: true,
                seed,
                ..GenParams::default()
            };
            let net = random_network(&p).expect("generation succeeds");
            assert!(net.vertices().count() <= 50, "seed {seed}: network too big");
            let dp = longest_matrix(&net).expect("structured longest computes");
            let brute = brute_force_longest(&net).expect("brute force computes");
            assert_eq!(dp, brute, "seed {seed}");
        }
    });
}

#[test]
fn criterion_7_altpath_soundness() {
    criterion("alt-path soundness x100+x200", Duration::from_secs(300), || {
        for seed in 0..100u64 {
            let t = random_colored_tree((2, 8), seed).expect("tree generation succeeds");
            let n1 = build_altpath(&t).expect("structure builds");
            let n2 = build_altpath(&similar(&t)).expect("partner builds");
            assert_eq!(
                shortest_matrix(&n1),
                shortest_matrix(&n2),
                "seed {seed}: shortest must agree"
            );
            assert_ne!(
                longest_matrix(&n1).expect("longest computes"),
                longest_matrix(&n2).expect("longest computes"),
                "seed {seed}: longest must differ"
            );
        }
        for seed in 0..200u64 {
            let p = GenParams {
                leaves: (5, 16),
                allow_bad_blobs: true,
                seed,
                ..GenParams::default()
            };
            let net = random_network(&p).expect("generation succeeds");
            let m = shortest_matrix(&net);
            let detected_unique = is_shortest_reconstructible(&net);
            let actually_unique = match reconstruct_shortest(&m) {
                ReconstructionResult::Unique(got) => {
                    assert_eq!(is_isomorphic(&got, &net), Ok(true), "seed {seed}");
                    true
                }
                ReconstructionResult::Ambiguous(_) => false,
                other => panic!("seed {seed}: unexpected {other:?}"),
            };
            assert_eq!(detected_unique, actually_unique, "seed {seed}");
        }
    });
}

#[test]
fn criterion_8_genside_roundtrip() {
    criterion("generator side round trip x200", Duration::from_secs(180), || {
        for seed in 0..200u64 {
            let p = GenParams {
                leaves: (6, 40),
                blobs: (1, 4),
                require_leaf_every_side: true,
                max_level: 1 + (seed % 3) as u32,
                seed,
                ..GenParams::default()
            };
            let net = random_network(&p).expect("generation succeeds");
            let m = shortest_matrix(&net);
            assert_unique_iso(&reconstruct_genside(&m), &net, &format!("seed {seed}"));
        }
        let demo = fixtures::genside_demo();
        let m = shortest_matrix(&demo);
        let chs = chains_from_matrix(&m).expect("chains compute");
        let names: Vec<char> = chs
            .iter()
            .map(|c| c[0].chars().next().expect("nonempty taxon"))
            .collect();
        let adj = chain_adjacency(&m, &chs);
        let sys = extract_triples_and_bulbs(&m, &chs, &adj).expect("system extracts");
        let triple_names: BTreeSet<[char; 3]> = sys
            .triples
            .iter()
            .map(|t| {
                let mut v = [names[t[0].0], names[t[1].0], names[t[2].0]];
                v.sort_unstable();
                v
            })
            .collect();
        let expected: BTreeSet<[char; 3]> = [
            ['a', 'b', 'f'],
            ['a', 'c', 'd'],
            ['b', 'c', 'e'],
            ['d', 'e', 'g'],
            ['f', 'g', 'h'],
        ]
        .into_iter()
        .collect();
        assert_eq!(triple_names, expected);
        let bulb_names: Vec<(char, char)> = sys
            .bulbs
            .iter()
            .map(|(petal, partner, _)| (names[*petal], names[*partner]))
            .collect();
        assert_eq!(bulb_names, [('i', 'h')]);
        assert_unique_iso(&reconstruct_genside(&m), &demo, "demo fixture");
    });
}
