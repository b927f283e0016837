//! Seeded random instance generation and round-trip verification.
//!
//! Networks are grown constructively so every sample is valid by
//! construction: the level-2 generator starts from a two-leaf edge and
//! repeatedly expands a random leaf into a cherry or a pendant blob, while
//! the leaf-on-every-side generator assembles small cyclic pieces into a
//! tree joined by bridges and instantiates every generator side with a
//! chain. All randomness flows from an explicit seed through a counter-mode
//! stream cipher, so outputs are bitwise reproducible.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::altpath::{Color, ColoredTree};
use crate::decompose::{self, Blob};
use crate::iso::is_isomorphic;
use crate::metrics::{shortest_matrix, sl_matrix};
use crate::network::{self, Network, Taxon, Vertex};
use crate::pendant::{self, PendantForm};
use crate::reconstruct::{self, expand_cherry_net, ReconstructionResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenError {
    InfeasibleParams,
}

/// Knobs for [`random_network`]. Ranges are inclusive. Chain lengths are
/// advisory: they are raised to structural minimums (a loop side needs two
/// vertices, a pendant cycle avoiding the bad shapes needs a chain of
/// four) and trimmed when the leaf budget runs out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub leaves: (u32, u32),
    pub blobs: (u32, u32),
    /// Sampling weights for blob levels 0 through 2. Index 0 concerns the
    /// tree parts and never binds; in leaf-on-every-side mode index 2 also
    /// weights the higher-level pieces.
    pub level_weights: [u32; 3],
    pub chain_lengths: (u32, u32),
    pub allow_bad_blobs: bool,
    pub require_leaf_every_side: bool,
    pub max_level: u32,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            leaves: (5, 12),
            blobs: (1, 4),
            level_weights: [2, 2, 2],
            chain_lengths: (1, 3),
            allow_bad_blobs: false,
            require_leaf_every_side: false,
            max_level: 2,
            seed: 0,
        }
    }
}

fn rand_below(rng: &mut ChaCha8Rng, bound: u32) -> u32 {
    if bound <= 1 {
        0
    } else {
        rng.next_u32() % bound
    }
}

fn pick_range(rng: &mut ChaCha8Rng, (lo, hi): (u32, u32)) -> Result<u32, GenError> {
    if lo > hi {
        return Err(GenError::InfeasibleParams);
    }
    Ok(lo + rand_below(rng, hi - lo + 1))
}

fn weighted<T: Copy>(rng: &mut ChaCha8Rng, options: &[(T, u32)]) -> Option<T> {
    let total: u32 = options.iter().map(|&(_, w)| w).sum();
    if total == 0 {
        return None;
    }
    let mut roll = rand_below(rng, total);
    for &(value, w) in options {
        if roll < w {
            return Some(value);
        }
        roll -= w;
    }
    None
}

/// Chain lengths for a group of chains: per-chain minimums, raised toward
/// the advisory maximum `chi`, with the group total capped at `cap`.
fn distribute(rng: &mut ChaCha8Rng, mins: &[u32], chi: u32, cap: u32) -> Vec<u32> {
    let maxs: Vec<u32> = mins.iter().map(|&m| m.max(chi)).collect();
    let total_min: u32 = mins.iter().sum();
    let total_max: u32 = maxs.iter().sum::<u32>().min(cap).max(total_min);
    let mut extra = rand_below(rng, total_max - total_min + 1);
    let mut lens = mins.to_vec();
    while extra > 0 {
        let open: Vec<usize> = (0..lens.len()).filter(|&i| lens[i] < maxs[i]).collect();
        let i = open[rand_below(rng, open.len() as u32) as usize];
        lens[i] += 1;
        extra -= 1;
    }
    lens
}

struct Names {
    counter: u32,
}

impl Names {
    fn new() -> Names {
        Names { counter: 0 }
    }

    fn next(&mut self) -> Taxon {
        self.counter += 1;
        format!("t{}", self.counter)
    }

    fn chain(&mut self, len: u32) -> Vec<Taxon> {
        (0..len).map(|_| self.next()).collect()
    }
}

/// Generates a valid network honoring the parameters; deterministic for a
/// fixed seed.
pub fn random_network(p: &GenParams) -> Result<Network, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    if p.require_leaf_every_side {
        grow_genside(p, &mut rng)
    } else {
        grow_level2(p, &mut rng)
    }
}

/// Taxa hanging directly on the blob.
fn blob_taxa(net: &Network, blob: &Blob) -> BTreeSet<Taxon> {
    blob.vertices
        .iter()
        .flat_map(|&v| net.neighbors(v))
        .filter_map(|w| net.taxon_of(w).cloned())
        .collect()
}

/// Pendant blobs of the network, as taxa sets. A blob carrying every
/// taxon has no attachment and therefore no pendant shape; it is skipped.
pub fn pendant_blob_parts(net: &Network) -> Vec<BTreeSet<Taxon>> {
    let d = decompose::decompose(net);
    d.blobs
        .iter()
        .filter(|blob| {
            decompose::incident_cut_edges(net, blob)
                .iter()
                .filter(|&&(_, to_leaf)| !to_leaf)
                .count()
                <= 1
        })
        .map(|blob| blob_taxa(net, blob))
        .filter(|part| part.len() < net.n_taxa())
        .collect()
}

/// Smallest chain totals for a pendant cycle and a pendant level-2 blob,
/// given the advisory lower bound on chain lengths. Single-chain shapes
/// need two leaves to stay simple and split-distinct, four when the bad
/// shapes are excluded.
fn min_chain_totals(clo: u32, allow_bad: bool) -> (u32, u32) {
    let single = clo.max(if allow_bad { 2 } else { 4 });
    (single, single.min(2 * clo))
}

fn grow_level2(p: &GenParams, rng: &mut ChaCha8Rng) -> Result<Network, GenError> {
    let (clo, chi) = p.chain_lengths;
    if clo < 1 || clo > chi {
        return Err(GenError::InfeasibleParams);
    }
    let (llo, lhi) = p.leaves;
    let llo = llo.max(2);
    if llo > lhi {
        return Err(GenError::InfeasibleParams);
    }
    let cap = p.max_level.min(2);
    let level_options: Vec<(u32, u32)> = [(1u32, p.level_weights[1]), (2, p.level_weights[2])]
        .into_iter()
        .filter(|&(lvl, w)| lvl <= cap && w > 0)
        .collect();
    let (lvl1_min, lvl2_min) = min_chain_totals(clo, p.allow_bad_blobs);
    // Net leaf gain of the cheapest blob each level offers.
    let blob_min_cost = level_options
        .iter()
        .map(|&(lvl, _)| if lvl == 1 { lvl1_min - 1 } else { lvl2_min - 1 })
        .min();
    let (blo, bhi) = p.blobs;
    let bhi = match blob_min_cost {
        Some(cost) => bhi.min((lhi - 2) / cost),
        None => 0,
    };
    if blo > bhi {
        return Err(GenError::InfeasibleParams);
    }
    let target_blobs = pick_range(rng, (blo, bhi))?;
    let blob_min_cost = blob_min_cost.unwrap_or(0);
    let floor = 2 + target_blobs * blob_min_cost;
    let target_leaves = pick_range(rng, (llo.max(floor), lhi))?;

    let mut names = Names::new();
    let (t1, t2) = (names.next(), names.next());
    let mut net = Network::from_parts([(0, 1)], [(t1, 0), (t2, 1)]);
    let mut leaves = 2u32;
    let mut remaining = target_blobs;

    // A blob that replaced one of the two starting leaves hangs off a bare
    // leaf, so growing any of its chain leaves would leave it pendant but
    // seen from a different attachment, where a harmless shape can read as
    // a bad one. Freeze those chain leaves until the sibling is expanded.
    let mut frozen: BTreeSet<Taxon> = BTreeSet::new();
    let mut sibling: Option<Taxon> = None;

    let cherry_w = p.level_weights[0].max(1);
    let blob_w = level_options.iter().map(|&(_, w)| w).sum::<u32>().max(1);

    while leaves < target_leaves || remaining > 0 {
        let blob_ok = remaining > 0;
        let cherry_ok = target_leaves - leaves > remaining * blob_min_cost;
        let do_blob = match (blob_ok, cherry_ok) {
            (true, false) => true,
            (false, true) => false,
            _ => weighted(rng, &[(true, blob_w), (false, cherry_w)]).unwrap(),
        };
        let eligible: Vec<&Taxon> = net
            .taxa()
            .map(|(t, _)| t)
            .filter(|t| !frozen.contains(*t))
            .collect();
        let z = eligible[rand_below(rng, eligible.len() as u32) as usize].clone();
        if do_blob {
            // Leaf budget for this blob, leaving minimum room for the rest.
            let allowance = target_leaves - leaves - (remaining - 1) * blob_min_cost;
            let form =
                sample_blob_form(rng, &level_options, allowance, (clo, chi), p.allow_bad_blobs, &mut names)
                    .ok_or(GenError::InfeasibleParams)?;
            if net.n_taxa() == 2 {
                sibling = net.taxa().map(|(t, _)| t.clone()).find(|t| *t != z);
                frozen = form.taxa();
            }
            leaves += form.taxa().len() as u32 - 1;
            net = pendant::expand_pendant(&net, &z, &form).map_err(|_| GenError::InfeasibleParams)?;
            remaining -= 1;
        } else {
            let (x, y) = (names.next(), names.next());
            net = expand_cherry_net(&net, &z, &x, &y).map_err(|_| GenError::InfeasibleParams)?;
            leaves += 1;
        }
        if sibling.as_ref() == Some(&z) {
            frozen.clear();
            sibling = None;
        }
    }
    debug_assert!(network::validate(&net).is_empty());
    Ok(net)
}

/// Samples a pendant blob form replacing one leaf and adding at most
/// `allowance` net new leaves.
fn sample_blob_form(
    rng: &mut ChaCha8Rng,
    level_options: &[(u32, u32)],
    allowance: u32,
    (clo, chi): (u32, u32),
    allow_bad: bool,
    names: &mut Names,
) -> Option<PendantForm> {
    let budget = allowance + 1;
    let (lvl1_min, lvl2_min) = min_chain_totals(clo, allow_bad);
    let feasible: Vec<(u32, u32)> = level_options
        .iter()
        .copied()
        .filter(|&(lvl, _)| if lvl == 1 { lvl1_min <= budget } else { lvl2_min <= budget })
        .collect();
    let level = weighted(rng, &feasible)?;
    if level == 1 {
        let lens = distribute(rng, &[lvl1_min], chi, budget);
        return Some(PendantForm::Level1 { a: names.chain(lens[0]) });
    }
    let shapes: [(&str, Vec<u32>); 6] = [
        ("a000", Vec::from([lvl1_min])),
        ("ab00", Vec::from([clo, clo])),
        ("a0c0", Vec::from([clo, clo])),
        ("abc0", Vec::from([clo, clo, clo])),
        ("a0cd", Vec::from([clo, clo, clo])),
        ("abcd", Vec::from([clo, clo, clo, clo])),
    ];
    let open: Vec<(usize, u32)> = shapes
        .iter()
        .enumerate()
        .filter(|(_, (_, mins))| mins.iter().sum::<u32>() <= budget)
        .map(|(i, _)| (i, 1))
        .collect();
    let idx = weighted(rng, &open)?;
    let (tag, mins) = &shapes[idx];
    let lens = distribute(rng, mins, chi, budget);
    let mut parts = lens.iter().map(|&len| names.chain(len)).collect::<Vec<_>>().into_iter();
    let mut next = move || parts.next().unwrap();
    Some(match *tag {
        "a000" => PendantForm::A000 { a: next() },
        "ab00" => PendantForm::AB00 { a: next(), b: next() },
        "a0c0" => PendantForm::A0C0 { a: next(), c: next() },
        "abc0" => PendantForm::ABC0 { a: next(), b: next(), c: next() },
        "a0cd" => PendantForm::A0CD { a: next(), c: next(), d: next() },
        _ => PendantForm::ABCD { a: next(), b: next(), c: next(), d: next() },
    })
}

/// Building blocks for leaf-on-every-side corpora. Ports are generator
/// vertices with one slot left open for a bridge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Piece {
    Bulb,
    PendantL2,
    K4Port,
    ThetaOpen,
    Triangle,
    GadgetL2,
    ThetaClosed,
    K4,
}

impl Piece {
    fn ports(self) -> u32 {
        match self {
            Piece::Bulb | Piece::PendantL2 | Piece::K4Port => 1,
            Piece::ThetaOpen => 2,
            Piece::Triangle | Piece::GadgetL2 => 3,
            Piece::ThetaClosed | Piece::K4 => 0,
        }
    }
}

/// Lays out a piece on fresh vertices: its sides with their structural
/// minimum chain lengths, and its port vertices.
fn instantiate_piece(piece: Piece, base: &mut Vertex) -> (Vec<(Vertex, Vertex, u32)>, Vec<Vertex>) {
    let mut fresh = || {
        let v = *base;
        *base += 1;
        v
    };
    match piece {
        Piece::Bulb => {
            let v = fresh();
            (Vec::from([(v, v, 2)]), Vec::from([v]))
        }
        Piece::PendantL2 => {
            let (p1, p2, v) = (fresh(), fresh(), fresh());
            (
                Vec::from([(p1, p2, 1), (p1, p2, 1), (p1, v, 1), (v, p2, 1)]),
                Vec::from([v]),
            )
        }
        Piece::K4Port => {
            let (a, b, c, d, v) = (fresh(), fresh(), fresh(), fresh(), fresh());
            (
                Vec::from([
                    (a, b, 1),
                    (a, c, 1),
                    (a, d, 1),
                    (b, c, 1),
                    (b, d, 1),
                    (c, v, 1),
                    (v, d, 1),
                ]),
                Vec::from([v]),
            )
        }
        Piece::ThetaOpen => {
            let (u, v) = (fresh(), fresh());
            (Vec::from([(u, v, 1), (u, v, 1)]), Vec::from([u, v]))
        }
        Piece::Triangle => {
            let (a, b, c) = (fresh(), fresh(), fresh());
            (
                Vec::from([(a, b, 1), (b, c, 1), (a, c, 1)]),
                Vec::from([a, b, c]),
            )
        }
        Piece::GadgetL2 => {
            let (n, s) = (fresh(), fresh());
            let (v1, v2, v3) = (fresh(), fresh(), fresh());
            (
                Vec::from([
                    (n, v1, 1),
                    (v1, s, 1),
                    (n, v2, 1),
                    (v2, s, 1),
                    (n, v3, 1),
                    (v3, s, 1),
                ]),
                Vec::from([v1, v2, v3]),
            )
        }
        Piece::ThetaClosed => {
            let (p1, p2) = (fresh(), fresh());
            (
                Vec::from([(p1, p2, 1), (p1, p2, 1), (p1, p2, 1)]),
                Vec::new(),
            )
        }
        Piece::K4 => {
            let (a, b, c, d) = (fresh(), fresh(), fresh(), fresh());
            (
                Vec::from([
                    (a, b, 1),
                    (a, c, 1),
                    (a, d, 1),
                    (b, c, 1),
                    (b, d, 1),
                    (c, d, 1),
                ]),
                Vec::new(),
            )
        }
    }
}

fn grow_genside(p: &GenParams, rng: &mut ChaCha8Rng) -> Result<Network, GenError> {
    if !(1..=3).contains(&p.max_level) {
        return Err(GenError::InfeasibleParams);
    }
    let (blo, bhi) = p.blobs;
    if blo > bhi || bhi == 0 {
        return Err(GenError::InfeasibleParams);
    }
    let mut target_blobs = pick_range(rng, (blo.max(1), bhi))?;
    if target_blobs == 1 && p.max_level == 1 {
        // A lone cycle has no pinned generator vertex, so the smallest
        // level-1 layout uses two blobs.
        if bhi < 2 {
            return Err(GenError::InfeasibleParams);
        }
        target_blobs = 2;
    }

    let level2 = p.max_level >= 2;
    let level3 = p.max_level >= 3;
    let w1 = p.level_weights[1].max(1);
    let w2 = p.level_weights[2].max(1);
    let pieces: Vec<Piece> = if target_blobs == 1 {
        let options: Vec<(Piece, u32)> = [(Piece::ThetaClosed, level2), (Piece::K4, level3)]
            .into_iter()
            .filter(|&(_, ok)| ok)
            .map(|(piece, _)| (piece, 1))
            .collect();
        Vec::from([weighted(rng, &options).ok_or(GenError::InfeasibleParams)?])
    } else {
        // With t three-port, m two-port, and l one-port pieces, ports pair
        // up along the blob tree's bridges exactly when l = t + 2.
        let b = target_blobs;
        let t = rand_below(rng, (b - 2) / 2 + 1);
        let m = b - 2 - 2 * t;
        let l = t + 2;
        let one_port: Vec<(Piece, u32)> = [
            (Piece::Bulb, w1),
            (Piece::PendantL2, if level2 { w2 } else { 0 }),
            (Piece::K4Port, if level3 { w2 } else { 0 }),
        ]
        .into_iter()
        .filter(|&(_, w)| w > 0)
        .collect();
        let three_port: Vec<(Piece, u32)> = [
            (Piece::Triangle, w1),
            (Piece::GadgetL2, if level2 { w2 } else { 0 }),
        ]
        .into_iter()
        .filter(|&(_, w)| w > 0)
        .collect();
        let mut out = Vec::new();
        for _ in 0..t {
            out.push(weighted(rng, &three_port).ok_or(GenError::InfeasibleParams)?);
        }
        for _ in 0..m {
            out.push(Piece::ThetaOpen);
        }
        for _ in 0..l {
            out.push(weighted(rng, &one_port).ok_or(GenError::InfeasibleParams)?);
        }
        out
    };

    // Place pieces in descending port order, bridging each to a random
    // placed piece with a free port; that order keeps one available.
    let mut base: Vertex = 0;
    let mut sides: Vec<(Vertex, Vertex, u32)> = Vec::new();
    let mut placed: Vec<(Vec<Vertex>, u32)> = Vec::new();
    let mut order = pieces;
    order.sort_by_key(|piece| core::cmp::Reverse(piece.ports()));
    for (i, &piece) in order.iter().enumerate() {
        let (piece_sides, ports) = instantiate_piece(piece, &mut base);
        sides.extend(piece_sides);
        let mut free = piece.ports();
        if i > 0 {
            let open: Vec<usize> = placed
                .iter()
                .enumerate()
                .filter(|(_, (_, free))| *free > 0)
                .map(|(j, _)| j)
                .collect();
            let j = open[rand_below(rng, open.len() as u32) as usize];
            let parent = &placed[j];
            let pu = parent.0[parent.0.len() - parent.1 as usize];
            placed[j].1 -= 1;
            sides.push((pu, ports[0], 1));
            free -= 1;
        }
        placed.push((ports, free));
    }
    debug_assert!(placed.iter().all(|(_, free)| *free == 0));

    // Distribute the leaf budget over the sides.
    let (clo, chi) = p.chain_lengths;
    if clo < 1 || clo > chi {
        return Err(GenError::InfeasibleParams);
    }
    let mins: Vec<u32> = sides.iter().map(|&(_, _, m)| m.max(clo)).collect();
    let maxs: Vec<u32> = mins.iter().map(|&m| m.max(chi)).collect();
    let total_min: u32 = mins.iter().sum();
    let total_max: u32 = maxs.iter().sum();
    let (llo, lhi) = p.leaves;
    if llo > lhi || total_min > lhi || total_max < llo {
        return Err(GenError::InfeasibleParams);
    }
    let target = pick_range(rng, (llo.max(total_min), lhi.min(total_max)))?;
    let mut lens = mins.clone();
    let mut extra = target - total_min;
    while extra > 0 {
        let open: Vec<usize> = (0..lens.len()).filter(|&i| lens[i] < maxs[i]).collect();
        let i = open[rand_below(rng, open.len() as u32) as usize];
        lens[i] += 1;
        extra -= 1;
    }

    let mut net = Network::new();
    for v in 0..base {
        net.add_vertex(v);
    }
    let mut names = Names::new();
    for (&(u, v, _), &len) in sides.iter().zip(&lens) {
        let chain = names.chain(len);
        pendant::lay_chain(&mut net, u, v, &chain);
    }
    debug_assert!(network::validate(&net).is_empty());
    Ok(net)
}

/// A random binary tree with a proper 2-coloring, leaf names `l1..`, and
/// pendant sizes drawn from {2, 3}; deterministic for a fixed seed.
pub fn random_colored_tree(leaves: (u32, u32), seed: u64) -> Result<ColoredTree, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = pick_range(&mut rng, leaves)?;
    if n < 2 {
        return Err(GenError::InfeasibleParams);
    }
    let mut edges: Vec<(Vertex, Vertex)> = Vec::from([(0, 1)]);
    let mut leaf_ids: Vec<Vertex> = Vec::from([0, 1]);
    let mut next: Vertex = 2;
    for _ in 2..n {
        let i = rand_below(&mut rng, edges.len() as u32) as usize;
        let (u, v) = edges.swap_remove(i);
        let mid = next;
        let leaf = next + 1;
        next += 2;
        edges.push((u, mid));
        edges.push((mid, v));
        edges.push((mid, leaf));
        leaf_ids.push(leaf);
    }
    // A tree has exactly one proper 2-coloring up to the global flip.
    let flip = rng.next_u32() % 2 == 0;
    let mut colors: BTreeMap<Vertex, Color> = BTreeMap::new();
    let mut stack = Vec::from([(0 as Vertex, flip)]);
    while let Some((v, black)) = stack.pop() {
        if colors.contains_key(&v) {
            continue;
        }
        colors.insert(v, if black { Color::Black } else { Color::Red });
        for &(a, b) in &edges {
            if a == v && !colors.contains_key(&b) {
                stack.push((b, !black));
            } else if b == v && !colors.contains_key(&a) {
                stack.push((a, !black));
            }
        }
    }
    let leaf_data: Vec<(Vertex, Taxon, u8)> = leaf_ids
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, format!("l{}", i + 1), 2 + (rng.next_u32() % 2) as u8))
        .collect();
    let tree = ColoredTree::from_parts(edges, colors, leaf_data);
    debug_assert_eq!(tree.check(), Ok(()));
    Ok(tree)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sl,
    Shortest,
    Genside,
}

/// Outcome of one matrix round trip. `pass` means the input network was
/// recovered: as the unique result, or among the survivors when ambiguity
/// is genuinely possible in shortest mode.
#[derive(Clone, Debug)]
pub struct RoundtripReport {
    pub mode: Mode,
    pub pass: bool,
    pub expected_ambiguous: bool,
    pub survivors: usize,
    pub detail: String,
}

fn report(mode: Mode, pass: bool, ambiguous: bool, survivors: usize, detail: String) -> RoundtripReport {
    RoundtripReport {
        mode,
        pass,
        expected_ambiguous: ambiguous,
        survivors,
        detail,
    }
}

/// Computes the matrix for `mode`, reconstructs, and compares with the
/// input by isomorphism.
pub fn verify_roundtrip(net: &Network, mode: Mode) -> RoundtripReport {
    let result = match mode {
        Mode::Sl => match sl_matrix(net) {
            Ok(m) => reconstruct::reconstruct_sl(&m),
            Err(e) => {
                return report(mode, false, false, 0, format!("matrix computation failed: {e:?}"));
            }
        },
        Mode::Shortest => reconstruct::reconstruct_shortest(&shortest_matrix(net)),
        Mode::Genside => reconstruct::reconstruct_genside(&shortest_matrix(net)),
    };
    match result {
        ReconstructionResult::Unique(out) => {
            if is_isomorphic(&out, net) == Ok(true) {
                report(mode, true, false, 1, String::new())
            } else {
                report(
                    mode,
                    false,
                    false,
                    1,
                    format!(
                        "unique result is not isomorphic to the input ({} vs {} vertices)",
                        out.n_vertices(),
                        net.n_vertices()
                    ),
                )
            }
        }
        ReconstructionResult::Ambiguous(nets) => {
            let hit = nets.iter().any(|n| is_isomorphic(n, net) == Ok(true));
            let ok = mode == Mode::Shortest && hit;
            let detail = if ok {
                String::new()
            } else if !hit {
                format!("input not among {} survivors", nets.len())
            } else {
                format!("{mode:?} mode must be unique but found {} survivors", nets.len())
            };
            report(mode, ok, true, nets.len(), detail)
        }
        ReconstructionResult::Unrealizable(reason) => report(
            mode,
            false,
            false,
            0,
            format!("reconstruction failed: {reason:?} on {} taxa", net.n_taxa()),
        ),
    }
}
