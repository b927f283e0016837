//! Network reconstruction from distance matrices.
//!
//! The main pipeline reduces the matrix step by step: cherries first, then
//! pendant blobs found behind minimal split parts. Once the matrix has no
//! non-trivial split left, the single-blob core is solved by direct
//! enumeration, and the recorded reductions are replayed in reverse on the
//! resulting network. With paired shortest and longest distances every step
//! is forced; from shortest distances alone a single short chain admits two
//! blob readings, so the search branches and keeps every candidate that
//! reproduces the input matrix exactly.
//!
//! A separate pipeline covers networks with a leaf on every generator side,
//! at any level: their shortest matrix pins down end-leaf meeting points
//! (pairwise adjacent triples and bulbs), which assemble into the generator
//! directly.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::chains::{self, Adjacency, Chain};
use crate::iso::{self, CanonicalForm};
use crate::metrics::{self, Matrix, ShortestMatrix, SlMatrix};
use crate::network::{self, Network, Taxon};
use crate::pendant::{self, PendantError, PendantForm};
use crate::splits::{self, SplitError};

/// Cap on bad-blob branch points explored in shortest-only mode.
pub const DEFAULT_BRANCH_BUDGET: u32 = 4096;

/// Cap on generator cover assemblies considered in genside mode.
const MAX_COVERS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnrealizableReason {
    MatrixViolation,
    NoConsistentForm,
    VerificationFailed,
    BranchBudgetExceeded,
    NotGenSideCovered,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReconstructionResult {
    Unique(Network),
    /// Pairwise non-isomorphic networks, sorted by canonical form; every
    /// member realizes the input matrix.
    Ambiguous(Vec<Network>),
    Unrealizable(UnrealizableReason),
}

/// One reduction step, in application order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Cherry {x, y} replaced by the fresh leaf z.
    Cherry { x: Taxon, y: Taxon, z: Taxon },
    /// Pendant blob of the given form replaced by the fresh leaf z.
    Blob { z: Taxon, form: PendantForm },
    /// Middle leaf of a 3-leaf ambiguous chain removed, to be re-inserted
    /// between its neighbours at replay.
    DropMiddle {
        first: Taxon,
        middle: Taxon,
        last: Taxon,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<Step>,
}

/// Undoes the trace on a solved base network, newest step first.
pub fn replay(base: &Network, trace: &ReductionTrace) -> Result<Network, PendantError> {
    let mut net = base.clone();
    for step in trace.steps.iter().rev() {
        net = match step {
            Step::Cherry { x, y, z } => expand_cherry_net(&net, z, x, y)?,
            Step::Blob { z, form } => pendant::expand_pendant(&net, z, form)?,
            Step::DropMiddle {
                first,
                middle,
                last,
            } => insert_middle_leaf(&net, first, middle, last)?,
        };
    }
    Ok(net)
}

/// Replaces the leaf `z` by an internal vertex carrying the new leaves
/// `x` and `y`.
pub(crate) fn expand_cherry_net(
    net: &Network,
    z: &str,
    x: &str,
    y: &str,
) -> Result<Network, PendantError> {
    let v = net
        .leaf_vertex(z)
        .ok_or_else(|| PendantError::UnknownLeaf(z.into()))?;
    for t in [x, y] {
        if net.leaf_vertex(t).is_some() {
            return Err(PendantError::TaxonCollision(t.into()));
        }
    }
    let mut out = net.clone();
    out.remove_taxon(z);
    let lx = out.fresh_vertex();
    out.add_edge(v, lx);
    out.set_taxon(x, lx);
    let ly = out.fresh_vertex();
    out.add_edge(v, ly);
    out.set_taxon(y, ly);
    Ok(out)
}

/// Re-inserts a dropped chain leaf between its two neighbours, whose spine
/// vertices must be adjacent.
fn insert_middle_leaf(
    net: &Network,
    first: &str,
    middle: &str,
    last: &str,
) -> Result<Network, PendantError> {
    let lf = net
        .leaf_vertex(first)
        .ok_or_else(|| PendantError::UnknownLeaf(first.into()))?;
    let ll = net
        .leaf_vertex(last)
        .ok_or_else(|| PendantError::UnknownLeaf(last.into()))?;
    if net.leaf_vertex(middle).is_some() {
        return Err(PendantError::TaxonCollision(middle.into()));
    }
    let sf = net.leaf_neighbor(lf).ok_or(PendantError::NotPendant)?;
    let sl = net.leaf_neighbor(ll).ok_or(PendantError::NotPendant)?;
    if !net.has_edge(sf, sl) {
        return Err(PendantError::NotPendant);
    }
    let mut out = net.clone();
    out.remove_edge(sf, sl);
    let spine = out.fresh_vertex();
    out.add_edge(sf, spine);
    out.add_edge(spine, sl);
    let leaf = out.fresh_vertex();
    out.add_edge(spine, leaf);
    out.set_taxon(middle, leaf);
    Ok(out)
}

struct SearchCtx {
    branches_left: u32,
    exceeded: bool,
    fail: Option<UnrealizableReason>,
}

impl SearchCtx {
    fn note(&mut self, reason: UnrealizableReason) {
        self.fail.get_or_insert(reason);
    }
}

/// Depth-first reduction search. Pushes every (base network, trace) pair
/// whose base realizes its reduced matrix; correctness of the full network
/// is checked after replay.
fn search<M: Matrix>(
    m: &M,
    counter: &mut u32,
    steps: &mut Vec<Step>,
    ctx: &mut SearchCtx,
    found: &mut Vec<(Network, ReductionTrace)>,
) {
    if ctx.exceeded {
        return;
    }
    // Wrong-branch reductions can drive entries under the floor of any
    // genuine leaf-to-leaf distance (two leaves at distance 1 only happen in
    // the two-taxon edge network). Such a matrix can never verify, so cut
    // the branch before later reductions underflow on it.
    if m.n() >= 3 {
        for i in 0..m.n() {
            for j in (i + 1)..m.n() {
                if m.dm_at(i, j) < 2 {
                    ctx.note(UnrealizableReason::NoConsistentForm);
                    return;
                }
            }
        }
    }
    if m.n() >= 3 {
        if let Some((x, y)) = chains::find_cherries(m).into_iter().next() {
            let z = chains::fresh_taxon(|s| m.index_of(s).is_some(), counter);
            match chains::reduce_cherry(m, &x, &y, &z) {
                Ok(m2) => {
                    steps.push(Step::Cherry { x, y, z });
                    search(&m2, counter, steps, ctx, found);
                    steps.pop();
                }
                Err(_) => ctx.note(UnrealizableReason::NoConsistentForm),
            }
            return;
        }
    }
    let parts = if m.n() < 4 {
        Err(SplitError::NoNontrivialSplit)
    } else {
        splits::minimal_parts(m)
    };
    let part = match parts {
        Ok(parts) => parts.into_iter().min().expect("minimal parts are nonempty"),
        Err(SplitError::NoNontrivialSplit) => {
            for net in single_blob_candidates(m) {
                found.push((net, ReductionTrace { steps: steps.clone() }));
            }
            return;
        }
        Err(_) => {
            ctx.note(UnrealizableReason::NoConsistentForm);
            return;
        }
    };
    let candidates = match pendant::identify_candidates(m, &part) {
        Ok(c) => c,
        Err(_) => {
            ctx.note(UnrealizableReason::NoConsistentForm);
            return;
        }
    };
    if candidates.len() > 1 {
        debug_assert!(!M::HAS_LONGEST, "sl identification is unique");
        let chain = match &candidates[0] {
            PendantForm::Level1 { a } => a.clone(),
            _ => unreachable!("ambiguous candidates are single-chain"),
        };
        // A 3-leaf ambiguous chain is first shrunk to its two end leaves;
        // the middle leaf goes back in at replay.
        if chain.len() == 3 {
            let m2 = drop_middle(m, &chain);
            steps.push(Step::DropMiddle {
                first: chain[0].clone(),
                middle: chain[1].clone(),
                last: chain[2].clone(),
            });
            search(&m2, counter, steps, ctx, found);
            steps.pop();
            return;
        }
        if ctx.branches_left == 0 {
            ctx.exceeded = true;
            ctx.fail = Some(UnrealizableReason::BranchBudgetExceeded);
            return;
        }
        ctx.branches_left -= 1;
    }
    for form in candidates {
        let z = chains::fresh_taxon(|s| m.index_of(s).is_some(), counter);
        match pendant::reduce_pendant(m, &form, &z) {
            Ok(m2) => {
                steps.push(Step::Blob { z, form });
                search(&m2, counter, steps, ctx, found);
                steps.pop();
            }
            Err(_) => ctx.note(UnrealizableReason::NoConsistentForm),
        }
        if ctx.exceeded {
            return;
        }
    }
}

/// Matrix-level middle-leaf removal; the end pair becomes adjacent at
/// distance 3. Only meaningful for shortest-only matrices, where the two
/// blob readings of the chain are not yet separated.
fn drop_middle<M: Matrix>(m: &M, chain: &Chain) -> M {
    debug_assert!(!M::HAS_LONGEST);
    let kept: Vec<Taxon> = m
        .taxa()
        .iter()
        .filter(|t| **t != chain[1])
        .cloned()
        .collect();
    M::from_fn(kept.clone(), |i, j| {
        let (ti, tj) = (&kept[i], &kept[j]);
        let is_end_pair = (*ti == chain[0] && *tj == chain[2]) || (*ti == chain[2] && *tj == chain[0]);
        if is_end_pair {
            (3, 3)
        } else {
            (m.dm(ti, tj), 0)
        }
    })
}

fn flipped(chain: &Chain, flip: bool) -> Chain {
    if flip {
        chain.iter().rev().cloned().collect()
    } else {
        chain.clone()
    }
}

fn build_cycle(chain: &Chain) -> Network {
    let n = chain.len() as u32;
    let mut net = Network::new();
    for i in 0..n {
        net.add_edge(i, (i + 1) % n);
    }
    for (i, t) in chain.iter().enumerate() {
        let leaf = n + i as u32;
        net.add_edge(i as u32, leaf);
        net.set_taxon(t.clone(), leaf);
    }
    net
}

/// Two pole vertices joined by three parallel paths carrying the given
/// chains; a missing third chain becomes a direct pole edge.
fn build_theta(a: &Chain, b: &Chain, c: Option<&Chain>) -> Network {
    let mut net = Network::new();
    net.add_vertex(0);
    net.add_vertex(1);
    pendant::lay_chain(&mut net, 0, 1, a);
    pendant::lay_chain(&mut net, 0, 1, b);
    pendant::lay_chain(&mut net, 0, 1, c.map_or(&[][..], |c| &c[..]));
    net
}

/// Candidate networks for a matrix with no non-trivial split: the 2-leaf
/// edge, a single cycle, or a two-pole (theta) blob with two or three
/// occupied sides. Each survivor is verified against `m`.
fn single_blob_candidates<M: Matrix>(m: &M) -> Vec<Network> {
    let mut raw: Vec<Network> = Vec::new();
    if m.n() == 2 {
        if m.dm_at(0, 1) == 1 {
            raw.push(Network::from_parts(
                [(0, 1)],
                [(m.taxa()[0].clone(), 0), (m.taxa()[1].clone(), 1)],
            ));
        }
    } else if let Ok(chs) = chains::chains_from_matrix(m) {
        match chs.len() {
            1 => {
                if chains::chain_is_cyclic(m, &chs[0]) {
                    raw.push(build_cycle(&chs[0]));
                }
            }
            2 => {
                for flip in [false, true] {
                    raw.push(build_theta(&chs[0], &flipped(&chs[1], flip), None));
                }
            }
            3 => {
                for f1 in [false, true] {
                    for f2 in [false, true] {
                        raw.push(build_theta(
                            &chs[0],
                            &flipped(&chs[1], f1),
                            Some(&flipped(&chs[2], f2)),
                        ));
                    }
                }
            }
            _ => {}
        }
    }
    raw.retain(|net| network::validate(net).is_empty() && metrics::realizes(net, m));
    dedupe_networks(raw)
}

/// Keeps one representative per isomorphism class, sorted by canonical form.
fn dedupe_networks(nets: Vec<Network>) -> Vec<Network> {
    let mut keyed: Vec<(CanonicalForm, Network)> = Vec::new();
    for net in nets {
        let key = iso::canonical_form(&net);
        if !keyed.iter().any(|(k, _)| *k == key) {
            keyed.push((key, net));
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, n)| n).collect()
}

fn finish<M: Matrix>(
    m: &M,
    found: Vec<(Network, ReductionTrace)>,
    ctx: SearchCtx,
) -> ReconstructionResult {
    if ctx.exceeded {
        return ReconstructionResult::Unrealizable(UnrealizableReason::BranchBudgetExceeded);
    }
    let mut nets = Vec::new();
    for (base, trace) in found {
        let Ok(net) = replay(&base, &trace) else {
            continue;
        };
        if network::validate(&net).is_empty() && metrics::realizes(&net, m) {
            nets.push(net);
        }
    }
    let mut nets = dedupe_networks(nets);
    match nets.len() {
        0 => ReconstructionResult::Unrealizable(
            ctx.fail.unwrap_or(UnrealizableReason::VerificationFailed),
        ),
        1 => ReconstructionResult::Unique(nets.pop().expect("one network")),
        _ => ReconstructionResult::Ambiguous(nets),
    }
}

fn reconstruct_matrix<M: Matrix>(m: &M, budget: u32) -> ReconstructionResult {
    if m.n() < 2 || !metrics::matrix_violations(m).is_empty() {
        return ReconstructionResult::Unrealizable(UnrealizableReason::MatrixViolation);
    }
    let mut counter = 0;
    let mut steps = Vec::new();
    let mut ctx = SearchCtx {
        branches_left: budget,
        exceeded: false,
        fail: None,
    };
    let mut found = Vec::new();
    search(m, &mut counter, &mut steps, &mut ctx, &mut found);
    finish(m, found, ctx)
}

/// Reconstructs a network from paired shortest and longest distances.
pub fn reconstruct_sl(m: &SlMatrix) -> ReconstructionResult {
    reconstruct_matrix(m, DEFAULT_BRANCH_BUDGET)
}

/// Reconstructs from shortest distances alone, branching where a small
/// blob admits two readings.
pub fn reconstruct_shortest(m: &ShortestMatrix) -> ReconstructionResult {
    reconstruct_matrix(m, DEFAULT_BRANCH_BUDGET)
}

/// [`reconstruct_shortest`] with an explicit branch budget.
pub fn reconstruct_shortest_with_budget(m: &ShortestMatrix, budget: u32) -> ReconstructionResult {
    reconstruct_matrix(m, budget)
}

/// Solves a cherry-free matrix with no non-trivial split by direct
/// enumeration of the bounded arrangement space.
pub fn reconstruct_single_blob<M: Matrix>(m: &M) -> ReconstructionResult {
    if m.n() < 2 || !metrics::matrix_violations(m).is_empty() {
        return ReconstructionResult::Unrealizable(UnrealizableReason::MatrixViolation);
    }
    let mut nets = single_blob_candidates(m);
    match nets.len() {
        0 => ReconstructionResult::Unrealizable(UnrealizableReason::VerificationFailed),
        1 => ReconstructionResult::Unique(nets.pop().expect("one network")),
        _ => ReconstructionResult::Ambiguous(nets),
    }
}

/// End-leaf meeting structures read off a shortest matrix: pairwise
/// adjacent triples mark degree-3 generator vertices, bulbs mark pendant
/// cycles (the petal chain loops back to its anchor vertex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleBulbSystem {
    /// Chain index and witnessing end leaf for each member of a triple.
    pub triples: Vec<[(usize, Taxon); 3]>,
    /// Petal chain index, partner chain index, and the partner's witnessing
    /// end leaf.
    pub bulbs: Vec<(usize, usize, Taxon)>,
}

/// A candidate construct: which chain ports it would consume and with what
/// witness leaves. Ports are 0 (chain start) and 1 (chain end); singleton
/// chains have interchangeable ports.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GenCand {
    members: Vec<(usize, usize, Taxon)>,
    bulb: bool,
}

fn chain_end_options(chain: &Chain) -> Vec<(usize, &Taxon)> {
    if chain.len() == 1 {
        Vec::from([(0, &chain[0])])
    } else {
        Vec::from([(0, &chain[0]), (1, &chain[chain.len() - 1])])
    }
}

fn gen_candidates(m: &ShortestMatrix, chs: &[Chain]) -> Vec<GenCand> {
    let mut out = Vec::new();
    let n = chs.len();
    let at4 = |a: &Taxon, b: &Taxon| m.dm(a, b) == 4;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for (ei, li) in chain_end_options(&chs[i]) {
                    for (ej, lj) in chain_end_options(&chs[j]) {
                        for (ek, lk) in chain_end_options(&chs[k]) {
                            if at4(li, lj) && at4(li, lk) && at4(lj, lk) {
                                out.push(GenCand {
                                    members: Vec::from([
                                        (i, ei, li.clone()),
                                        (j, ej, lj.clone()),
                                        (k, ek, lk.clone()),
                                    ]),
                                    bulb: false,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    for p in 0..n {
        if chs[p].len() < 2 {
            continue;
        }
        let (pf, pl) = (&chs[p][0], &chs[p][chs[p].len() - 1]);
        for q in 0..n {
            if q == p {
                continue;
            }
            for (eq, lq) in chain_end_options(&chs[q]) {
                if at4(pf, lq) && at4(pl, lq) {
                    out.push(GenCand {
                        members: Vec::from([
                            (p, 0, pf.clone()),
                            (p, 1, pl.clone()),
                            (q, eq, lq.clone()),
                        ]),
                        bulb: true,
                    });
                }
            }
        }
    }
    out
}

/// Port-consumption state: one pair of slots per chain; singleton chains
/// treat their slots as interchangeable units.
fn consume(used: &mut [[bool; 2]], singleton: &[bool], chain: usize, end: usize) -> bool {
    let slot = if singleton[chain] {
        if !used[chain][0] {
            0
        } else if !used[chain][1] {
            1
        } else {
            return false;
        }
    } else {
        end
    };
    if used[chain][slot] {
        return false;
    }
    used[chain][slot] = true;
    true
}

fn cover_search(
    cands: &[GenCand],
    used: &mut Vec<[bool; 2]>,
    singleton: &[bool],
    picked: &mut Vec<usize>,
    covers: &mut Vec<Vec<usize>>,
) {
    if covers.len() >= MAX_COVERS {
        return;
    }
    // Lowest unsaturated port drives the search, so each cover is reached
    // exactly once.
    let target = used
        .iter()
        .enumerate()
        .find_map(|(i, u)| u.iter().position(|&x| !x).map(|s| (i, s)));
    let Some((chain, slot)) = target else {
        covers.push(picked.clone());
        return;
    };
    for (ci, cand) in cands.iter().enumerate() {
        let touches = cand
            .members
            .iter()
            .any(|&(c, e, _)| c == chain && (singleton[chain] || e == slot));
        if !touches {
            continue;
        }
        let snapshot = used.clone();
        let ok = cand
            .members
            .iter()
            .all(|&(c, e, _)| consume(used, singleton, c, e));
        if ok {
            picked.push(ci);
            cover_search(cands, used, singleton, picked, covers);
            picked.pop();
        }
        *used = snapshot;
    }
}

fn gen_covers(chs: &[Chain], cands: &[GenCand]) -> Vec<Vec<usize>> {
    let singleton: Vec<bool> = chs.iter().map(|c| c.len() == 1).collect();
    let mut used = alloc::vec![[false, false]; chs.len()];
    let mut covers = Vec::new();
    cover_search(cands, &mut used, &singleton, &mut Vec::new(), &mut covers);
    covers
}

/// Finds the pairwise adjacent triples and bulbs of a cherry-free shortest
/// matrix, checking that every chain is covered by exactly two construct
/// memberships (petal membership counting as two).
pub fn extract_triples_and_bulbs(
    m: &ShortestMatrix,
    chs: &[Chain],
    _adjacency: &BTreeMap<(usize, usize), Adjacency>,
) -> Result<TripleBulbSystem, UnrealizableReason> {
    let cands = gen_candidates(m, chs);
    let covers = gen_covers(chs, &cands);
    let Some(cover) = covers.first() else {
        return Err(UnrealizableReason::NotGenSideCovered);
    };
    let mut triples = Vec::new();
    let mut bulbs = Vec::new();
    for &ci in cover {
        let cand = &cands[ci];
        if cand.bulb {
            bulbs.push((cand.members[0].0, cand.members[2].0, cand.members[2].2.clone()));
        } else {
            let mut t: [(usize, Taxon); 3] = [
                (cand.members[0].0, cand.members[0].2.clone()),
                (cand.members[1].0, cand.members[1].2.clone()),
                (cand.members[2].0, cand.members[2].2.clone()),
            ];
            t.sort();
            triples.push(t);
        }
    }
    triples.sort();
    bulbs.sort();
    Ok(TripleBulbSystem { triples, bulbs })
}

/// Assembles the network encoded by one cover: a vertex per construct, the
/// chains laid as generator sides with the witnessed ends adjacent to
/// their construct vertices.
fn build_from_cover(chs: &[Chain], cands: &[GenCand], cover: &[usize]) -> Option<Network> {
    let singleton: Vec<bool> = chs.iter().map(|c| c.len() == 1).collect();
    let mut used = alloc::vec![[false, false]; chs.len()];
    // incidences[chain] = (construct occurrence, witnessed end)
    let mut incidences: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); chs.len()];
    for (occ, &ci) in cover.iter().enumerate() {
        for &(c, e, _) in &cands[ci].members {
            if !consume(&mut used, &singleton, c, e) {
                return None;
            }
            incidences[c].push((occ, e));
        }
    }
    let mut net = Network::new();
    for occ in 0..cover.len() {
        net.add_vertex(occ as u32);
    }
    for (c, inc) in incidences.iter().enumerate() {
        let [(o1, e1), (o2, _)] = inc[..] else {
            return None;
        };
        let oriented = flipped(&chs[c], e1 == 1 && !singleton[c]);
        pendant::lay_chain(&mut net, o1 as u32, o2 as u32, &oriented);
    }
    Some(net)
}

/// Reconstructs a network with a leaf on every generator side from its
/// shortest matrix; works beyond level 2.
pub fn reconstruct_genside(m: &ShortestMatrix) -> ReconstructionResult {
    if m.n() < 2 || !metrics::matrix_violations(m).is_empty() {
        return ReconstructionResult::Unrealizable(UnrealizableReason::MatrixViolation);
    }
    let Ok(chs) = chains::chains_from_matrix(m) else {
        return ReconstructionResult::Unrealizable(UnrealizableReason::NotGenSideCovered);
    };
    let cands = gen_candidates(m, &chs);
    let covers = gen_covers(&chs, &cands);
    if covers.is_empty() {
        return ReconstructionResult::Unrealizable(UnrealizableReason::NotGenSideCovered);
    }
    let mut nets = Vec::new();
    for cover in &covers {
        if let Some(net) = build_from_cover(&chs, &cands, cover) {
            if network::validate(&net).is_empty() && metrics::realizes(&net, m) {
                nets.push(net);
            }
        }
    }
    let mut nets = dedupe_networks(nets);
    match nets.len() {
        0 => ReconstructionResult::Unrealizable(UnrealizableReason::VerificationFailed),
        1 => ReconstructionResult::Unique(nets.pop().expect("one network")),
        _ => ReconstructionResult::Ambiguous(nets),
    }
}
