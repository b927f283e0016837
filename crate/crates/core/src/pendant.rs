//! Pendant blob classification, identification, and reduction.
//!
//! A pendant blob hangs off the rest of the network by a single non-trivial
//! cut-edge. Seven shapes are possible. A level-1 pendant blob is a cycle
//! carrying one chain. A level-2 pendant blob has two poles joined by three
//! main paths; the cut vertex v subdivides one of them. Writing the chains
//! on the two whole main paths first and the chains on the two cut-path
//! segments last gives the slot notation used below: (a,b,c,d), with 0 for
//! an empty slot. Chain conventions: a and b run pole-to-pole in storage
//! order, c runs outer-pole to v (v end last), d runs v to the other pole
//! (v end first).

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::chains::Chain;
use crate::decompose;
use crate::metrics::{self, Matrix, ShortestMatrix, SlMatrix};
use crate::network::{Network, Taxon, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PendantError {
    NotPendant,
    UnrecognizedShape,
    NoConsistentForm,
    TaxonCollision(Taxon),
    UnknownLeaf(Taxon),
}

/// The seven pendant blob shapes, with their chains. Level-2 variant names
/// spell out slot occupancy, e.g. `A0C0` is the form (a,0,c,0).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PendantForm {
    Level1 { a: Chain },
    A000 { a: Chain },
    AB00 { a: Chain, b: Chain },
    A0C0 { a: Chain, c: Chain },
    ABC0 { a: Chain, b: Chain, c: Chain },
    A0CD { a: Chain, c: Chain, d: Chain },
    ABCD { a: Chain, b: Chain, c: Chain, d: Chain },
}

fn rev(c: &Chain) -> Chain {
    c.iter().rev().cloned().collect()
}

impl PendantForm {
    /// All chains of the form, slot order.
    pub fn chains(&self) -> Vec<&Chain> {
        match self {
            PendantForm::Level1 { a } | PendantForm::A000 { a } => Vec::from([a]),
            PendantForm::AB00 { a, b } => Vec::from([a, b]),
            PendantForm::A0C0 { a, c } => Vec::from([a, c]),
            PendantForm::ABC0 { a, b, c } => Vec::from([a, b, c]),
            PendantForm::A0CD { a, c, d } => Vec::from([a, c, d]),
            PendantForm::ABCD { a, b, c, d } => Vec::from([a, b, c, d]),
        }
    }

    pub fn taxa(&self) -> BTreeSet<Taxon> {
        self.chains().into_iter().flatten().cloned().collect()
    }

    /// Canonical representative under the blob's symmetries. Forms whose
    /// cut path is bare on both segments admit the pole reflection, which
    /// reverses every chain; forms with both segments occupied admit the
    /// reflection with the two segments exchanged. A lone occupied segment
    /// pins the pole orientation, so only the parallel-path swap remains.
    pub fn canon(self) -> Self {
        match self {
            PendantForm::Level1 { a } => {
                let r = rev(&a);
                PendantForm::Level1 { a: a.min(r) }
            }
            PendantForm::A000 { a } => {
                let r = rev(&a);
                PendantForm::A000 { a: a.min(r) }
            }
            PendantForm::AB00 { a, b } => {
                let (ra, rb) = (rev(&a), rev(&b));
                let best = [
                    (a.clone(), b.clone()),
                    (b, a),
                    (ra.clone(), rb.clone()),
                    (rb, ra),
                ]
                .into_iter()
                .min()
                .expect("nonempty");
                PendantForm::AB00 { a: best.0, b: best.1 }
            }
            PendantForm::A0C0 { a, c } => PendantForm::A0C0 { a, c },
            PendantForm::ABC0 { a, b, c } => {
                let best = [(a.clone(), b.clone()), (b, a)].into_iter().min().expect("nonempty");
                PendantForm::ABC0 { a: best.0, b: best.1, c }
            }
            PendantForm::A0CD { a, c, d } => {
                let (ra, rc, rd) = (rev(&a), rev(&c), rev(&d));
                let best = [(a, c, d), (ra, rd, rc)].into_iter().min().expect("nonempty");
                PendantForm::A0CD { a: best.0, c: best.1, d: best.2 }
            }
            PendantForm::ABCD { a, b, c, d } => {
                let (ra, rb, rc, rd) = (rev(&a), rev(&b), rev(&c), rev(&d));
                let best = [
                    (a.clone(), b.clone(), c.clone(), d.clone()),
                    (b, a, c, d),
                    (ra.clone(), rb.clone(), rd.clone(), rc.clone()),
                    (rb, ra, rd, rc),
                ]
                .into_iter()
                .min()
                .expect("nonempty");
                PendantForm::ABCD { a: best.0, b: best.1, c: best.2, d: best.3 }
            }
        }
    }
}

/// True for the shapes indistinguishable from each other by shortest
/// distances alone: level-1 blobs and (a,0,0,0) blobs with 2 or 3 leaves.
pub fn is_bad_form(form: &PendantForm) -> bool {
    match form {
        PendantForm::Level1 { a } | PendantForm::A000 { a } => (2..=3).contains(&a.len()),
        _ => false,
    }
}

/// Splits the part into chains using distance-3 components, part-locally.
fn part_chains<M: Matrix>(m: &M, part: &BTreeSet<Taxon>) -> Result<Vec<Chain>, PendantError> {
    let mut idx = Vec::new();
    for t in part {
        idx.push(m.index_of(t).ok_or_else(|| PendantError::UnknownLeaf(t.clone()))?);
    }
    let n = idx.len();
    let mut nbr: Vec<Vec<usize>> = Vec::from_iter(core::iter::repeat_with(Vec::new).take(n));
    for p in 0..n {
        for q in p + 1..n {
            match m.dm_at(idx[p], idx[q]) {
                0 | 1 | 2 => return Err(PendantError::NoConsistentForm),
                3 => {
                    nbr[p].push(q);
                    nbr[q].push(p);
                }
                _ => {}
            }
        }
    }
    if nbr.iter().any(|v| v.len() > 2) {
        return Err(PendantError::NoConsistentForm);
    }
    let mut assigned = Vec::from_iter(core::iter::repeat(false).take(n));
    let mut chains = Vec::new();
    for start in 0..n {
        if assigned[start] || nbr[start].len() == 2 {
            continue;
        }
        let mut seq = Vec::from([start]);
        assigned[start] = true;
        let mut prev = start;
        let mut cur = match nbr[start].first() {
            Some(&c) => c,
            None => {
                chains.push(Vec::from([m.taxa()[idx[start]].clone()]));
                continue;
            }
        };
        loop {
            seq.push(cur);
            assigned[cur] = true;
            match nbr[cur].iter().find(|&&w| w != prev) {
                Some(&next) => {
                    prev = cur;
                    cur = next;
                }
                None => break,
            }
        }
        if seq.last() < seq.first() {
            seq.reverse();
        }
        chains.push(seq.iter().map(|&p| m.taxa()[idx[p]].clone()).collect());
    }
    if assigned.iter().any(|&a| !a) {
        // A distance-3 cycle inside a part has no pendant reading.
        return Err(PendantError::NoConsistentForm);
    }
    chains.sort();
    Ok(chains)
}

fn dmin<M: Matrix>(m: &M, chain: &Chain, x: usize) -> u32 {
    chain
        .iter()
        .map(|t| m.dm_at(m.index_of(t).expect("chain taxon"), x))
        .min()
        .expect("nonempty chain")
}

/// End-pair adjacency witnesses between two chains: (is_last_in_c1,
/// is_last_in_c2) for each end pair at shortest distance 4.
fn witnesses<M: Matrix>(m: &M, c1: &Chain, c2: &Chain) -> Vec<(bool, bool)> {
    let ends = |c: &Chain| {
        if c.len() == 1 {
            Vec::from([(c[0].clone(), false)])
        } else {
            Vec::from([(c[0].clone(), false), (c[c.len() - 1].clone(), true)])
        }
    };
    let mut out = Vec::new();
    for (t1, l1) in ends(c1) {
        for (t2, l2) in ends(c2) {
            if m.dm(&t1, &t2) == 4 {
                out.push((l1, l2));
            }
        }
    }
    out
}

/// Reverses `a` if its first leaf does not witness adjacency with the
/// outer end of `c` (the reference chain's first leaf).
fn align_to_first<M: Matrix>(m: &M, a: &mut Chain, c: &Chain) {
    if a.len() < 2 {
        return;
    }
    let w = witnesses(m, a, c);
    if !w.contains(&(false, false)) && w.contains(&(true, false)) {
        a.reverse();
    }
}

/// Orients two cut-path chains so the witness pair at the cut vertex sits
/// last in `c` and first in `d`.
fn orient_cut_pair<M: Matrix>(m: &M, c: &mut Chain, d: &mut Chain) {
    if let Some(&(cl, dl)) = witnesses(m, c, d).first() {
        if c.len() >= 2 && !cl {
            c.reverse();
        }
        if d.len() >= 2 && dl {
            d.reverse();
        }
    }
}

/// Candidate forms for the pendant blob behind a minimal part.
///
/// With longest distances available the answer is unique. From shortest
/// distances alone, a single chain of 2 or 3 leaves admits two readings
/// (the level-1 blob and the (a,0,0,0) blob); both are returned.
pub fn identify_candidates<M: Matrix>(
    m: &M,
    part: &BTreeSet<Taxon>,
) -> Result<Vec<PendantForm>, PendantError> {
    if part.len() < 2 || part.len() >= m.n() {
        return Err(PendantError::NoConsistentForm);
    }
    let chains = part_chains(m, part)?;
    let externals: Vec<usize> = (0..m.n())
        .filter(|&i| !part.contains(&m.taxa()[i]))
        .collect();

    match chains.len() {
        1 => {
            let a = chains.into_iter().next().expect("one chain");
            let k = a.len();
            let dm_ends = m.dm(&a[0], &a[k - 1]);
            if k < 2 {
                return Err(PendantError::NoConsistentForm);
            }
            if (2..=3).contains(&k) {
                if dm_ends != k as u32 + 1 {
                    return Err(PendantError::NoConsistentForm);
                }
                if M::HAS_LONGEST {
                    let dl_ends = m.dl(&a[0], &a[k - 1]).expect("sl matrix");
                    return match dl_ends {
                        4 => Ok(Vec::from([PendantForm::Level1 { a }.canon()])),
                        6 => Ok(Vec::from([PendantForm::A000 { a }.canon()])),
                        _ => Err(PendantError::NoConsistentForm),
                    };
                }
                return Ok(Vec::from([
                    PendantForm::Level1 { a: a.clone() }.canon(),
                    PendantForm::A000 { a }.canon(),
                ]));
            }
            match dm_ends {
                4 => Ok(Vec::from([PendantForm::Level1 { a }.canon()])),
                5 => Ok(Vec::from([PendantForm::A000 { a }.canon()])),
                _ => Err(PendantError::NoConsistentForm),
            }
        }
        2 => {
            if externals.is_empty() {
                return Err(PendantError::NoConsistentForm);
            }
            let (c1, c2) = (&chains[0], &chains[1]);
            let diffs: BTreeSet<i64> = externals
                .iter()
                .map(|&x| dmin(m, c1, x) as i64 - dmin(m, c2, x) as i64)
                .collect();
            let form = match diffs.into_iter().collect::<Vec<_>>()[..] {
                [0] => {
                    let (mut a, mut b) = (c1.clone(), c2.clone());
                    let w = witnesses(m, &a, &b);
                    if b.len() >= 2 && !w.contains(&(false, false)) && w.contains(&(false, true)) {
                        b.reverse();
                    }
                    let _ = &mut a;
                    PendantForm::AB00 { a, b }
                }
                [1] => two_chain_cut(m, c2.clone(), c1.clone(), &externals),
                [-1] => two_chain_cut(m, c1.clone(), c2.clone(), &externals),
                _ => return Err(PendantError::NoConsistentForm),
            };
            Ok(Vec::from([form.canon()]))
        }
        3 => {
            if externals.is_empty() {
                return Err(PendantError::NoConsistentForm);
            }
            let vecs: Vec<Vec<u32>> = chains
                .iter()
                .map(|c| externals.iter().map(|&x| dmin(m, c, x)).collect())
                .collect();
            let (e1, e2, odd) = if vecs[0] == vecs[1] {
                (0, 1, 2)
            } else if vecs[0] == vecs[2] {
                (0, 2, 1)
            } else if vecs[1] == vecs[2] {
                (1, 2, 0)
            } else {
                return Err(PendantError::NoConsistentForm);
            };
            if vecs[e1] == vecs[odd] {
                return Err(PendantError::NoConsistentForm);
            }
            let diffs: BTreeSet<i64> = (0..externals.len())
                .map(|i| vecs[odd][i] as i64 - vecs[e1][i] as i64)
                .collect();
            let min_eq = chains[e1].len().min(chains[e2].len()) as i64;
            let form = match diffs.into_iter().collect::<Vec<_>>()[..] {
                [-1] => {
                    // The odd chain sits on the cut path, one step nearer.
                    let mut c = chains[odd].clone();
                    if c.len() >= 2 {
                        let x = externals[0];
                        if m.dm_at(m.index_of(&c[0]).expect("taxon"), x)
                            < m.dm_at(m.index_of(&c[c.len() - 1]).expect("taxon"), x)
                        {
                            c.reverse();
                        }
                    }
                    let mut a = chains[e1].clone();
                    let mut b = chains[e2].clone();
                    align_to_first(m, &mut a, &c);
                    align_to_first(m, &mut b, &c);
                    PendantForm::ABC0 { a, b, c }
                }
                [d] if d == min_eq + 1 => {
                    // The equal pair flanks the cut vertex.
                    let mut c = chains[e1].clone();
                    let mut d = chains[e2].clone();
                    orient_cut_pair(m, &mut c, &mut d);
                    let mut a = chains[odd].clone();
                    align_to_first(m, &mut a, &c);
                    PendantForm::A0CD { a, c, d }
                }
                _ => return Err(PendantError::NoConsistentForm),
            };
            Ok(Vec::from([form.canon()]))
        }
        4 => {
            if externals.is_empty() {
                return Err(PendantError::NoConsistentForm);
            }
            let vecs: Vec<Vec<u32>> = chains
                .iter()
                .map(|c| externals.iter().map(|&x| dmin(m, c, x)).collect())
                .collect();
            let mut groups: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
            for (i, v) in vecs.iter().enumerate() {
                match groups.iter_mut().find(|(gv, _)| gv == v) {
                    Some((_, members)) => members.push(i),
                    None => groups.push((v.clone(), Vec::from([i]))),
                }
            }
            if groups.len() != 2 || groups[0].1.len() != 2 {
                return Err(PendantError::NoConsistentForm);
            }
            let near = usize::from(groups[0].0 > groups[1].0);
            let (cut, far) = (&groups[near].1, &groups[1 - near].1);
            let min_cut = chains[cut[0]].len().min(chains[cut[1]].len()) as u32;
            let consistent = (0..externals.len())
                .all(|i| vecs[far[0]][i] == vecs[cut[0]][i] + min_cut + 1);
            if !consistent {
                return Err(PendantError::NoConsistentForm);
            }
            // Every chain pair except the two cut segments must witness
            // adjacency around the poles.
            for &i in far {
                for j in 0..4 {
                    if j != i && witnesses(m, &chains[i], &chains[j]).is_empty() {
                        return Err(PendantError::NoConsistentForm);
                    }
                }
            }
            let mut c = chains[cut[0]].clone();
            let mut d = chains[cut[1]].clone();
            orient_cut_pair(m, &mut c, &mut d);
            let mut a = chains[far[0]].clone();
            let mut b = chains[far[1]].clone();
            align_to_first(m, &mut a, &c);
            align_to_first(m, &mut b, &c);
            Ok(Vec::from([PendantForm::ABCD { a, b, c, d }.canon()]))
        }
        _ => Err(PendantError::NoConsistentForm),
    }
}

fn two_chain_cut<M: Matrix>(
    m: &M,
    cut: Chain,
    other: Chain,
    externals: &[usize],
) -> PendantForm {
    let mut c = cut;
    if c.len() >= 2 {
        let x = externals[0];
        if m.dm_at(m.index_of(&c[0]).expect("taxon"), x)
            < m.dm_at(m.index_of(&c[c.len() - 1]).expect("taxon"), x)
        {
            c.reverse();
        }
    }
    let mut a = other;
    align_to_first(m, &mut a, &c);
    PendantForm::A0C0 { a, c }
}

/// The unique pendant form behind a minimal part of an sl-matrix.
pub fn identify_pendant(m: &SlMatrix, part: &BTreeSet<Taxon>) -> Result<PendantForm, PendantError> {
    let mut c = identify_candidates(m, part)?;
    if c.len() == 1 {
        Ok(c.pop().expect("one candidate"))
    } else {
        Err(PendantError::NoConsistentForm)
    }
}

/// Anchor chain and (shortest, longest) subtraction offsets for reduction.
fn anchor_and_offsets(form: &PendantForm) -> (&Chain, u32, u32) {
    match form {
        PendantForm::Level1 { a } => (a, 2, a.len() as u32 + 1),
        PendantForm::A000 { a } => (a, 3, a.len() as u32 + 3),
        PendantForm::AB00 { a, b } => (a, 3, (a.len() + b.len()) as u32 + 3),
        PendantForm::A0C0 { a, c } => (c, 2, (a.len() + c.len()) as u32 + 3),
        PendantForm::ABC0 { a, b, c } => (c, 2, (a.len().max(b.len()) + c.len()) as u32 + 3),
        PendantForm::A0CD { a, c, d } => (c, 2, (a.len() + c.len() + d.len()) as u32 + 3),
        PendantForm::ABCD { a, b, c, d } => {
            (c, 2, (a.len().max(b.len()) + c.len() + d.len()) as u32 + 3)
        }
    }
}

/// Replaces the identified pendant blob by the fresh leaf `z`, rebasing
/// distances on the anchor chain: shortest by set-minimum, longest by
/// set-maximum, each minus a fixed offset.
pub fn reduce_pendant<M: Matrix>(m: &M, form: &PendantForm, z: &str) -> Result<M, PendantError> {
    if m.index_of(z).is_some() {
        return Err(PendantError::TaxonCollision(z.into()));
    }
    let (anchor, s_off, l_off) = anchor_and_offsets(form);
    let mut anchor_idx = Vec::new();
    for t in anchor {
        anchor_idx.push(m.index_of(t).ok_or_else(|| PendantError::UnknownLeaf(t.clone()))?);
    }
    let drop = form.taxa();
    for t in &drop {
        if m.index_of(t).is_none() {
            return Err(PendantError::UnknownLeaf(t.clone()));
        }
    }
    Ok(metrics::replace_group(m, &drop, &z.into(), |p| {
        let dm = anchor_idx.iter().map(|&i| m.dm_at(p, i)).min().expect("anchor") - s_off;
        let dl = if M::HAS_LONGEST {
            anchor_idx
                .iter()
                .map(|&i| m.dl_at(p, i).expect("sl matrix"))
                .max()
                .expect("anchor")
                - l_off
        } else {
            0
        };
        (dm, dl)
    }))
}

/// Lays a chain between `from` and `to`: spine vertices carrying the chain
/// leaves in order, or a direct edge for an empty chain.
pub(crate) fn lay_chain(net: &mut Network, from: Vertex, to: Vertex, chain: &[Taxon]) {
    let mut prev = from;
    for taxon in chain {
        let spine = net.fresh_vertex();
        net.add_edge(prev, spine);
        let leaf = net.fresh_vertex();
        net.add_edge(spine, leaf);
        net.set_taxon(taxon.clone(), leaf);
        prev = spine;
    }
    net.add_edge(prev, to);
}

/// Replaces the leaf `z` by a pendant blob of the given form, following the
/// orientation conventions in the module docs.
pub fn expand_pendant(net: &Network, z: &str, form: &PendantForm) -> Result<Network, PendantError> {
    let zv = net.leaf_vertex(z).ok_or_else(|| PendantError::UnknownLeaf(z.into()))?;
    let u = net.leaf_neighbor(zv).ok_or(PendantError::NotPendant)?;
    for t in form.taxa() {
        if net.leaf_vertex(&t).is_some() {
            return Err(PendantError::TaxonCollision(t));
        }
    }
    let mut out = net.clone();
    out.remove_vertex(zv);
    let v = out.fresh_vertex();
    out.add_edge(u, v);
    match form {
        PendantForm::Level1 { a } => {
            lay_chain(&mut out, v, v, a);
        }
        _ => {
            let p1 = out.fresh_vertex();
            out.add_vertex(p1);
            let empty = Vec::new();
            let (a, b, c, d) = match form {
                PendantForm::A000 { a } => (a, &empty, &empty, &empty),
                PendantForm::AB00 { a, b } => (a, b, &empty, &empty),
                PendantForm::A0C0 { a, c } => (a, &empty, c, &empty),
                PendantForm::ABC0 { a, b, c } => (a, b, c, &empty),
                PendantForm::A0CD { a, c, d } => (a, &empty, c, d),
                PendantForm::ABCD { a, b, c, d } => (a, b, c, d),
                PendantForm::Level1 { .. } => unreachable!("handled above"),
            };
            let p2 = out.fresh_vertex();
            out.add_vertex(p2);
            lay_chain(&mut out, p1, v, c);
            lay_chain(&mut out, v, p2, d);
            lay_chain(&mut out, p1, p2, a);
            lay_chain(&mut out, p1, p2, b);
        }
    }
    Ok(out)
}

/// Deletes the pendant blob whose leaf set is `part` and hangs the fresh
/// leaf `z` in its place; structural counterpart of [`reduce_pendant`].
pub fn replace_blob_with_leaf(
    net: &Network,
    part: &BTreeSet<Taxon>,
    z: &str,
) -> Result<Network, PendantError> {
    if net.leaf_vertex(z).is_some() {
        return Err(PendantError::TaxonCollision(z.into()));
    }
    let (blob, (u, _v)) = find_pendant_blob(net, part)?;
    let mut out = net.clone();
    for &w in &blob.vertices {
        for x in net.neighbors(w) {
            if net.is_leaf(x) {
                out.remove_vertex(x);
            }
        }
        out.remove_vertex(w);
    }
    let leaf = out.fresh_vertex();
    out.add_edge(u, leaf);
    out.set_taxon(z, leaf);
    Ok(out)
}

/// The pendant blob whose hanging leaves are exactly `part`, plus its
/// non-trivial cut-edge as (outside vertex, blob vertex).
fn find_pendant_blob(
    net: &Network,
    part: &BTreeSet<Taxon>,
) -> Result<(decompose::Blob, (Vertex, Vertex)), PendantError> {
    let dec = decompose::decompose(net);
    for blob in &dec.blobs {
        // Attachment edges point away from the pendant unit: everything
        // except the blob's own hanging-leaf edges. The far end may itself
        // be a leaf when only one taxon lies outside the part.
        let attachments: Vec<(Vertex, Vertex)> = decompose::incident_cut_edges(net, blob)
            .into_iter()
            .map(|((x, y), _)| if blob.contains(y) { (x, y) } else { (y, x) })
            .filter(|&(far, _)| !net.taxon_of(far).map_or(false, |t| part.contains(t)))
            .collect();
        let [(u, v)] = attachments[..] else {
            continue;
        };
        let leaves: BTreeSet<Taxon> = blob
            .vertices
            .iter()
            .flat_map(|&w| net.neighbors(w))
            .filter(|&x| x != u && net.is_leaf(x))
            .filter_map(|x| net.taxon_of(x).cloned())
            .collect();
        if &leaves == part {
            return Ok((blob.clone(), (u, v)));
        }
    }
    Err(PendantError::NotPendant)
}

/// Reads the pendant form straight off the network structure; the oracle
/// for [`identify_pendant`].
pub fn classify_pendant(net: &Network, part: &BTreeSet<Taxon>) -> Result<PendantForm, PendantError> {
    let (blob, (_u, v)) = find_pendant_blob(net, part)?;
    let taxon_on = |w: Vertex| -> Option<Taxon> {
        net.neighbors(w)
            .into_iter()
            .find(|&x| net.is_leaf(x))
            .and_then(|x| net.taxon_of(x).cloned())
    };
    let blob_neighbors = |w: Vertex| -> Vec<Vertex> {
        net.neighbors(w).into_iter().filter(|x| blob.contains(*x)).collect()
    };
    match blob.level() {
        1 => {
            // Walk the cycle from the cut vertex.
            let mut chain = Vec::new();
            let mut prev = v;
            let mut cur = blob_neighbors(v)[0];
            while cur != v {
                chain.push(taxon_on(cur).ok_or(PendantError::UnrecognizedShape)?);
                let next = blob_neighbors(cur)
                    .into_iter()
                    .find(|&w| w != prev)
                    .ok_or(PendantError::UnrecognizedShape)?;
                prev = cur;
                cur = next;
            }
            Ok(PendantForm::Level1 { a: chain }.canon())
        }
        2 => {
            let poles: Vec<Vertex> = blob
                .vertices
                .iter()
                .copied()
                .filter(|&w| blob_neighbors(w).len() == 3)
                .collect();
            let [p1, p2] = poles[..] else {
                return Err(PendantError::UnrecognizedShape);
            };
            // Three pole-to-pole walks; each yields its spine taxa in order
            // and notes where the cut vertex sits.
            let mut whole: Vec<Chain> = Vec::new();
            let mut cut_path: Option<(Chain, Chain)> = None;
            for start in blob_neighbors(p1) {
                let mut before = Vec::new();
                let mut after = Vec::new();
                let mut seen_v = false;
                let mut prev = p1;
                let mut cur = start;
                while cur != p2 {
                    if cur == v {
                        seen_v = true;
                    } else {
                        let t = taxon_on(cur).ok_or(PendantError::UnrecognizedShape)?;
                        if seen_v {
                            after.push(t);
                        } else {
                            before.push(t);
                        }
                    }
                    let next = blob_neighbors(cur)
                        .into_iter()
                        .find(|&w| w != prev)
                        .ok_or(PendantError::UnrecognizedShape)?;
                    prev = cur;
                    cur = next;
                }
                if seen_v {
                    cut_path = Some((before, after));
                } else {
                    whole.push(before);
                }
            }
            let Some((c, d)) = cut_path else {
                return Err(PendantError::UnrecognizedShape);
            };
            if whole.len() != 2 {
                return Err(PendantError::UnrecognizedShape);
            }
            let mut whole_nonempty: Vec<Chain> =
                whole.into_iter().filter(|ch| !ch.is_empty()).collect();
            whole_nonempty.sort();
            let form = match (whole_nonempty.len(), c.is_empty(), d.is_empty()) {
                (1, true, true) => {
                    let a = whole_nonempty.pop().expect("one chain");
                    PendantForm::A000 { a }
                }
                (2, true, true) => {
                    let b = whole_nonempty.pop().expect("two chains");
                    let a = whole_nonempty.pop().expect("two chains");
                    PendantForm::AB00 { a, b }
                }
                // A lone occupied cut segment pins which pole is p1; when the
                // walk read it on the far side, reflect the whole blob.
                (1, _, _) if c.is_empty() != d.is_empty() => {
                    let a = whole_nonempty.pop().expect("one chain");
                    if c.is_empty() {
                        PendantForm::A0C0 { a: rev(&a), c: rev(&d) }
                    } else {
                        PendantForm::A0C0 { a, c }
                    }
                }
                (2, _, _) if c.is_empty() != d.is_empty() => {
                    let b = whole_nonempty.pop().expect("two chains");
                    let a = whole_nonempty.pop().expect("two chains");
                    if c.is_empty() {
                        PendantForm::ABC0 { a: rev(&a), b: rev(&b), c: rev(&d) }
                    } else {
                        PendantForm::ABC0 { a, b, c }
                    }
                }
                (1, false, false) => {
                    let a = whole_nonempty.pop().expect("one chain");
                    PendantForm::A0CD { a, c, d }
                }
                (2, false, false) => {
                    let b = whole_nonempty.pop().expect("two chains");
                    let a = whole_nonempty.pop().expect("two chains");
                    PendantForm::ABCD { a, b, c, d }
                }
                _ => return Err(PendantError::UnrecognizedShape),
            };
            Ok(form.canon())
        }
        _ => Err(PendantError::UnrecognizedShape),
    }
}

/// Removes the middle leaf of a 3-leaf bad-blob chain and sets the end
/// pair's distance to 3, matching the network with that leaf deleted.
pub fn drop_middle_of_bad_triple(
    m: &ShortestMatrix,
    trio: (&str, &str, &str),
) -> ShortestMatrix {
    let (a1, a2, a3) = trio;
    let kept: Vec<Taxon> = m
        .taxa()
        .iter()
        .filter(|t| t.as_str() != a2)
        .cloned()
        .collect();
    ShortestMatrix::from_fn(kept.clone(), |i, j| {
        let (ti, tj) = (&kept[i], &kept[j]);
        let pair = (ti.as_str(), tj.as_str());
        if pair == (a1, a3) || pair == (a3, a1) {
            (3, 3)
        } else {
            (m.dm(ti, tj), 0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::iso::is_isomorphic;
    use crate::network;
    use crate::metrics::{shortest_matrix, sl_matrix};
    use alloc::string::ToString;

    fn ts(names: &[&str]) -> BTreeSet<Taxon> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn ch(names: &[&str]) -> Chain {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn golden_sl() -> SlMatrix {
        sl_matrix(&fixtures::golden_network()).unwrap()
    }

    /// Pendant level-1 blob (cycle) with a chain of `k` leaves, plus a
    /// cherry tail so the part has externals.
    fn level1_net(k: usize) -> Network {
        let mut net = Network::new();
        let v = 0;
        let mut prev = v;
        for i in 0..k {
            let spine = 1 + 2 * i as u32;
            let leaf = 2 + 2 * i as u32;
            net.add_edge(prev, spine);
            net.add_edge(spine, leaf);
            net.set_taxon(alloc::format!("x{}", i + 1), leaf);
            prev = spine;
        }
        net.add_edge(prev, v);
        let (u, y1, y2) = (100, 101, 102);
        net.add_edge(v, u);
        net.add_edge(u, y1);
        net.add_edge(u, y2);
        net.set_taxon("y1".to_string(), y1);
        net.set_taxon("y2".to_string(), y2);
        net
    }

    /// Pendant (a,0,0,0) blob with a chain of `k` leaves plus a cherry tail.
    fn a000_net(k: usize) -> Network {
        let mut net = Network::new();
        let (p1, p2, v) = (0, 1, 2);
        net.add_edge(p1, p2);
        net.add_edge(p1, v);
        net.add_edge(v, p2);
        let mut prev = p1;
        for i in 0..k {
            let spine = 3 + 2 * i as u32;
            let leaf = 4 + 2 * i as u32;
            net.add_edge(prev, spine);
            net.add_edge(spine, leaf);
            net.set_taxon(alloc::format!("x{}", i + 1), leaf);
            prev = spine;
        }
        net.add_edge(prev, p2);
        // The direct pole edge becomes redundant once the chain path exists;
        // rebuild the cut path through v only.
        net.remove_edge(p1, v);
        net.remove_edge(v, p2);
        net.add_edge(p1, v);
        net.add_edge(v, p2);
        let (u, y1, y2) = (100, 101, 102);
        net.add_edge(v, u);
        net.add_edge(u, y1);
        net.add_edge(u, y2);
        net.set_taxon("y1".to_string(), y1);
        net.set_taxon("y2".to_string(), y2);
        net
    }

    #[test]
    fn synthetic_pendant_fixtures_validate() {
        assert!(network::validate(&level1_net(4)).is_empty());
        assert!(network::validate(&a000_net(4)).is_empty());
    }

    #[test]
    fn golden_triangle_part_is_level1() {
        let form = identify_pendant(&golden_sl(), &ts(&["d1", "d2"])).unwrap();
        assert_eq!(form, PendantForm::Level1 { a: ch(&["d1", "d2"]) });
        assert!(is_bad_form(&form));
        let structural = classify_pendant(&fixtures::golden_network(), &ts(&["d1", "d2"])).unwrap();
        assert_eq!(structural, form);
    }

    #[test]
    fn golden_three_chain_part_identified() {
        let form = identify_pendant(&golden_sl(), &ts(&["a", "b", "c1", "c2"])).unwrap();
        assert_eq!(
            form,
            PendantForm::ABC0 {
                a: ch(&["a"]),
                b: ch(&["b"]),
                c: ch(&["c1", "c2"]),
            }
        );
        assert!(!is_bad_form(&form));
        let structural =
            classify_pendant(&fixtures::golden_network(), &ts(&["a", "b", "c1", "c2"])).unwrap();
        assert_eq!(structural, form);
    }

    #[test]
    fn shortest_only_returns_both_bad_candidates() {
        let m = shortest_matrix(&fixtures::golden_network());
        let cands = identify_candidates(&m, &ts(&["d1", "d2"])).unwrap();
        assert_eq!(
            cands,
            Vec::from([
                PendantForm::Level1 { a: ch(&["d1", "d2"]) },
                PendantForm::A000 { a: ch(&["d1", "d2"]) },
            ])
        );
        assert!(cands.iter().all(is_bad_form));
    }

    #[test]
    fn long_chain_separates_from_shortest_alone() {
        let part = ts(&["x1", "x2", "x3", "x4"]);
        let m1 = shortest_matrix(&level1_net(4));
        assert_eq!(
            identify_candidates(&m1, &part).unwrap(),
            Vec::from([PendantForm::Level1 { a: ch(&["x1", "x2", "x3", "x4"]) }])
        );
        let m2 = shortest_matrix(&a000_net(4));
        assert_eq!(
            identify_candidates(&m2, &part).unwrap(),
            Vec::from([PendantForm::A000 { a: ch(&["x1", "x2", "x3", "x4"]) }])
        );
    }

    #[test]
    fn identify_matches_classify_on_synthetic_level2_forms() {
        // One aligned and one reflected variant per multi-chain form.
        let forms = [
            PendantForm::AB00 { a: ch(&["p1", "p2"]), b: ch(&["q1", "q2", "q3"]) },
            PendantForm::A0C0 { a: ch(&["p1", "p2"]), c: ch(&["q1", "q2"]) },
            PendantForm::ABC0 { a: ch(&["p1"]), b: ch(&["q1", "q2"]), c: ch(&["r1", "r2"]) },
            PendantForm::A0CD { a: ch(&["p1", "p2"]), c: ch(&["q1"]), d: ch(&["r1", "r2"]) },
            PendantForm::ABCD {
                a: ch(&["p1", "p2"]),
                b: ch(&["q1"]),
                c: ch(&["r1", "r2"]),
                d: ch(&["s1"]),
            },
        ];
        let base = Network::from_parts(
            [(0, 1), (1, 2), (1, 3), (2, 4), (2, 5)],
            [
                ("y1".to_string(), 3),
                ("y2".to_string(), 4),
                ("y3".to_string(), 5),
                ("z".to_string(), 0),
            ],
        );
        for form in forms {
            let net = expand_pendant(&base, "z", &form).unwrap();
            assert!(network::validate(&net).is_empty(), "{form:?}");
            let part = form.taxa();
            let canon = form.clone().canon();
            assert_eq!(classify_pendant(&net, &part), Ok(canon.clone()), "{form:?}");
            let m = sl_matrix(&net).unwrap();
            assert_eq!(identify_pendant(&m, &part), Ok(canon), "{form:?}");
        }
    }

    #[test]
    fn reduction_matches_spec_values() {
        let form = PendantForm::Level1 { a: ch(&["d1", "d2"]) };
        let m = reduce_pendant(&golden_sl(), &form, "z").unwrap();
        assert_eq!(m.pair("a", "z"), (5, 9));
        assert_eq!(m.pair("a", "b"), (4, 8));
    }

    #[test]
    fn reduction_matches_physical_replacement() {
        let golden = fixtures::golden_network();
        let m = golden_sl();
        for part in [ts(&["d1", "d2"]), ts(&["a", "b", "c1", "c2"])] {
            let form = identify_pendant(&m, &part).unwrap();
            let reduced = reduce_pendant(&m, &form, "zz").unwrap();
            let physical = replace_blob_with_leaf(&golden, &part, "zz").unwrap();
            assert!(network::validate(&physical).is_empty());
            assert_eq!(reduced, sl_matrix(&physical).unwrap());
        }
    }

    #[test]
    fn reduce_collision_rejected() {
        let form = PendantForm::Level1 { a: ch(&["d1", "d2"]) };
        assert_eq!(
            reduce_pendant(&golden_sl(), &form, "a"),
            Err(PendantError::TaxonCollision("a".to_string()))
        );
    }

    #[test]
    fn expand_inverts_physical_reduction() {
        let golden = fixtures::golden_network();
        let part = ts(&["d1", "d2"]);
        let form = classify_pendant(&golden, &part).unwrap();
        let shrunk = replace_blob_with_leaf(&golden, &part, "zz").unwrap();
        let grown = expand_pendant(&shrunk, "zz", &form).unwrap();
        assert!(network::validate(&grown).is_empty());
        assert_eq!(is_isomorphic(&grown, &golden), Ok(true));
    }

    #[test]
    fn expand_smallest_level1_is_triangle_blob() {
        let base = Network::from_parts(
            [(0, 1)],
            [("p".to_string(), 0), ("z".to_string(), 1)],
        );
        let form = PendantForm::Level1 { a: ch(&["x1", "x2"]) };
        let net = expand_pendant(&base, "z", &form).unwrap();
        assert!(network::validate(&net).is_empty());
        assert_eq!(decompose::level(&net), 1);
        let dec = decompose::decompose(&net);
        assert_eq!(dec.blobs.len(), 1);
        assert_eq!(dec.blobs[0].vertices.len(), 3);
    }

    #[test]
    fn expand_four_singleton_chains() {
        let base = Network::from_parts(
            [(0, 1)],
            [("p".to_string(), 0), ("z".to_string(), 1)],
        );
        let form = PendantForm::ABCD {
            a: ch(&["q1"]),
            b: ch(&["q2"]),
            c: ch(&["q3"]),
            d: ch(&["q4"]),
        };
        let net = expand_pendant(&base, "z", &form).unwrap();
        assert!(network::validate(&net).is_empty());
        assert_eq!(decompose::level(&net), 2);
        assert_eq!(
            classify_pendant(&net, &ts(&["q1", "q2", "q3", "q4"])),
            Ok(form.canon())
        );
    }

    #[test]
    fn bad_form_table() {
        assert!(is_bad_form(&PendantForm::Level1 { a: ch(&["x", "y"]) }));
        assert!(is_bad_form(&PendantForm::A000 { a: ch(&["x", "y", "w"]) }));
        assert!(!is_bad_form(&PendantForm::Level1 { a: ch(&["x", "y", "w", "u"]) }));
        assert!(!is_bad_form(&PendantForm::AB00 { a: ch(&["x"]), b: ch(&["y"]) }));
    }

    #[test]
    fn drop_middle_rewrites_end_pair() {
        let m = shortest_matrix(&level1_net(3));
        let dropped = drop_middle_of_bad_triple(&m, ("x1", "x2", "x3"));
        assert_eq!(dropped.n(), 4);
        assert!(dropped.index_of("x2").is_none());
        assert_eq!(dropped.dm("x1", "x3"), 3);
        assert_eq!(dropped.dm("x1", "y1"), m.dm("x1", "y1"));
        assert_eq!(dropped.dm("y1", "y2"), 2);
    }

    #[test]
    fn level3_blob_is_unrecognized() {
        // K4 with one edge subdivided by the cut vertex and two more
        // carrying single chain leaves.
        let net = Network::from_parts(
            [
                (0, 2),
                (1, 2),
                (1, 3),
                (2, 6),
                (6, 3),
                (6, 7),
                (7, 8),
                (7, 9),
                (0, 4),
                (4, 1),
                (4, 5),
                (0, 10),
                (10, 3),
                (10, 11),
            ],
            [
                ("x1".to_string(), 5),
                ("x2".to_string(), 11),
                ("y1".to_string(), 8),
                ("y2".to_string(), 9),
            ],
        );
        assert!(network::validate(&net).is_empty());
        assert_eq!(
            classify_pendant(&net, &ts(&["x1", "x2"])),
            Err(PendantError::UnrecognizedShape)
        );
    }

    #[test]
    fn unknown_part_is_not_pendant() {
        assert_eq!(
            classify_pendant(&fixtures::golden_network(), &ts(&["a", "b"])),
            Err(PendantError::NotPendant)
        );
    }
}
