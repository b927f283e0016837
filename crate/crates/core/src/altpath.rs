//! Alternating-path structures: the exact obstruction to reconstructing a
//! level-2 network from shortest distances alone.
//!
//! Starting from a properly 2-colored binary tree, each black internal
//! vertex becomes a leafless K(2,3) blob, each red internal vertex stays a
//! plain cut vertex, each black leaf becomes a pendant level-2 blob of shape
//! (s,0,0,0) and each red leaf a pendant cycle with s leaves, for s in
//! {2,3}. Swapping the two colors yields the similar structure; the pair
//! shares its shortest distance matrix while the longest distances differ,
//! so a network containing such a structure cannot be identified from
//! shortest distances. Networks containing none are uniquely determined.
//!
//! Containment is subgraph containment with the structure's leaves left
//! unlabelled: the hanging edges of the pendant pieces may end anywhere in
//! the host, not only at labelled leaves. Because hosts are binary and every
//! internal vertex of a piece already carries full degree, an embedded piece
//! occupies a whole host blob and the connecting tree edges are single host
//! edges. Detection catalogues each blob by shape: cycles of length 3 or 4
//! stand for red leaves and may meet their tree edge at any corner, thetas
//! with path lengths (1,2,3) or (1,2,4) stand for black leaves met at the
//! midpoint of their 2-path, and the (2,2,2) theta, which is K(2,3), stands
//! for a black internal met at all three midpoints. Red internals are plain
//! cut vertices. From any candidate tree edge the rest of a structure is
//! forced, so detection grows every seed edge deterministically and accepts
//! once the hanging ends stay pairwise distinct and clear of the occupied
//! blobs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::decompose;
use crate::network::{Network, Taxon, Vertex};
use crate::pendant::{self, PendantForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AltPathError {
    /// Not a binary tree, or leaf data is missing or unusable.
    InvalidTree,
    /// The 2-coloring is incomplete or not proper.
    InvalidColoring,
    /// The embedding does not match the network it is applied to.
    InvalidEmbedding,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Color {
    Black,
    Red,
}

impl Color {
    pub fn flipped(self) -> Color {
        match self {
            Color::Black => Color::Red,
            Color::Red => Color::Black,
        }
    }
}

/// An unrooted binary tree with properly 2-colored vertices and a name and
/// pendant size for every leaf.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColoredTree {
    /// Undirected edges, stored as given.
    pub edges: BTreeSet<(Vertex, Vertex)>,
    /// Color of every vertex, leaves included.
    pub colors: BTreeMap<Vertex, Color>,
    /// Leaf vertex to its name and pendant blob size (2 or 3).
    pub leaves: BTreeMap<Vertex, (Taxon, u8)>,
}

impl ColoredTree {
    pub fn from_parts(
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
        colors: impl IntoIterator<Item = (Vertex, Color)>,
        leaves: impl IntoIterator<Item = (Vertex, Taxon, u8)>,
    ) -> ColoredTree {
        ColoredTree {
            edges: edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect(),
            colors: colors.into_iter().collect(),
            leaves: leaves
                .into_iter()
                .map(|(v, name, s)| (v, (name, s)))
                .collect(),
        }
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.edges.iter().flat_map(|&(u, v)| [u, v]).collect()
    }

    fn degrees(&self) -> BTreeMap<Vertex, usize> {
        let mut deg: BTreeMap<Vertex, usize> = BTreeMap::new();
        for &(u, v) in &self.edges {
            *deg.entry(u).or_default() += 1;
            *deg.entry(v).or_default() += 1;
        }
        deg
    }

    /// The taxa the built structure will carry: `<name>_1` .. `<name>_s`
    /// per leaf.
    pub fn generated_taxa(&self) -> Vec<Taxon> {
        let mut out = Vec::new();
        for (name, s) in self.leaves.values() {
            for i in 1..=*s {
                out.push(format!("{name}_{i}"));
            }
        }
        out.sort();
        out
    }

    /// Full structural and coloring validation.
    pub fn check(&self) -> Result<(), AltPathError> {
        let deg = self.degrees();
        if self.edges.is_empty() || deg.len() != self.edges.len() + 1 {
            return Err(AltPathError::InvalidTree);
        }
        for (&v, &d) in &deg {
            match d {
                1 if self.leaves.contains_key(&v) => {}
                3 if !self.leaves.contains_key(&v) => {}
                _ => return Err(AltPathError::InvalidTree),
            }
        }
        let mut names = BTreeSet::new();
        for (v, (name, s)) in &self.leaves {
            if !deg.contains_key(v) || name.is_empty() || !(2..=3).contains(s) {
                return Err(AltPathError::InvalidTree);
            }
            if !names.insert(name.clone()) {
                return Err(AltPathError::InvalidTree);
            }
        }
        let generated = self.generated_taxa();
        let distinct: BTreeSet<&Taxon> = generated.iter().collect();
        if distinct.len() != generated.len() || generated.iter().any(|t| names.contains(t)) {
            return Err(AltPathError::InvalidTree);
        }
        // Connectivity: |E| = |V| - 1 plus one sweep reaching everything.
        let mut seen = BTreeSet::new();
        let start = *deg.keys().next().expect("tree has vertices");
        let mut stack = Vec::from([start]);
        while let Some(v) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            for &(a, b) in &self.edges {
                if a == v && !seen.contains(&b) {
                    stack.push(b);
                } else if b == v && !seen.contains(&a) {
                    stack.push(a);
                }
            }
        }
        if seen.len() != deg.len() {
            return Err(AltPathError::InvalidTree);
        }
        for &v in deg.keys() {
            if !self.colors.contains_key(&v) {
                return Err(AltPathError::InvalidColoring);
            }
        }
        for &(u, v) in &self.edges {
            if self.colors[&u] == self.colors[&v] {
                return Err(AltPathError::InvalidColoring);
            }
        }
        Ok(())
    }
}

/// The same tree with every color flipped; building it yields the partner
/// structure with identical shortest distances.
pub fn similar(t: &ColoredTree) -> ColoredTree {
    ColoredTree {
        edges: t.edges.clone(),
        colors: t
            .colors
            .iter()
            .map(|(&v, &c)| (v, c.flipped()))
            .collect(),
        leaves: t.leaves.clone(),
    }
}

/// Builds the alternating-path structure of a colored tree. The pendant
/// blob replacing leaf `name` carries taxa `<name>_1` .. `<name>_s`.
pub fn build_altpath(t: &ColoredTree) -> Result<Network, AltPathError> {
    t.check()?;
    let mut net = Network::new();
    for &(u, v) in &t.edges {
        net.add_edge(u, v);
    }
    for (&v, (name, _)) in &t.leaves {
        net.set_taxon(name.clone(), v);
    }
    for (&v, (name, s)) in &t.leaves {
        let chain: Vec<Taxon> = (1..=*s).map(|i| format!("{name}_{i}")).collect();
        let form = match t.colors[&v] {
            Color::Black => PendantForm::A000 { a: chain },
            Color::Red => PendantForm::Level1 { a: chain },
        };
        net = pendant::expand_pendant(&net, name, &form).map_err(|_| AltPathError::InvalidTree)?;
    }
    for (&v, &color) in &t.colors {
        if color == Color::Black && !t.leaves.contains_key(&v) {
            gadgetize(&mut net, v);
        }
    }
    Ok(net)
}

/// Replaces a degree-3 vertex by the leafless K(2,3) blob, keeping its
/// three neighbors attached one per port.
fn gadgetize(net: &mut Network, v: Vertex) {
    let us: Vec<Vertex> = net.neighbors(v).collect();
    debug_assert_eq!(us.len(), 3);
    net.remove_vertex(v);
    let mut ports = Vec::new();
    for &u in &us {
        let p = net.fresh_vertex();
        net.add_edge(u, p);
        ports.push(p);
    }
    let north = net.fresh_vertex();
    for &p in &ports {
        net.add_edge(north, p);
    }
    let south = net.fresh_vertex();
    for &p in &ports {
        net.add_edge(south, p);
    }
}

/// Undoes [`gadgetize`]: removes the five gadget vertices and joins their
/// three outside neighbors at a fresh plain vertex.
fn ungadgetize(net: &mut Network, gadget: &BTreeSet<Vertex>) -> Result<(), AltPathError> {
    let mut outside = BTreeSet::new();
    for &w in gadget {
        for u in net.neighbors(w) {
            if !gadget.contains(&u) {
                outside.insert(u);
            }
        }
    }
    if outside.len() != 3 {
        return Err(AltPathError::InvalidEmbedding);
    }
    for &w in gadget {
        net.remove_vertex(w);
    }
    let v = net.fresh_vertex();
    for &u in &outside {
        net.add_edge(v, u);
    }
    Ok(())
}

/// Where an alternating-path structure sits inside a host network.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltPathEmbedding {
    /// The witnessing colored tree; vertex ids are fresh and dense.
    pub tree: ColoredTree,
    /// Host vertices forming each tree vertex's image: blob vertices plus
    /// the hanging ends for leaf pieces, the five gadget vertices for black
    /// internals, the lone cut vertex for red internals.
    pub images: BTreeMap<Vertex, BTreeSet<Vertex>>,
    /// Host vertex meeting the tree edge of each leaf piece.
    pub contacts: BTreeMap<Vertex, Vertex>,
}

/// Blob shapes that can take part in a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
enum PatternShape {
    /// Cycle of s+1 corners carrying a red leaf; any corner may meet the
    /// tree edge.
    RedLeaf { cycle: Vec<Vertex>, s: u8 },
    /// Theta with path lengths (1,2,s+1) carrying a black leaf; the tree
    /// edge meets the 2-path midpoint, the long-path midpoints hang free.
    BlackLeaf { contact: Vertex, hangs: Vec<Vertex>, s: u8 },
    /// The (2,2,2) theta, K(2,3); every midpoint meets a tree edge.
    BlackInternal { mids: [Vertex; 3] },
}

/// The single neighbor of `v` outside `inside`, if there is exactly one.
fn lone_outside(net: &Network, inside: &BTreeSet<Vertex>, v: Vertex) -> Option<Vertex> {
    let mut out = net.neighbors(v).filter(|w| !inside.contains(w));
    let first = out.next();
    first.filter(|_| out.next().is_none())
}

/// The corners of a cycle blob in cyclic order.
fn cycle_order(net: &Network, verts: &BTreeSet<Vertex>) -> Option<Vec<Vertex>> {
    let start = *verts.iter().next()?;
    let mut order = Vec::from([start]);
    let mut prev = start;
    let mut cur = net.neighbors(start).find(|w| verts.contains(w))?;
    while cur != start {
        order.push(cur);
        let next = net
            .neighbors(cur)
            .find(|&w| verts.contains(&w) && w != prev)?;
        prev = cur;
        cur = next;
    }
    (order.len() == verts.len()).then_some(order)
}

/// The two degree-3 vertices of a theta blob and its three interior paths,
/// each read from the first pole to the second and sorted by length.
fn theta_paths(
    net: &Network,
    verts: &BTreeSet<Vertex>,
) -> Option<(Vertex, Vertex, Vec<Vec<Vertex>>)> {
    let blob_deg = |v: Vertex| net.neighbors(v).filter(|w| verts.contains(w)).count();
    let poles: Vec<Vertex> = verts.iter().copied().filter(|&v| blob_deg(v) == 3).collect();
    let [p1, p2] = poles[..] else {
        return None;
    };
    let mut paths = Vec::new();
    let mut covered = 2;
    for start in net.neighbors(p1).filter(|w| verts.contains(w)).collect::<Vec<_>>() {
        let mut path = Vec::new();
        let mut prev = p1;
        let mut cur = start;
        while cur != p2 {
            if cur == p1 || blob_deg(cur) != 2 {
                return None;
            }
            path.push(cur);
            let next = net
                .neighbors(cur)
                .find(|&w| verts.contains(&w) && w != prev)?;
            prev = cur;
            cur = next;
        }
        covered += path.len();
        paths.push(path);
    }
    if paths.len() != 3 || covered != verts.len() {
        return None;
    }
    paths.sort_by_key(Vec::len);
    Some((p1, p2, paths))
}

/// Classifies a blob as a structure piece, or `None` for other shapes.
fn blob_shape(net: &Network, verts: &BTreeSet<Vertex>) -> Option<PatternShape> {
    let blob_deg = |v: Vertex| net.neighbors(v).filter(|w| verts.contains(w)).count();
    if verts.iter().all(|&v| blob_deg(v) == 2) {
        let n = verts.len();
        if !(3..=4).contains(&n) {
            return None;
        }
        let cycle = cycle_order(net, verts)?;
        return Some(PatternShape::RedLeaf { cycle, s: n as u8 - 1 });
    }
    let (_, _, paths) = theta_paths(net, verts)?;
    let lens: [usize; 3] = [paths[0].len(), paths[1].len(), paths[2].len()];
    match lens {
        [0, 1, 2] | [0, 1, 3] => Some(PatternShape::BlackLeaf {
            contact: paths[1][0],
            hangs: paths[2].clone(),
            s: lens[2] as u8,
        }),
        [1, 1, 1] => Some(PatternShape::BlackInternal {
            mids: [paths[0][0], paths[1][0], paths[2][0]],
        }),
        _ => None,
    }
}

/// Taxa hanging directly on the given vertices.
fn hanging_taxa(net: &Network, verts: &BTreeSet<Vertex>) -> BTreeSet<Taxon> {
    verts
        .iter()
        .flat_map(|&v| net.neighbors(v))
        .filter_map(|w| net.taxon_of(w).cloned())
        .collect()
}

struct DetectCtx<'a> {
    net: &'a Network,
    blobs: &'a [decompose::Blob],
    shapes: &'a [Option<PatternShape>],
    in_blob: BTreeSet<Vertex>,
    black_contact: BTreeMap<Vertex, usize>,
    red_corner: BTreeMap<Vertex, usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum PatKey {
    Blob(usize),
    Plain(Vertex),
}

struct GrowNode {
    key: PatKey,
    color: Color,
    /// Host vertex meeting the tree edge, for leaf pieces.
    contact: Option<Vertex>,
}

/// Adds the black piece met at contact vertex `c`, queueing the remaining
/// contacts of a K(2,3).
fn add_black(
    ctx: &DetectCtx,
    c: Vertex,
    nodes: &mut Vec<GrowNode>,
    used: &mut BTreeSet<PatKey>,
    pending: &mut Vec<(usize, Vertex, Vertex)>,
) -> Option<usize> {
    let &bi = ctx.black_contact.get(&c)?;
    let key = PatKey::Blob(bi);
    if !used.insert(key) {
        return None;
    }
    let id = nodes.len();
    match ctx.shapes[bi].as_ref().expect("catalogued blob") {
        PatternShape::BlackLeaf { .. } => {
            nodes.push(GrowNode { key, color: Color::Black, contact: Some(c) });
        }
        PatternShape::BlackInternal { mids } => {
            nodes.push(GrowNode { key, color: Color::Black, contact: None });
            for &m in mids {
                if m != c {
                    let far = lone_outside(ctx.net, &ctx.blobs[bi].vertices, m)?;
                    pending.push((id, m, far));
                }
            }
        }
        PatternShape::RedLeaf { .. } => return None,
    }
    Some(id)
}

/// Adds the red piece at `v`: a cycle corner or a plain cut vertex whose
/// remaining edges get queued.
fn add_red(
    ctx: &DetectCtx,
    v: Vertex,
    entered_from: Vertex,
    nodes: &mut Vec<GrowNode>,
    used: &mut BTreeSet<PatKey>,
    pending: &mut Vec<(usize, Vertex, Vertex)>,
) -> Option<usize> {
    if let Some(&bi) = ctx.red_corner.get(&v) {
        let key = PatKey::Blob(bi);
        if !used.insert(key) {
            return None;
        }
        let id = nodes.len();
        nodes.push(GrowNode { key, color: Color::Red, contact: Some(v) });
        return Some(id);
    }
    if ctx.in_blob.contains(&v) || ctx.net.is_leaf(v) || ctx.net.degree(v) != 3 {
        return None;
    }
    let key = PatKey::Plain(v);
    if !used.insert(key) {
        return None;
    }
    let id = nodes.len();
    nodes.push(GrowNode { key, color: Color::Red, contact: None });
    for w in ctx.net.neighbors(v).collect::<Vec<_>>() {
        if w != entered_from {
            pending.push((id, v, w));
        }
    }
    Some(id)
}

/// Grows the structure forced by one candidate tree edge; every internal
/// piece must saturate all its contacts, so there are no choices to make.
fn grow(ctx: &DetectCtx, seed: (Vertex, Vertex)) -> Option<AltPathEmbedding> {
    let mut nodes: Vec<GrowNode> = Vec::new();
    let mut used: BTreeSet<PatKey> = BTreeSet::new();
    let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut pending: Vec<(usize, Vertex, Vertex)> = Vec::new();

    let (c0, t0) = seed;
    let b0 = add_black(ctx, c0, &mut nodes, &mut used, &mut pending)?;
    let r0 = add_red(ctx, t0, c0, &mut nodes, &mut used, &mut pending)?;
    edges.insert((b0.min(r0) as Vertex, b0.max(r0) as Vertex));
    while let Some((from, via, far)) = pending.pop() {
        let added = match nodes[from].color {
            Color::Black => add_red(ctx, far, via, &mut nodes, &mut used, &mut pending)?,
            Color::Red => add_black(ctx, far, &mut nodes, &mut used, &mut pending)?,
        };
        edges.insert((from.min(added) as Vertex, from.max(added) as Vertex));
    }

    let mut pattern_verts: BTreeSet<Vertex> = BTreeSet::new();
    for node in &nodes {
        match node.key {
            PatKey::Blob(bi) => pattern_verts.extend(ctx.blobs[bi].vertices.iter().copied()),
            PatKey::Plain(v) => {
                pattern_verts.insert(v);
            }
        }
    }
    let mut colors: BTreeMap<Vertex, Color> = BTreeMap::new();
    let mut leaves: BTreeMap<Vertex, (Taxon, u8)> = BTreeMap::new();
    let mut images: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    let mut contacts: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut hang_ends: BTreeSet<Vertex> = BTreeSet::new();
    for (id, node) in nodes.iter().enumerate() {
        let tv = id as Vertex;
        colors.insert(tv, node.color);
        match node.key {
            PatKey::Plain(v) => {
                images.insert(tv, BTreeSet::from([v]));
            }
            PatKey::Blob(bi) => {
                let verts = &ctx.blobs[bi].vertices;
                let mut image = verts.clone();
                if let Some(contact) = node.contact {
                    contacts.insert(tv, contact);
                    let (hangs, s): (Vec<Vertex>, u8) =
                        match ctx.shapes[bi].as_ref().expect("catalogued blob") {
                            PatternShape::BlackLeaf { hangs, s, .. } => (hangs.clone(), *s),
                            PatternShape::RedLeaf { cycle, s } => {
                                (cycle.iter().copied().filter(|&x| x != contact).collect(), *s)
                            }
                            PatternShape::BlackInternal { .. } => {
                                unreachable!("internal pieces carry no contact")
                            }
                        };
                    let name = hanging_taxa(ctx.net, verts)
                        .into_iter()
                        .next()
                        .unwrap_or_else(|| format!("s{tv}"));
                    leaves.insert(tv, (name, s));
                    for h in hangs {
                        let y = lone_outside(ctx.net, verts, h)?;
                        // The hanging ends are images of distinct structure
                        // leaves: they may be any host vertices but must not
                        // collide with each other or the occupied pieces.
                        if pattern_verts.contains(&y) || !hang_ends.insert(y) {
                            return None;
                        }
                        image.insert(y);
                    }
                }
                images.insert(tv, image);
            }
        }
    }
    let mut tree = ColoredTree { edges, colors, leaves };
    if tree.check().is_err() {
        // Taxa-derived leaf names can collide; synthetic names cannot.
        for (tv, entry) in tree.leaves.iter_mut() {
            entry.0 = format!("s{tv}");
        }
        if tree.check().is_err() {
            return None;
        }
    }
    Some(AltPathEmbedding { tree, images, contacts })
}

/// Searches the network for an embedded alternating-path structure.
pub fn detect_altpath(net: &Network) -> Option<AltPathEmbedding> {
    let d = decompose::decompose(net);
    let shapes: Vec<Option<PatternShape>> =
        d.blobs.iter().map(|b| blob_shape(net, &b.vertices)).collect();
    let mut in_blob: BTreeSet<Vertex> = BTreeSet::new();
    for b in &d.blobs {
        in_blob.extend(b.vertices.iter().copied());
    }
    let mut black_contact: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut red_corner: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (i, shape) in shapes.iter().enumerate() {
        match shape {
            Some(PatternShape::BlackLeaf { contact, .. }) => {
                black_contact.insert(*contact, i);
            }
            Some(PatternShape::BlackInternal { mids }) => {
                for &m in mids {
                    black_contact.insert(m, i);
                }
            }
            Some(PatternShape::RedLeaf { cycle, .. }) => {
                for &c in cycle {
                    red_corner.insert(c, i);
                }
            }
            None => {}
        }
    }
    let ctx = DetectCtx { net, blobs: &d.blobs, shapes: &shapes, in_blob, black_contact, red_corner };
    let seeds: Vec<(Vertex, Vertex)> = ctx
        .black_contact
        .iter()
        .filter_map(|(&c, &bi)| {
            let t = lone_outside(net, &ctx.blobs[bi].vertices, c)?;
            Some((c, t))
        })
        .collect();
    seeds.into_iter().find_map(|seed| grow(&ctx, seed))
}

/// The blob of the current network lying inside the recorded image.
fn current_blob_in(
    net: &Network,
    image: &BTreeSet<Vertex>,
) -> Result<BTreeSet<Vertex>, AltPathError> {
    let d = decompose::decompose(net);
    d.blobs
        .iter()
        .map(|b| &b.vertices)
        .find(|vs| vs.len() >= 3 && vs.is_subset(image))
        .cloned()
        .ok_or(AltPathError::InvalidEmbedding)
}

/// Theta (1,2,s+1) to the cycle of length s+1, keeping the hanging ends in
/// path order around the new cycle.
fn swap_black_leaf(out: &mut Network, verts: &BTreeSet<Vertex>) -> Result<(), AltPathError> {
    let Some(PatternShape::BlackLeaf { contact, hangs, .. }) = blob_shape(out, verts) else {
        return Err(AltPathError::InvalidEmbedding);
    };
    let uw = lone_outside(out, verts, contact).ok_or(AltPathError::InvalidEmbedding)?;
    let mut ys = Vec::new();
    for &h in &hangs {
        ys.push(lone_outside(out, verts, h).ok_or(AltPathError::InvalidEmbedding)?);
    }
    for &v in verts {
        out.remove_vertex(v);
    }
    let w = out.fresh_vertex();
    out.add_edge(w, uw);
    let mut prev = w;
    for &y in &ys {
        let x = out.fresh_vertex();
        out.add_edge(prev, x);
        out.add_edge(x, y);
        prev = x;
    }
    out.add_edge(prev, w);
    Ok(())
}

/// Cycle of length s+1 to the theta (1,2,s+1), the tree edge moving to the
/// midpoint of the new 2-path.
fn swap_red_leaf(
    out: &mut Network,
    verts: &BTreeSet<Vertex>,
    contact: Vertex,
) -> Result<(), AltPathError> {
    let Some(PatternShape::RedLeaf { cycle, .. }) = blob_shape(out, verts) else {
        return Err(AltPathError::InvalidEmbedding);
    };
    let k = cycle
        .iter()
        .position(|&v| v == contact)
        .ok_or(AltPathError::InvalidEmbedding)?;
    let corners: Vec<Vertex> = (1..cycle.len()).map(|i| cycle[(k + i) % cycle.len()]).collect();
    let uw = lone_outside(out, verts, contact).ok_or(AltPathError::InvalidEmbedding)?;
    let mut ys = Vec::new();
    for &c in &corners {
        ys.push(lone_outside(out, verts, c).ok_or(AltPathError::InvalidEmbedding)?);
    }
    for &v in verts {
        out.remove_vertex(v);
    }
    let w = out.fresh_vertex();
    out.add_edge(w, uw);
    let p1 = out.fresh_vertex();
    out.add_edge(p1, w);
    let p2 = out.fresh_vertex();
    out.add_edge(p2, w);
    out.add_edge(p1, p2);
    let mut prev = p1;
    for &y in &ys {
        let m = out.fresh_vertex();
        out.add_edge(prev, m);
        out.add_edge(m, y);
        prev = m;
    }
    out.add_edge(prev, p2);
    Ok(())
}

/// Replaces the embedded structure by its similar partner: leaf pieces flip
/// between the theta and cycle shapes keeping their hanging ends, gadgets
/// collapse to plain vertices and plain vertices grow gadgets.
pub fn swap_in_place(net: &Network, emb: &AltPathEmbedding) -> Result<Network, AltPathError> {
    emb.tree.check().map_err(|_| AltPathError::InvalidEmbedding)?;
    let mut out = net.clone();
    for (&tv, &color) in &emb.tree.colors {
        let image = emb.images.get(&tv).ok_or(AltPathError::InvalidEmbedding)?;
        let is_leaf = emb.tree.leaves.contains_key(&tv);
        match (color, is_leaf) {
            (Color::Red, false) => {
                let [v] = image.iter().copied().collect::<Vec<_>>()[..] else {
                    return Err(AltPathError::InvalidEmbedding);
                };
                if !out.vertices().any(|w| w == v) || out.degree(v) != 3 || out.is_leaf(v) {
                    return Err(AltPathError::InvalidEmbedding);
                }
                gadgetize(&mut out, v);
            }
            (Color::Black, false) => {
                let verts = current_blob_in(&out, image)?;
                if !matches!(blob_shape(&out, &verts), Some(PatternShape::BlackInternal { .. })) {
                    return Err(AltPathError::InvalidEmbedding);
                }
                ungadgetize(&mut out, &verts)?;
            }
            (Color::Black, true) => {
                let verts = current_blob_in(&out, image)?;
                swap_black_leaf(&mut out, &verts)?;
            }
            (Color::Red, true) => {
                let verts = current_blob_in(&out, image)?;
                let contact = *emb.contacts.get(&tv).ok_or(AltPathError::InvalidEmbedding)?;
                swap_red_leaf(&mut out, &verts, contact)?;
            }
        }
    }
    Ok(out)
}

/// A level-2 network is determined by its shortest distance matrix exactly
/// when it embeds no alternating-path structure.
pub fn is_shortest_reconstructible(net: &Network) -> bool {
    detect_altpath(net).is_none()
}
