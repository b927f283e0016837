//! Text formats: network files, distance matrix files, colored tree files,
//! and DOT export.
//!
//! Serializers emit a canonical form (sorted records, single separators,
//! `\n` line endings, trailing newline) and parsers accept exactly what the
//! matching serializer emits, so canonical files round-trip byte-exactly.
//! Network and tree files additionally allow `#` comments and blank lines
//! on input; matrix files are fully rigid.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use phynet_core::altpath::{Color, ColoredTree};
use phynet_core::metrics::{Matrix, ShortestMatrix, SlMatrix};
use phynet_core::{Network, Taxon, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number, 0 when the problem concerns the whole file.
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.msg)
        } else {
            write!(f, "line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

fn valid_taxon(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_vertex(s: &str, line: usize) -> Result<Vertex, ParseError> {
    if s.is_empty() || !s.chars().all(|c| c.is_ascii_digit()) {
        return err(line, format!("expected a vertex id, got `{s}`"));
    }
    s.parse().map_err(|_| ParseError {
        line,
        msg: format!("vertex id `{s}` out of range"),
    })
}

/// Parses the network text format: `leaf <taxon> <vertex-id>` and
/// `edge <id> <id>` records, one per line. Structural validity is not
/// checked here.
pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let mut net = Network::new();
    let mut seen_edges = BTreeSet::new();
    let mut any = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields.as_slice() {
            ["leaf", taxon, id] => {
                if !valid_taxon(taxon) {
                    return err(line, format!("invalid taxon `{taxon}`"));
                }
                let v = parse_vertex(id, line)?;
                if net.leaf_vertex(taxon).is_some() {
                    return err(line, format!("duplicate taxon `{taxon}`"));
                }
                if net.taxon_of(v).is_some() {
                    return err(line, format!("vertex {v} is already labelled"));
                }
                net.add_vertex(v);
                net.set_taxon(*taxon, v);
            }
            ["edge", a, b] => {
                let u = parse_vertex(a, line)?;
                let v = parse_vertex(b, line)?;
                if u == v {
                    return err(line, format!("self-loop at vertex {u}"));
                }
                if !seen_edges.insert((u.min(v), u.max(v))) {
                    return err(line, format!("duplicate edge {u} {v}"));
                }
                net.add_edge(u, v);
            }
            _ => return err(line, format!("unrecognized record `{trimmed}`")),
        }
        any = true;
    }
    if !any {
        return err(0, "empty network file");
    }
    Ok(net)
}

/// Canonical network text: sorted `leaf` records, then sorted `edge`
/// records.
pub fn serialize_network(net: &Network) -> String {
    let mut out = String::new();
    for (t, v) in net.taxa() {
        out.push_str(&format!("leaf {t} {v}\n"));
    }
    for (u, v) in net.edges() {
        out.push_str(&format!("edge {u} {v}\n"));
    }
    out
}

struct MatrixFile {
    taxa: Vec<Taxon>,
    cells: Vec<Vec<String>>,
}

fn parse_matrix_file(text: &str) -> Result<MatrixFile, ParseError> {
    if text.contains('\r') {
        return err(0, "matrix files use \\n line endings");
    }
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() < 2 {
        return err(0, "matrix file needs a size line and a taxa line");
    }
    let n: usize = match lines[0].parse() {
        Ok(n) if n >= 2 => n,
        _ => return err(1, format!("expected a taxon count of at least 2, got `{}`", lines[0])),
    };
    if lines.len() != n + 2 {
        return err(0, format!("expected {} lines for {n} taxa, found {}", n + 2, lines.len()));
    }
    let taxa: Vec<Taxon> = lines[1].split('\t').map(str::to_owned).collect();
    if taxa.len() != n {
        return err(2, format!("expected {n} taxa, found {}", taxa.len()));
    }
    for t in &taxa {
        if !valid_taxon(t) {
            return err(2, format!("invalid taxon `{t}`"));
        }
    }
    if !taxa.windows(2).all(|w| w[0] < w[1]) {
        return err(2, "taxa must be sorted and distinct");
    }
    let mut cells = Vec::new();
    for (i, row) in lines[2..].iter().enumerate() {
        let row: Vec<String> = row.split('\t').map(str::to_owned).collect();
        if row.len() != n {
            return err(i + 3, format!("expected {n} cells, found {}", row.len()));
        }
        cells.push(row);
    }
    Ok(MatrixFile { taxa, cells })
}

fn parse_u32(s: &str, line: usize) -> Result<u32, ParseError> {
    if s.is_empty() || !s.chars().all(|c| c.is_ascii_digit()) {
        return err(line, format!("expected a distance, got `{s}`"));
    }
    s.parse().map_err(|_| ParseError {
        line,
        msg: format!("distance `{s}` out of range"),
    })
}

fn check_grid(cells: &[Vec<u32>]) -> Result<(), ParseError> {
    let n = cells.len();
    for i in 0..n {
        if cells[i][i] != 0 {
            return err(i + 3, "diagonal cells must be 0");
        }
        for j in 0..n {
            if cells[i][j] != cells[j][i] {
                return err(i + 3, format!("cell ({i},{j}) is not symmetric"));
            }
        }
    }
    Ok(())
}

/// Parses a paired-distance matrix file whose cells are `dm:dl`.
pub fn parse_sl_matrix(text: &str) -> Result<SlMatrix, ParseError> {
    let file = parse_matrix_file(text)?;
    let n = file.taxa.len();
    let mut dm = vec![vec![0u32; n]; n];
    let mut dl = vec![vec![0u32; n]; n];
    for (i, row) in file.cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let Some((m, l)) = cell.split_once(':') else {
                return err(i + 3, format!("expected `shortest:longest` cells, got `{cell}`"));
            };
            dm[i][j] = parse_u32(m, i + 3)?;
            dl[i][j] = parse_u32(l, i + 3)?;
            if dl[i][j] < dm[i][j] {
                return err(i + 3, format!("longest below shortest in cell `{cell}`"));
            }
        }
    }
    check_grid(&dm)?;
    check_grid(&dl)?;
    Ok(SlMatrix::from_fn(file.taxa, |i, j| (dm[i][j], dl[i][j])))
}

/// Parses a shortest-distance matrix file whose cells are bare integers.
pub fn parse_shortest_matrix(text: &str) -> Result<ShortestMatrix, ParseError> {
    let file = parse_matrix_file(text)?;
    let n = file.taxa.len();
    let mut d = vec![vec![0u32; n]; n];
    for (i, row) in file.cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            d[i][j] = parse_u32(cell, i + 3)?;
        }
    }
    check_grid(&d)?;
    Ok(ShortestMatrix::from_fn(file.taxa, |i, j| (d[i][j], 0)))
}

fn serialize_matrix_with(taxa: &[Taxon], cell: impl Fn(usize, usize) -> String) -> String {
    let n = taxa.len();
    let mut out = format!("{n}\n");
    out.push_str(&taxa.join("\t"));
    out.push('\n');
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| cell(i, j)).collect();
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

pub fn serialize_sl_matrix(m: &SlMatrix) -> String {
    serialize_matrix_with(m.taxa(), |i, j| {
        if i == j {
            "0:0".to_owned()
        } else {
            format!("{}:{}", m.dm_at(i, j), m.dl_at(i, j).unwrap())
        }
    })
}

pub fn serialize_shortest_matrix(m: &ShortestMatrix) -> String {
    serialize_matrix_with(m.taxa(), |i, j| m.dm_at(i, j).to_string())
}

fn parse_color(s: &str, line: usize) -> Result<Color, ParseError> {
    match s {
        "black" => Ok(Color::Black),
        "red" => Ok(Color::Red),
        _ => err(line, format!("expected `black` or `red`, got `{s}`")),
    }
}

fn color_name(c: Color) -> &'static str {
    match c {
        Color::Black => "black",
        Color::Red => "red",
    }
}

/// Parses the colored tree format: `leaf <name> <color> <size>` declares a
/// leaf, `color <id> <black|red>` declares an internal vertex, and
/// `edge <u> <v>` records reference internals by id and leaves by name.
/// Leaf names must not be all digits, to stay distinguishable from ids.
/// Shape checks are left to [`ColoredTree::check`].
pub fn parse_colored_tree(text: &str) -> Result<ColoredTree, ParseError> {
    let mut leaf_lines: BTreeMap<String, (Color, u8)> = BTreeMap::new();
    let mut colors: BTreeMap<Vertex, Color> = BTreeMap::new();
    let mut edge_lines: Vec<(String, String, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields.as_slice() {
            ["leaf", name, color, size] => {
                if !valid_taxon(name) || name.chars().all(|c| c.is_ascii_digit()) {
                    return err(line, format!("invalid leaf name `{name}`"));
                }
                let color = parse_color(color, line)?;
                let size: u8 = size
                    .parse()
                    .map_err(|_| ParseError { line, msg: format!("invalid size `{size}`") })?;
                if leaf_lines.insert((*name).to_owned(), (color, size)).is_some() {
                    return err(line, format!("duplicate leaf `{name}`"));
                }
            }
            ["color", id, color] => {
                let v = parse_vertex(id, line)?;
                let color = parse_color(color, line)?;
                if colors.insert(v, color).is_some() {
                    return err(line, format!("duplicate color for vertex {v}"));
                }
            }
            ["edge", a, b] => {
                edge_lines.push(((*a).to_owned(), (*b).to_owned(), line));
            }
            _ => return err(line, format!("unrecognized record `{trimmed}`")),
        }
    }
    let base = colors.keys().max().map_or(0, |&m| m + 1);
    let leaf_ids: BTreeMap<&String, Vertex> = leaf_lines
        .keys()
        .enumerate()
        .map(|(i, name)| (name, base + i as Vertex))
        .collect();
    let resolve = |tok: &String, line: usize| -> Result<Vertex, ParseError> {
        if tok.chars().all(|c| c.is_ascii_digit()) && !tok.is_empty() {
            let v = parse_vertex(tok, line)?;
            if !colors.contains_key(&v) {
                return err(line, format!("internal vertex {v} has no color record"));
            }
            Ok(v)
        } else if let Some(&v) = leaf_ids.get(tok) {
            Ok(v)
        } else {
            err(line, format!("unknown vertex `{tok}`"))
        }
    };
    let mut edges = Vec::new();
    for (a, b, line) in &edge_lines {
        edges.push((resolve(a, *line)?, resolve(b, *line)?));
    }
    let all_colors = colors.into_iter().chain(
        leaf_lines
            .iter()
            .map(|(name, &(color, _))| (leaf_ids[name], color)),
    );
    let leaves = leaf_lines
        .iter()
        .map(|(name, &(_, size))| (leaf_ids[name], name.clone(), size));
    Ok(ColoredTree::from_parts(edges, all_colors, leaves))
}

/// Canonical colored tree text: sorted `leaf` records, `color` records for
/// internal vertices, then `edge` records sorted by their rendered
/// endpoints.
pub fn serialize_colored_tree(t: &ColoredTree) -> String {
    let mut out = String::new();
    let mut leaf_records: Vec<(&String, &Vertex, u8)> = t
        .leaves
        .iter()
        .map(|(v, (name, size))| (name, v, *size))
        .collect();
    leaf_records.sort();
    for (name, v, size) in leaf_records {
        out.push_str(&format!("leaf {name} {} {size}\n", color_name(t.colors[v])));
    }
    for (v, &color) in &t.colors {
        if !t.leaves.contains_key(v) {
            out.push_str(&format!("color {v} {}\n", color_name(color)));
        }
    }
    let render = |v: &Vertex| -> String {
        t.leaves
            .get(v)
            .map_or_else(|| v.to_string(), |(name, _)| name.clone())
    };
    let mut lines: Vec<(String, String)> = t
        .edges
        .iter()
        .map(|(u, v)| {
            let (a, b) = (render(u), render(v));
            if a <= b { (a, b) } else { (b, a) }
        })
        .collect();
    lines.sort();
    for (a, b) in lines {
        out.push_str(&format!("edge {a} {b}\n"));
    }
    out
}

/// Graphviz DOT export: leaves boxed and labelled with their taxon,
/// internal vertices as points, records sorted by vertex id.
pub fn to_dot(net: &Network) -> String {
    let mut out = String::from("graph network {\n");
    for v in net.vertices() {
        match net.taxon_of(v) {
            Some(t) => out.push_str(&format!("    {v} [shape=box, label=\"{t}\"];\n")),
            None => out.push_str(&format!("    {v} [shape=point];\n")),
        }
    }
    for (u, v) in net.edges() {
        out.push_str(&format!("    {u} -- {v};\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use phynet_core::metrics::{shortest_matrix, sl_matrix};
    use phynet_core::testkit::{self, GenParams};
    use phynet_core::{fixtures, iso};

    fn sample_networks() -> Vec<Network> {
        let mut nets = vec![
            fixtures::golden_network(),
            fixtures::ambiguous_pair().0,
            fixtures::ambiguous_pair().1,
            fixtures::genside_demo(),
            fixtures::level3_grid(),
        ];
        for seed in 0..20 {
            nets.push(testkit::random_network(&GenParams { seed, ..GenParams::default() }).unwrap());
            nets.push(
                testkit::random_network(&GenParams {
                    leaves: (6, 30),
                    require_leaf_every_side: true,
                    max_level: 1 + (seed % 3) as u32,
                    seed,
                    ..GenParams::default()
                })
                .unwrap(),
            );
        }
        nets
    }

    #[test]
    fn network_files_round_trip() {
        for net in sample_networks() {
            let text = serialize_network(&net);
            let parsed = parse_network(&text).unwrap();
            assert_eq!(parsed, net);
            assert_eq!(serialize_network(&parsed), text);
        }
    }

    #[test]
    fn network_parse_tolerates_comments_and_order() {
        let text = "# a triangle with two leaves\nedge 0 1\n\nleaf x 3\nedge 1 2\nedge 0 2\nleaf y 4\nedge 0 3\nedge 1 4\n";
        let net = parse_network(text).unwrap();
        assert_eq!(net.n_taxa(), 2);
        assert_eq!(net.n_edges(), 5);
    }

    #[test]
    fn network_parse_rejects_malformed_input() {
        let cases = [
            ("", "empty"),
            ("vertex 0 1\n", "unrecognized"),
            ("leaf a 0\nleaf a 1\n", "duplicate taxon"),
            ("leaf a 0\nleaf b 0\n", "already labelled"),
            ("edge 0 0\n", "self-loop"),
            ("edge 0 1\nedge 1 0\n", "duplicate edge"),
            ("leaf a* 0\n", "invalid taxon"),
            ("edge 0\n", "unrecognized"),
            ("leaf a x\n", "vertex id"),
        ];
        for (text, needle) in cases {
            let e = parse_network(text).unwrap_err();
            assert!(e.to_string().contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn matrix_files_round_trip() {
        for net in sample_networks() {
            let sm = shortest_matrix(&net);
            let text = serialize_shortest_matrix(&sm);
            let parsed = parse_shortest_matrix(&text).unwrap();
            assert_eq!(parsed, sm);
            assert_eq!(serialize_shortest_matrix(&parsed), text);
        }
        let slm = sl_matrix(&fixtures::golden_network()).unwrap();
        let text = serialize_sl_matrix(&slm);
        let parsed = parse_sl_matrix(&text).unwrap();
        assert_eq!(parsed, slm);
        assert_eq!(serialize_sl_matrix(&parsed), text);
    }

    #[test]
    fn matrix_parse_rejects_malformed_input() {
        let ok = "2\na\tb\n0\t4\n4\t0\n";
        assert!(parse_shortest_matrix(ok).is_ok());
        let cases = [
            ("1\na\n0\n", "at least 2"),
            ("2\nb\ta\n0\t4\n4\t0\n", "sorted"),
            ("2\na\tb\n0\t4\n5\t0\n", "symmetric"),
            ("2\na\tb\n1\t4\n4\t0\n", "diagonal"),
            ("2\na\tb\n0\t4\n4\t0\n\n", "lines"),
            ("2\na\tb\n0\t4\t7\n4\t0\n", "cells"),
            ("2\na\tb\n0\t4:8\n4:8\t0\n", "distance"),
            ("2\na\tb\r\n0\t4\n4\t0\n", "line endings"),
        ];
        for (text, needle) in cases {
            let e = parse_shortest_matrix(text).unwrap_err();
            assert!(e.to_string().contains(needle), "{text:?}: {e}");
        }
        let e = parse_sl_matrix("2\na\tb\n0:0\t8:4\n8:4\t0:0\n").unwrap_err();
        assert!(e.to_string().contains("longest below shortest"));
        let e = parse_sl_matrix("2\na\tb\n0\t4\n4\t0\n").unwrap_err();
        assert!(e.to_string().contains("shortest:longest"));
    }

    #[test]
    fn colored_tree_files_round_trip() {
        for seed in 0..20 {
            let tree = testkit::random_colored_tree((2, 8), seed).unwrap();
            let text = serialize_colored_tree(&tree);
            let parsed = parse_colored_tree(&text).unwrap();
            assert_eq!(parsed.check(), Ok(()));
            assert_eq!(serialize_colored_tree(&parsed), text);
            let names = |t: &ColoredTree| -> Vec<(String, u8)> {
                t.leaves.values().cloned().collect()
            };
            assert_eq!(names(&parsed), names(&tree));
            assert_eq!(parsed.edges.len(), tree.edges.len());
        }
    }

    #[test]
    fn colored_tree_leaf_only_edges_parse() {
        let text = "leaf x black 2\nleaf y red 3\nedge x y\n";
        let tree = parse_colored_tree(text).unwrap();
        assert_eq!(tree.check(), Ok(()));
        assert_eq!(serialize_colored_tree(&tree), text);
    }

    #[test]
    fn colored_tree_parse_rejects_malformed_input() {
        let cases = [
            ("leaf 12 black 2\nedge 12 0\n", "invalid leaf name"),
            ("leaf x blue 2\n", "black"),
            ("leaf x black 2\nedge x 0\n", "no color record"),
            ("leaf x black 2\nedge x y\n", "unknown vertex"),
            ("leaf x black 2\nleaf x red 2\n", "duplicate leaf"),
            ("color 0 black\ncolor 0 red\n", "duplicate color"),
        ];
        for (text, needle) in cases {
            let e = parse_colored_tree(text).unwrap_err();
            assert!(e.to_string().contains(needle), "{text:?}: {e}");
        }
    }

    #[test]
    fn dot_output_is_stable_and_marks_leaves() {
        let net = fixtures::golden_network();
        let dot = to_dot(&net);
        assert!(dot.starts_with("graph network {\n"));
        assert!(dot.ends_with("}\n"));
        assert_eq!(dot.matches("shape=box").count(), net.n_taxa());
        assert_eq!(dot.matches(" -- ").count(), net.n_edges());
        assert_eq!(to_dot(&net), dot);
    }

    #[test]
    fn parsed_networks_stay_isomorphic() {
        let net = fixtures::golden_network();
        let parsed = parse_network(&serialize_network(&net)).unwrap();
        assert_eq!(iso::is_isomorphic(&parsed, &net), Ok(true));
    }
}
