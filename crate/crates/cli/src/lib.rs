//! Command-line front end: thin wrappers over the core library plus the
//! text formats in [`formats`].
//!
//! Every command maps to one library operation and reports through stable
//! exit codes so scripts can branch on outcomes without scraping output.

pub mod formats;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use phynet_core::altpath::{self, ColoredTree};
use phynet_core::metrics::{shortest_matrix, sl_matrix};
use phynet_core::network::validate;
use phynet_core::pendant::{self, PendantForm};
use phynet_core::reconstruct::{self, ReconstructionResult};
use phynet_core::splits::{all_splits, Split};
use phynet_core::testkit::{self, GenParams, Mode};
use phynet_core::{decompose, iso, Network, Taxon};

/// Success; also: unique reconstruction, structure found, pass, isomorphic.
pub const EXIT_OK: i32 = 0;
/// Clean negative result: no structure found, not isomorphic, check failed.
pub const EXIT_ABSENT: i32 = 1;
/// Reconstruction finished with several candidate networks.
pub const EXIT_AMBIGUOUS: i32 = 10;
/// Reconstruction or another operation failed on well-formed input.
pub const EXIT_UNREALIZABLE: i32 = 20;
/// Command-line usage error.
pub const EXIT_USAGE: i32 = 64;
/// Unreadable, unparseable, or invalid input file.
pub const EXIT_BAD_INPUT: i32 = 65;

const EXIT_CODE_HELP: &str = "Exit codes:
  0   success (unique result, structure found, pass, isomorphic)
  1   clean negative result (nothing found, not isomorphic, check failed)
  10  ambiguous reconstruction (several candidate networks)
  20  operation failed on well-formed input (unrealizable matrix, level too high)
  64  usage error
  65  unreadable, unparseable, or invalid input file";

struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn new(code: i32, msg: impl Into<String>) -> Failure {
        Failure { code, msg: msg.into() }
    }
}

type CmdResult = Result<i32, Failure>;

#[derive(Parser)]
#[command(name = "phynet", version, about = "Distance matrices and reconstruction for low-level phylogenetic networks", after_help = EXIT_CODE_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixKind {
    /// Paired shortest:longest distances.
    Sl,
    /// Shortest distances only.
    Shortest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RecMode {
    /// From paired shortest and longest distances.
    Sl,
    /// From shortest distances only.
    Shortest,
    /// From shortest distances of a network with a leaf on every generator
    /// side.
    Genside,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the distance matrix of a network file.
    Distances {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "sl")]
        mode: MatrixKind,
    },
    /// Rebuild networks from a distance matrix file.
    Reconstruct {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: RecMode,
        /// Print every candidate when the result is ambiguous.
        #[arg(long)]
        all: bool,
        /// Branching budget for shortest-mode search.
        #[arg(long, value_name = "N")]
        budget: Option<u32>,
    },
    /// Compare matrix-derived splits against the network's cut-edge splits.
    CheckSplits {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Identify the pendant blob shape behind a set of taxa.
    ClassifyPendant {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Comma-separated taxa of the part, e.g. `a,b,c1,c2`.
        #[arg(long, value_name = "TAXA")]
        part: String,
    },
    /// Alternating-path structure tools.
    Altpath {
        #[command(subcommand)]
        command: AltpathCommand,
    },
    /// Generate a seeded random network.
    Random {
        #[arg(long)]
        seed: u64,
        /// Leaf count, `N` or `LO..HI`.
        #[arg(long, value_parser = parse_range, value_name = "RANGE")]
        leaves: Option<(u32, u32)>,
        /// Blob count, `N` or `LO..HI`.
        #[arg(long, value_parser = parse_range, value_name = "RANGE")]
        blobs: Option<(u32, u32)>,
        /// Leaves per chain, `N` or `LO..HI`.
        #[arg(long, value_parser = parse_range, value_name = "RANGE")]
        chains: Option<(u32, u32)>,
        /// Sampling weights for blob levels 0..2, e.g. `1,2,2`.
        #[arg(long, value_parser = parse_weights, value_name = "W0,W1,W2")]
        level_weights: Option<[u32; 3]>,
        /// Permit the pendant blob shapes that shortest distances cannot
        /// settle.
        #[arg(long)]
        allow_bad_blobs: bool,
        /// Generate a network with a leaf on every generator side.
        #[arg(long)]
        leaf_every_side: bool,
        /// Largest blob level for leaf-on-every-side generation (1..3).
        #[arg(long, value_name = "N")]
        max_level: Option<u32>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Round-trip a network through its matrix and compare by isomorphism.
    Verify {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: RecMode,
    },
    /// Test two network files for isomorphism.
    Iso {
        a: PathBuf,
        b: PathBuf,
    },
    /// Emit Graphviz DOT for a network file.
    Dot {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AltpathCommand {
    /// Search a network for an alternating-path structure; print its
    /// colored tree when found.
    Detect {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Build the two networks of a colored tree's similar pair.
    MakePair {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long, value_name = "FILE")]
        out1: PathBuf,
        #[arg(long, value_name = "FILE")]
        out2: PathBuf,
    },
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let num = |x: &str| x.parse::<u32>().map_err(|_| format!("invalid number `{x}`"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok((num(lo)?, num(hi)?)),
        None => {
            let n = num(s)?;
            Ok((n, n))
        }
    }
}

fn parse_weights(s: &str) -> Result<[u32; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected three comma-separated weights".to_owned());
    }
    let mut w = [0u32; 3];
    for (slot, part) in w.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| format!("invalid weight `{part}`"))?;
    }
    Ok(w)
}

/// Parses argv and runs the selected command, returning the process exit
/// code. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", f.msg);
            f.code
        }
    }
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::Distances { input, out, mode } => cmd_distances(&input, out.as_deref(), mode),
        Command::Reconstruct { input, out, mode, all, budget } => {
            cmd_reconstruct(&input, out.as_deref(), mode, all, budget)
        }
        Command::CheckSplits { input } => cmd_check_splits(&input),
        Command::ClassifyPendant { input, part } => cmd_classify_pendant(&input, &part),
        Command::Altpath { command } => match command {
            AltpathCommand::Detect { input } => cmd_altpath_detect(&input),
            AltpathCommand::MakePair { tree, out1, out2 } => cmd_altpath_make_pair(&tree, &out1, &out2),
        },
        Command::Random {
            seed,
            leaves,
            blobs,
            chains,
            level_weights,
            allow_bad_blobs,
            leaf_every_side,
            max_level,
            out,
        } => {
            let defaults = GenParams::default();
            let params = GenParams {
                leaves: leaves.unwrap_or(defaults.leaves),
                blobs: blobs.unwrap_or(defaults.blobs),
                level_weights: level_weights.unwrap_or(defaults.level_weights),
                chain_lengths: chains.unwrap_or(defaults.chain_lengths),
                allow_bad_blobs,
                require_leaf_every_side: leaf_every_side,
                max_level: max_level.unwrap_or(defaults.max_level),
                seed,
            };
            cmd_random(&params, out.as_deref())
        }
        Command::Verify { input, mode } => cmd_verify(&input, mode),
        Command::Iso { a, b } => cmd_iso(&a, &b),
        Command::Dot { input, out } => {
            let net = load_network(&input)?;
            emit(out.as_deref(), &formats::to_dot(&net))?;
            Ok(EXIT_OK)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_BAD_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<Network, Failure> {
    let net = formats::parse_network(&read_file(path)?)
        .map_err(|e| Failure::new(EXIT_BAD_INPUT, format!("{}: {e}", path.display())))?;
    let violations = validate(&net);
    if !violations.is_empty() {
        return Err(Failure::new(
            EXIT_BAD_INPUT,
            format!("{}: invalid network: {violations:?}", path.display()),
        ));
    }
    Ok(net)
}

fn load_tree(path: &Path) -> Result<ColoredTree, Failure> {
    let tree = formats::parse_colored_tree(&read_file(path)?)
        .map_err(|e| Failure::new(EXIT_BAD_INPUT, format!("{}: {e}", path.display())))?;
    tree.check()
        .map_err(|e| Failure::new(EXIT_BAD_INPUT, format!("{}: invalid tree: {e:?}", path.display())))?;
    Ok(tree)
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::new(EXIT_BAD_INPUT, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_distances(input: &Path, out: Option<&Path>, mode: MatrixKind) -> CmdResult {
    let net = load_network(input)?;
    let text = match mode {
        MatrixKind::Sl => {
            let m = sl_matrix(&net).map_err(|e| {
                Failure::new(EXIT_UNREALIZABLE, format!("longest distances unavailable: {e:?}"))
            })?;
            formats::serialize_sl_matrix(&m)
        }
        MatrixKind::Shortest => formats::serialize_shortest_matrix(&shortest_matrix(&net)),
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_reconstruct(
    input: &Path,
    out: Option<&Path>,
    mode: RecMode,
    all: bool,
    budget: Option<u32>,
) -> CmdResult {
    let text = read_file(input)?;
    let bad = |e: formats::ParseError| Failure::new(EXIT_BAD_INPUT, format!("{}: {e}", input.display()));
    let result = match mode {
        RecMode::Sl => reconstruct::reconstruct_sl(&formats::parse_sl_matrix(&text).map_err(bad)?),
        RecMode::Shortest => {
            let m = formats::parse_shortest_matrix(&text).map_err(bad)?;
            match budget {
                Some(b) => reconstruct::reconstruct_shortest_with_budget(&m, b),
                None => reconstruct::reconstruct_shortest(&m),
            }
        }
        RecMode::Genside => {
            reconstruct::reconstruct_genside(&formats::parse_shortest_matrix(&text).map_err(bad)?)
        }
    };
    match result {
        ReconstructionResult::Unique(net) => {
            emit(out, &formats::serialize_network(&net))?;
            Ok(EXIT_OK)
        }
        ReconstructionResult::Ambiguous(nets) => {
            eprintln!("ambiguous: {} candidate networks", nets.len());
            if all {
                let mut text = String::new();
                for (i, net) in nets.iter().enumerate() {
                    text.push_str(&format!("# network {}\n", i + 1));
                    text.push_str(&formats::serialize_network(net));
                }
                emit(out, &text)?;
            }
            Ok(EXIT_AMBIGUOUS)
        }
        ReconstructionResult::Unrealizable(reason) => {
            Err(Failure::new(EXIT_UNREALIZABLE, format!("unrealizable: {reason:?}")))
        }
    }
}

fn split_line(s: &Split) -> String {
    let join = |side: &std::collections::BTreeSet<Taxon>| -> String {
        side.iter().cloned().collect::<Vec<_>>().join(",")
    };
    format!("{} | {}", join(&s.a), join(&s.b))
}

fn cmd_check_splits(input: &Path) -> CmdResult {
    let net = load_network(input)?;
    let m = shortest_matrix(&net);
    let from_matrix = all_splits(&m)
        .map_err(|e| Failure::new(EXIT_UNREALIZABLE, format!("split enumeration failed: {e:?}")))?;
    let taxa = net.taxa_set();
    let mut structural = std::collections::BTreeSet::new();
    for (u, v) in decompose::bridges(&net) {
        let side = net.taxa_beyond(u, v);
        let rest = taxa.difference(&side).cloned().collect();
        structural.insert(Split::new(side, rest));
    }
    let mut clean = true;
    for s in from_matrix.difference(&structural) {
        println!("matrix-only: {}", split_line(s));
        clean = false;
    }
    for s in structural.difference(&from_matrix) {
        println!("network-only: {}", split_line(s));
        clean = false;
    }
    if clean {
        println!("match: {} splits", structural.len());
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_ABSENT)
    }
}

fn form_line(form: &PendantForm) -> String {
    let chain = |c: &[Taxon]| c.join(",");
    match form {
        PendantForm::Level1 { a } => format!("level1 a={}", chain(a)),
        PendantForm::A000 { a } => format!("a000 a={}", chain(a)),
        PendantForm::AB00 { a, b } => format!("ab00 a={} b={}", chain(a), chain(b)),
        PendantForm::A0C0 { a, c } => format!("a0c0 a={} c={}", chain(a), chain(c)),
        PendantForm::ABC0 { a, b, c } => {
            format!("abc0 a={} b={} c={}", chain(a), chain(b), chain(c))
        }
        PendantForm::A0CD { a, c, d } => {
            format!("a0cd a={} c={} d={}", chain(a), chain(c), chain(d))
        }
        PendantForm::ABCD { a, b, c, d } => {
            format!("abcd a={} b={} c={} d={}", chain(a), chain(b), chain(c), chain(d))
        }
    }
}

fn cmd_classify_pendant(input: &Path, part: &str) -> CmdResult {
    let net = load_network(input)?;
    let taxa: std::collections::BTreeSet<Taxon> = part
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect();
    if taxa.is_empty() {
        return Err(Failure::new(EXIT_USAGE, "empty --part"));
    }
    match pendant::classify_pendant(&net, &taxa) {
        Ok(form) => {
            println!("{}", form_line(&form));
            Ok(EXIT_OK)
        }
        Err(e) => Err(Failure::new(EXIT_UNREALIZABLE, format!("not a pendant blob part: {e:?}"))),
    }
}

fn cmd_altpath_detect(input: &Path) -> CmdResult {
    let net = load_network(input)?;
    match altpath::detect_altpath(&net) {
        Some(emb) => {
            print!("{}", formats::serialize_colored_tree(&emb.tree));
            Ok(EXIT_OK)
        }
        None => {
            eprintln!("no alternating-path structure");
            Ok(EXIT_ABSENT)
        }
    }
}

fn cmd_altpath_make_pair(tree: &Path, out1: &Path, out2: &Path) -> CmdResult {
    let t = load_tree(tree)?;
    let build = |t: &ColoredTree| {
        altpath::build_altpath(t)
            .map_err(|e| Failure::new(EXIT_UNREALIZABLE, format!("cannot build pair: {e:?}")))
    };
    let n1 = build(&t)?;
    let n2 = build(&altpath::similar(&t))?;
    emit(Some(out1), &formats::serialize_network(&n1))?;
    emit(Some(out2), &formats::serialize_network(&n2))?;
    Ok(EXIT_OK)
}

fn cmd_random(params: &GenParams, out: Option<&Path>) -> CmdResult {
    let net = testkit::random_network(params)
        .map_err(|e| Failure::new(EXIT_USAGE, format!("cannot generate: {e:?}")))?;
    emit(out, &formats::serialize_network(&net))?;
    Ok(EXIT_OK)
}

fn cmd_verify(input: &Path, mode: RecMode) -> CmdResult {
    let net = load_network(input)?;
    let mode = match mode {
        RecMode::Sl => Mode::Sl,
        RecMode::Shortest => Mode::Shortest,
        RecMode::Genside => Mode::Genside,
    };
    let report = testkit::verify_roundtrip(&net, mode);
    if report.pass {
        if report.expected_ambiguous {
            println!("pass (ambiguous, {} candidates, input among them)", report.survivors);
        } else {
            println!("pass");
        }
        Ok(EXIT_OK)
    } else {
        println!("fail: {}", report.detail);
        Ok(EXIT_ABSENT)
    }
}

fn cmd_iso(a: &Path, b: &Path) -> CmdResult {
    let na = load_network(a)?;
    let nb = load_network(b)?;
    match iso::is_isomorphic(&na, &nb) {
        Ok(true) => {
            println!("isomorphic");
            Ok(EXIT_OK)
        }
        Ok(false) => {
            println!("not isomorphic");
            Ok(EXIT_ABSENT)
        }
        Err(iso::IsoError::TaxaMismatch) => {
            println!("not isomorphic: different taxon sets");
            Ok(EXIT_ABSENT)
        }
    }
}
