use std::fs;
use std::path::Path;
use std::process::Command;

use phynet_cli::formats;
use phynet_core::fixtures;
use phynet_core::iso::is_isomorphic;
use phynet_core::metrics::{shortest_matrix, sl_matrix};
use phynet_core::Network;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_phynet")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().expect("spawn phynet");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn write_network(path: &Path, net: &Network) {
    fs::write(path, formats::serialize_network(net)).unwrap();
}

#[test]
fn distances_match_library_output() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("golden.net");
    let out_path = dir.path().join("golden.slm");
    let net = fixtures::golden_network();
    write_network(&net_path, &net);

    let (code, _, _) = run(&[
        "distances",
        "--in",
        net_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let expected = formats::serialize_sl_matrix(&sl_matrix(&net).unwrap());
    assert_eq!(fs::read_to_string(&out_path).unwrap(), expected);

    let (code, stdout, _) = run(&["distances", "--mode", "shortest", "--in", net_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(stdout, formats::serialize_shortest_matrix(&shortest_matrix(&net)));
}

#[test]
fn reconstruct_sl_recovers_the_network() {
    let dir = tempfile::tempdir().unwrap();
    let m_path = dir.path().join("golden.slm");
    let rec_path = dir.path().join("rec.net");
    let net = fixtures::golden_network();
    fs::write(&m_path, formats::serialize_sl_matrix(&sl_matrix(&net).unwrap())).unwrap();

    let (code, _, _) = run(&[
        "reconstruct",
        "--mode",
        "sl",
        "--in",
        m_path.to_str().unwrap(),
        "--out",
        rec_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let rec = formats::parse_network(&fs::read_to_string(&rec_path).unwrap()).unwrap();
    assert!(is_isomorphic(&rec, &net).unwrap());
}

#[test]
fn reconstruct_genside_recovers_the_network() {
    let dir = tempfile::tempdir().unwrap();
    let m_path = dir.path().join("demo.dm");
    let net = fixtures::genside_demo();
    fs::write(&m_path, formats::serialize_shortest_matrix(&shortest_matrix(&net))).unwrap();

    let (code, stdout, _) = run(&["reconstruct", "--mode", "genside", "--in", m_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let rec = formats::parse_network(&stdout).unwrap();
    assert!(is_isomorphic(&rec, &net).unwrap());
}

#[test]
fn reconstruct_shortest_reports_the_ambiguous_pair() {
    let dir = tempfile::tempdir().unwrap();
    let m_path = dir.path().join("pair.dm");
    let (n1, n2) = fixtures::ambiguous_pair();
    fs::write(&m_path, formats::serialize_shortest_matrix(&shortest_matrix(&n1))).unwrap();

    let (code, stdout, stderr) = run(&[
        "reconstruct",
        "--mode",
        "shortest",
        "--in",
        m_path.to_str().unwrap(),
        "--all",
    ]);
    assert_eq!(code, 10);
    assert!(stderr.contains("ambiguous: 2 candidate networks"), "stderr: {stderr}");

    let mut blocks: Vec<String> = Vec::new();
    for line in stdout.lines() {
        if line.starts_with("# network ") {
            blocks.push(String::new());
        } else {
            let block = blocks.last_mut().expect("network header before records");
            block.push_str(line);
            block.push('\n');
        }
    }
    assert_eq!(blocks.len(), 2);
    let nets: Vec<Network> = blocks.iter().map(|b| formats::parse_network(b).unwrap()).collect();
    assert!(!is_isomorphic(&nets[0], &nets[1]).unwrap());
    for rec in &nets {
        assert_eq!(shortest_matrix(rec), shortest_matrix(&n1));
    }
    let hits = nets
        .iter()
        .filter(|rec| is_isomorphic(rec, &n1).unwrap() || is_isomorphic(rec, &n2).unwrap())
        .count();
    assert_eq!(hits, 2);
}

#[test]
fn reconstruct_rejects_the_wrong_matrix_flavor() {
    let dir = tempfile::tempdir().unwrap();
    let net = fixtures::golden_network();
    let sl_path = dir.path().join("golden.slm");
    let dm_path = dir.path().join("golden.dm");
    fs::write(&sl_path, formats::serialize_sl_matrix(&sl_matrix(&net).unwrap())).unwrap();
    fs::write(&dm_path, formats::serialize_shortest_matrix(&shortest_matrix(&net))).unwrap();

    let (code, _, _) = run(&["reconstruct", "--mode", "shortest", "--in", sl_path.to_str().unwrap()]);
    assert_eq!(code, 65);
    let (code, _, _) = run(&["reconstruct", "--mode", "sl", "--in", dm_path.to_str().unwrap()]);
    assert_eq!(code, 65);
}

#[test]
fn iso_distinguishes_networks() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.net");
    let b = dir.path().join("b.net");
    write_network(&a, &fixtures::golden_network());
    write_network(&b, &fixtures::ambiguous_pair().0);

    let (code, stdout, _) = run(&["iso", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("isomorphic"));

    let (code, stdout, _) = run(&["iso", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("not isomorphic"));
}

#[test]
fn altpath_pair_and_detection() {
    let dir = tempfile::tempdir().unwrap();
    let tree_path = dir.path().join("pair.tree");
    let out1 = dir.path().join("p1.net");
    let out2 = dir.path().join("p2.net");
    fs::write(&tree_path, "leaf x black 2\nleaf y red 3\nedge x y\n").unwrap();

    let (code, _, _) = run(&[
        "altpath",
        "make-pair",
        "--tree",
        tree_path.to_str().unwrap(),
        "--out1",
        out1.to_str().unwrap(),
        "--out2",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let n1 = formats::parse_network(&fs::read_to_string(&out1).unwrap()).unwrap();
    let n2 = formats::parse_network(&fs::read_to_string(&out2).unwrap()).unwrap();
    assert_eq!(shortest_matrix(&n1), shortest_matrix(&n2));
    assert_ne!(sl_matrix(&n1).unwrap(), sl_matrix(&n2).unwrap());
    assert!(!is_isomorphic(&n1, &n2).unwrap());

    let (code, stdout, _) = run(&["altpath", "detect", "--in", out1.to_str().unwrap()]);
    assert_eq!(code, 0);
    let tree = formats::parse_colored_tree(&stdout).unwrap();
    tree.check().unwrap();

    let plain = dir.path().join("plain.net");
    let mut bare = Network::new();
    bare.add_vertex(0);
    bare.add_vertex(1);
    bare.add_edge(0, 1);
    bare.set_taxon("t1", 0);
    bare.set_taxon("t2", 1);
    write_network(&plain, &bare);
    let (code, _, stderr) = run(&["altpath", "detect", "--in", plain.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("no alternating-path structure"));
}

#[test]
fn random_is_deterministic_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.net");
    let b = dir.path().join("b.net");
    for path in [&a, &b] {
        let (code, _, _) = run(&[
            "random",
            "--seed",
            "7",
            "--leaves",
            "8..12",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let (code, stdout, _) = run(&["verify", "--in", a.to_str().unwrap(), "--mode", "sl"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("pass"), "stdout: {stdout}");
}

#[test]
fn check_splits_passes_on_a_generated_network() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("golden.net");
    write_network(&net_path, &fixtures::golden_network());
    let (code, stdout, _) = run(&["check-splits", "--in", net_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("match: "), "stdout: {stdout}");
}

#[test]
fn classify_pendant_names_the_shape() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("golden.net");
    let net = fixtures::golden_network();
    write_network(&net_path, &net);

    let parts = phynet_core::testkit::pendant_blob_parts(&net);
    assert!(!parts.is_empty());
    for part in &parts {
        let arg = part.iter().cloned().collect::<Vec<_>>().join(",");
        let (code, stdout, _) = run(&["classify-pendant", "--in", net_path.to_str().unwrap(), "--part", &arg]);
        assert_eq!(code, 0);
        let expected = phynet_core::pendant::classify_pendant(&net, part).unwrap();
        let tag = match expected {
            phynet_core::pendant::PendantForm::Level1 { .. } => "level1",
            phynet_core::pendant::PendantForm::A000 { .. } => "a000",
            phynet_core::pendant::PendantForm::AB00 { .. } => "ab00",
            phynet_core::pendant::PendantForm::A0C0 { .. } => "a0c0",
            phynet_core::pendant::PendantForm::ABC0 { .. } => "abc0",
            phynet_core::pendant::PendantForm::A0CD { .. } => "a0cd",
            phynet_core::pendant::PendantForm::ABCD { .. } => "abcd",
        };
        assert!(stdout.starts_with(tag), "part {arg}: {stdout}");
    }

    let (code, _, _) = run(&["classify-pendant", "--in", net_path.to_str().unwrap(), "--part", ""]);
    assert_eq!(code, 64);
}

#[test]
fn dot_export_marks_leaves() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("golden.net");
    let net = fixtures::golden_network();
    write_network(&net_path, &net);
    let (code, stdout, _) = run(&["dot", "--in", net_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("graph "));
    assert!(stdout.contains("shape=box"));
    for (t, _) in net.taxa() {
        assert!(stdout.contains(&format!("label=\"{t}\"")));
    }
}

#[test]
fn usage_and_input_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 64);
    let (code, _, _) = run(&["distances"]);
    assert_eq!(code, 64);
    let (code, _, _) = run(&["random", "--seed", "1", "--leaves", "oops"]);
    assert_eq!(code, 64);
    let (code, _, _) = run(&["random", "--seed", "1", "--leaves", "9..3"]);
    assert_eq!(code, 64);

    let bad = dir.path().join("bad.net");
    fs::write(&bad, "leaf a 0\nedge 0 zero\n").unwrap();
    let (code, _, _) = run(&["distances", "--in", bad.to_str().unwrap()]);
    assert_eq!(code, 65);
    let missing = dir.path().join("missing.net");
    let (code, _, _) = run(&["distances", "--in", missing.to_str().unwrap()]);
    assert_eq!(code, 65);

    let (code, _, _) = run(&["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn run_works_in_process() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("golden.net");
    write_network(&net_path, &fixtures::golden_network());
    let path = net_path.to_str().unwrap();
    assert_eq!(phynet_cli::run(["phynet", "iso", path, path]), 0);
    assert_eq!(phynet_cli::run(["phynet", "verify", "--in", path, "--mode", "sl"]), 0);
}
