//! End-to-end checks of the command-line surface: exit codes, record shape,
//! artifact bundles, and record determinism.

use clap::Parser;
use mdkit::cli::{dispatch, Cli};
use mdkit::io;
use serde_json::Value;
use std::path::Path;
use std::process::Command;

fn run_args(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["mdkit"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).expect("argv parses");
    dispatch(&cli.command)
}

fn write_p5(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("p5.graph");
    let g = mdkit::gen::path_graph(5);
    std::fs::write(&path, io::write_graph(&g)).unwrap();
    path
}

#[test]
fn md_solves_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write_p5(dir.path());
    let (exit, record) = run_args(&["md", "--graph", p5.to_str().unwrap()]);
    assert_eq!(exit, 0);
    assert_eq!(record["outcome"]["status"], "exact");
    assert_eq!(record["outcome"]["value"], 1);
    assert_eq!(record["command"], "md");
    assert!(record["inputs"][p5.to_str().unwrap()].is_string());
}

#[test]
fn md_with_bound_reports_exceeds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.graph");
    std::fs::write(&path, io::write_graph(&mdkit::gen::complete_graph(4))).unwrap();
    let (exit, record) = run_args(&["md", "--graph", path.to_str().unwrap(), "--k", "2"]);
    assert_eq!(exit, 0);
    assert_eq!(record["outcome"]["status"], "exceeds_bound");
    assert_eq!(record["outcome"]["value"], Value::Null);
}

#[test]
fn md_node_cap_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c6.graph");
    std::fs::write(&path, io::write_graph(&mdkit::gen::cycle_graph(6))).unwrap();
    let (exit, record) = run_args(&["md", "--graph", path.to_str().unwrap(), "--node-cap", "1"]);
    assert_eq!(exit, 3);
    assert_eq!(record["outcome"]["status"], "indeterminate");
}

#[test]
fn md_flags_degenerate_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("iso.graph");
    std::fs::write(&path, "p graph 2 0\n").unwrap();
    let (exit, record) = run_args(&["md", "--graph", path.to_str().unwrap()]);
    assert_eq!(exit, 0);
    assert_eq!(
        record["outcome"]["flags"],
        serde_json::json!(["disconnected"])
    );
}

#[test]
fn verify_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write_p5(dir.path());
    let (exit, record) = run_args(&["verify", "--graph", p5.to_str().unwrap(), "--set", "1"]);
    assert_eq!(exit, 0);
    assert_eq!(record["outcome"]["verified"], true);

    let (exit, record) = run_args(&["verify", "--graph", p5.to_str().unwrap(), "--set", "3"]);
    assert_eq!(exit, 1);
    assert_eq!(record["outcome"]["verified"], false);
    assert!(record["outcome"]["witness_pair"].is_array());

    let (exit, _) = run_args(&["verify", "--graph", p5.to_str().unwrap(), "--set", "9"]);
    assert_eq!(exit, 2);
}

#[test]
fn kernelize_trivial_no_is_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k3.graph");
    std::fs::write(&path, io::write_graph(&mdkit::gen::complete_graph(3))).unwrap();
    let out = dir.path().join("out");
    let (exit, record) = run_args(&[
        "kernelize",
        "--graph",
        path.to_str().unwrap(),
        "--k",
        "0",
        "--mode",
        "cluster",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit, 0);
    assert_eq!(record["outcome"]["outcome"], "trivial_no");
    let trace = std::fs::read_to_string(out.join("trace.json")).unwrap();
    assert!(io::read_trace(&trace).is_ok());
}

#[test]
fn kernelize_writes_a_replayable_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let planted =
        mdkit::gen::planted_cluster_instance(mdkit::gen::PlantedKind::NoModulatorPairs, 8);
    let path = dir.path().join("planted.graph");
    std::fs::write(&path, io::write_graph(&planted.graph)).unwrap();
    let out = dir.path().join("out");
    let (exit, record) = run_args(&[
        "kernelize",
        "--graph",
        path.to_str().unwrap(),
        "--k",
        "12",
        "--modulator",
        "",
        "--mode",
        "cluster",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit, 0, "record: {record}");
    assert_eq!(record["outcome"]["outcome"], "kernelized");
    let kernel_text = std::fs::read_to_string(out.join("kernel.graph")).unwrap();
    let trace = io::read_trace(&std::fs::read_to_string(out.join("trace.json")).unwrap()).unwrap();
    let replayed = mdkit::kernel::replay_trace(&planted.graph, &trace).unwrap();
    assert_eq!(io::write_graph(&replayed), kernel_text);
}

#[test]
fn kernelize_co_cluster_with_searched_modulator() {
    let dir = tempfile::tempdir().unwrap();
    let planted =
        mdkit::gen::planted_cluster_instance(mdkit::gen::PlantedKind::NoModulatorPairs, 7);
    let co = planted.graph.complement();
    let path = dir.path().join("co.graph");
    std::fs::write(&path, io::write_graph(&co)).unwrap();
    let out = dir.path().join("out");
    let (exit, record) = run_args(&[
        "kernelize",
        "--graph",
        path.to_str().unwrap(),
        "--k",
        "10",
        "--modulator-budget",
        "2",
        "--mode",
        "co-cluster",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit, 0, "record: {record}");
    assert_eq!(record["outcome"]["outcome"], "kernelized");
    // Two independent sets leave (7 -> 6 -> 5 pairs, threshold 6).
    assert_eq!(record["outcome"]["vertices"], 10);
    assert_eq!(record["outcome"]["final_k"], 8);
    let trace = io::read_trace(&std::fs::read_to_string(out.join("trace.json")).unwrap()).unwrap();
    assert!(trace
        .steps
        .iter()
        .any(|s| s.rule == mdkit::kernel::RuleId::Rr4));
}

#[test]
fn modulator_search_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.graph");
    std::fs::write(&path, io::write_graph(&mdkit::gen::cycle_graph(5))).unwrap();
    let (exit, record) = run_args(&[
        "modulator",
        "--graph",
        path.to_str().unwrap(),
        "--budget",
        "1",
        "--mode",
        "cluster",
    ]);
    assert_eq!(exit, 0);
    assert_eq!(record["outcome"]["found"], false);
    let (_, record) = run_args(&[
        "modulator",
        "--graph",
        path.to_str().unwrap(),
        "--budget",
        "2",
        "--mode",
        "cluster",
    ]);
    assert_eq!(record["outcome"]["found"], true);
    assert_eq!(record["outcome"]["modulator"].as_array().unwrap().len(), 2);
}

#[test]
fn gen_nae_bundle_is_complete_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let inst = mdkit::reduce_nae::NaeInstance::new(2, 3, vec![[(0, 1), (1, 2), (2, 1)]]).unwrap();
    let inst_path = dir.path().join("inst.json");
    std::fs::write(&inst_path, io::write_nae(&inst)).unwrap();
    let out = dir.path().join("a");
    let (exit, record) = run_args(&[
        "gen",
        "nae",
        "--in",
        inst_path.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit, 0);
    assert_eq!(record["outcome"]["k"], 14);
    let graph_a = std::fs::read_to_string(out.join("gadget.graph")).unwrap();
    let labels_a = std::fs::read_to_string(out.join("gadget.labels.json")).unwrap();
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("gadget.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["k"], 14);
    assert_eq!(meta["fvs_witness"].as_array().unwrap().len(), 7);
    assert!(meta["input_sha256"].is_string());

    // Second run produces byte-identical artifacts.
    let out_b = dir.path().join("b");
    run_args(&[
        "gen",
        "nae",
        "--in",
        inst_path.to_str().unwrap(),
        "--out-dir",
        out_b.to_str().unwrap(),
    ]);
    assert_eq!(
        graph_a,
        std::fs::read_to_string(out_b.join("gadget.graph")).unwrap()
    );
    assert_eq!(
        labels_a,
        std::fs::read_to_string(out_b.join("gadget.labels.json")).unwrap()
    );

    // The emitted labels parse and re-attach to the parsed graph.
    let parsed = io::read_graph(&graph_a).unwrap();
    let mut graph = parsed.graph;
    io::apply_labels(&mut graph, &io::read_labels(&labels_a).unwrap()).unwrap();
    assert_eq!(graph.labels().len(), graph.n());
}

#[test]
fn gen_sat_bundles_cover_both_variants() {
    let dir = tempfile::tempdir().unwrap();
    let cnf_path = dir.path().join("f.cnf");
    std::fs::write(&cnf_path, "p cnf 2 2\n1 2 0\n-1 2 0\n").unwrap();
    for (sub, witness_key) in [("sat-vc", "vc_witness"), ("sat-clique", "clique_modulator")] {
        let out = dir.path().join(sub);
        let (exit, record) = run_args(&[
            "gen",
            sub,
            "--cnf",
            cnf_path.to_str().unwrap(),
            "--out-dir",
            out.to_str().unwrap(),
        ]);
        assert_eq!(exit, 0, "record: {record}");
        assert_eq!(record["outcome"]["k"], 7); // n=2, alpha=4
        let meta: Value =
            serde_json::from_str(&std::fs::read_to_string(out.join("gadget.meta.json")).unwrap())
                .unwrap();
        assert!(meta[witness_key].is_array(), "missing {witness_key}");
    }
}

#[test]
fn check_subcommands_pass_on_generated_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let inst = mdkit::reduce_nae::NaeInstance::new(3, 3, vec![[(0, 2), (1, 1), (2, 3)]]).unwrap();
    let inst_path = dir.path().join("inst.json");
    std::fs::write(&inst_path, io::write_nae(&inst)).unwrap();
    let (exit, record) = run_args(&["check", "claims-nae", "--in", inst_path.to_str().unwrap()]);
    assert_eq!(exit, 0, "record: {record}");
    assert_eq!(record["outcome"]["mismatches"], 0);

    let cnf_path = dir.path().join("f.cnf");
    std::fs::write(&cnf_path, "p cnf 3 2\n1 -2 3 0\n-1 2 0\n").unwrap();
    let (exit, record) = run_args(&["check", "table1", "--cnf", cnf_path.to_str().unwrap()]);
    assert_eq!(exit, 0);
    assert_eq!(record["outcome"]["vc"]["mismatches"], 0);
    assert_eq!(record["outcome"]["clique"]["mismatches"], 0);

    let (exit, record) = run_args(&[
        "check",
        "table1",
        "--cnf",
        cnf_path.to_str().unwrap(),
        "--variant",
        "vc",
    ]);
    assert_eq!(exit, 0);
    assert!(record["outcome"]["clique"].is_null());
}

#[test]
fn xval_sat_spec_example_is_all_equivalent() {
    let (exit, record) = run_args(&[
        "xval",
        "sat",
        "--n",
        "1",
        "--m-max",
        "2",
        "--samples",
        "20",
        "--seed",
        "7",
    ]);
    assert_eq!(exit, 0);
    assert_eq!(record["outcome"]["disagreements"], 0);
    assert_eq!(record["outcome"]["indeterminate"], 0);
    assert_eq!(record["outcome"]["samples"], 20);
}

#[test]
fn xval_records_are_deterministic_for_a_seed() {
    let args = [
        "xval",
        "nae",
        "--d",
        "2",
        "--vars",
        "3",
        "--clauses",
        "1",
        "--samples",
        "4",
        "--seed",
        "9",
    ];
    let (exit_a, rec_a) = run_args(&args);
    let (exit_b, rec_b) = run_args(&args);
    assert_eq!(exit_a, 0);
    assert_eq!(exit_b, 0);
    // dispatch output carries no wall-time field; byte equality is exact.
    assert_eq!(io::canonical_json(&rec_a), io::canonical_json(&rec_b));
    assert_eq!(rec_a["seed"], 9);
}

#[test]
fn binary_emits_one_json_line_and_honors_env_cap() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write_p5(dir.path());
    let exe = env!("CARGO_BIN_EXE_mdkit");

    let output = Command::new(exe)
        .args(["md", "--graph", p5.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 1, "stdout must carry exactly one record");
    let record: Value = serde_json::from_str(lines[0]).unwrap();
    assert!(record["wall_ms"].is_u64());
    assert_eq!(record["outcome"]["value"], 1);

    // MDKIT_NODE_CAP overrides the default budget.
    let output = Command::new(exe)
        .args(["md", "--graph", p5.to_str().unwrap()])
        .env("MDKIT_NODE_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));

    // Usage errors exit 2 and keep stdout clean.
    let output = Command::new(exe).args(["md"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(output.stdout.is_empty());

    // Missing file is an input error with a record.
    let output = Command::new(exe)
        .args(["md", "--graph", "/nonexistent.graph"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
