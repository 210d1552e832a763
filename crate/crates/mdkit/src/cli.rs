//! Batch command-line surface: generation, solving, kernelization, claim
//! checking, and the seeded cross-validation harnesses.
//!
//! Every invocation writes exactly one JSON run record to stdout; progress
//! and diagnostics go to stderr. Exit codes: 0 all checks passed or answer
//! produced, 1 a check failed, 2 usage or input error, 3 resource cap hit.
//! Vertex ids in records, flags, and files are 1-based; the RNG behind every
//! `xval` corpus is ChaCha8 seeded from `--seed`.

use crate::gen;
use crate::graph::Graph;
use crate::io;
use crate::kernel::{self, KernelOutcome, Modulator, ModulatorMode};
use crate::reduce_nae;
use crate::reduce_sat::{self, GadgetVariant};
use crate::resolve::{self, MdStatus, SolveError, SolveOptions};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

/// Default search-node budget; `MDKIT_NODE_CAP` overrides it, an explicit
/// `--node-cap` wins over both.
pub const DEFAULT_NODE_CAP: u64 = 100_000_000;

const FAILURE_DIR: &str = "mdkit-xval-failures";

#[derive(Parser, Debug)]
#[command(name = "mdkit", version, about = "metric dimension toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a gadget bundle (graph, labels, metadata).
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Exact metric dimension of a graph file.
    Md {
        #[arg(long)]
        graph: PathBuf,
        /// Decision bound: report whether MD <= k.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        node_cap: Option<u64>,
    },
    /// Verify a candidate resolving set.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated 1-based vertex ids, e.g. "1,5,9".
        #[arg(long)]
        set: String,
    },
    /// Apply the reduction rules and write the kernel plus its trace.
    Kernelize {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: i64,
        /// Comma-separated 1-based modulator ids (may be empty).
        #[arg(long, conflicts_with = "modulator_budget")]
        modulator: Option<String>,
        #[arg(long)]
        modulator_budget: Option<usize>,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Search for a modulator within a budget.
    Modulator {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        budget: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
    /// Machine-check distance properties of generated gadgets.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Seeded cross-validation harnesses.
    Xval {
        #[command(subcommand)]
        what: XvalCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// NAE instance file to gadget bundle.
    Nae {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// DIMACS CNF to the vertex-cover-flavored gadget.
    SatVc {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// DIMACS CNF to the clique-flavored gadget.
    SatClique {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Distance-claim suite of the NAE gadget.
    ClaimsNae {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Distance-table rows of the SAT gadget.
    Table1 {
        #[arg(long)]
        cnf: PathBuf,
        /// Check only one variant; default checks both.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
}

#[derive(Subcommand, Debug)]
pub enum XvalCommand {
    /// Formula satisfiability vs. solver decision at k = n + alpha + 1.
    Sat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Constructive and reverse-sweep checks on random NAE instances.
    Nae {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Safeness of the reduction rules against the exact solver.
    Kernel {
        #[arg(long)]
        planted_x: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Cluster,
    CoCluster,
}

impl From<ModeArg> for ModulatorMode {
    fn from(m: ModeArg) -> ModulatorMode {
        match m {
            ModeArg::Cluster => ModulatorMode::Cluster,
            ModeArg::CoCluster => ModulatorMode::CoCluster,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariantArg {
    Vc,
    Clique,
}

/// Parses and dispatches; prints the run record and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = std::time::Instant::now();
    let (exit, mut record) = dispatch(&cli.command);
    record["wall_ms"] = json!(start.elapsed().as_millis() as u64);
    println!("{}", io::canonical_json(&record));
    exit
}

/// Runs one subcommand and returns `(exit code, run record)`; the record
/// lacks only the wall-time field, which `run` stamps at the end.
pub fn dispatch(command: &Command) -> (i32, Value) {
    match command {
        Command::Gen { what } => match what {
            GenCommand::Nae { input, out_dir } => gen_nae(input, out_dir),
            GenCommand::SatVc { cnf, out_dir } => gen_sat(cnf, out_dir, GadgetVariant::Vc),
            GenCommand::SatClique { cnf, out_dir } => gen_sat(cnf, out_dir, GadgetVariant::Clique),
        },
        Command::Md { graph, k, node_cap } => cmd_md(graph, *k, *node_cap),
        Command::Verify { graph, set } => cmd_verify(graph, set),
        Command::Kernelize {
            graph,
            k,
            modulator,
            modulator_budget,
            mode,
            out_dir,
        } => cmd_kernelize(
            graph,
            *k,
            modulator.as_deref(),
            *modulator_budget,
            *mode,
            out_dir,
        ),
        Command::Modulator {
            graph,
            budget,
            mode,
        } => cmd_modulator(graph, *budget, *mode),
        Command::Check { what } => match what {
            CheckCommand::ClaimsNae { input } => cmd_check_claims(input),
            CheckCommand::Table1 { cnf, variant } => cmd_check_table1(cnf, *variant),
        },
        Command::Xval { what } => match what {
            XvalCommand::Sat {
                n,
                m_max,
                samples,
                seed,
                variant,
            } => xval_sat(*n, *m_max, *samples, *seed, *variant),
            XvalCommand::Nae {
                d,
                vars,
                clauses,
                samples,
                seed,
            } => xval_nae(*d, *vars, *clauses, *samples, *seed),
            XvalCommand::Kernel {
                planted_x,
                samples,
                seed,
                mode,
            } => xval_kernel(*planted_x, *samples, *seed, *mode),
        },
    }
}

struct Record {
    command: String,
    inputs: BTreeMap<String, String>,
    seed: Option<u64>,
}

impl Record {
    fn new(command: &str) -> Record {
        Record {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            seed: None,
        }
    }

    fn with_seed(command: &str, seed: u64) -> Record {
        let mut r = Record::new(command);
        r.seed = Some(seed);
        r
    }

    fn read_file(&mut self, path: &Path) -> Result<String, (i32, Value)> {
        match std::fs::read_to_string(path) {
            Ok(text) => {
                self.inputs
                    .insert(path.display().to_string(), io::sha256_hex(text.as_bytes()));
                Ok(text)
            }
            Err(e) => {
                eprintln!("mdkit: cannot read {}: {e}", path.display());
                Err(self.finish(
                    2,
                    json!({ "error": format!("cannot read {}: {e}", path.display()) }),
                ))
            }
        }
    }

    fn input_error(&self, message: String) -> (i32, Value) {
        eprintln!("mdkit: {message}");
        self.finish(2, json!({ "error": message }))
    }

    fn finish(&self, exit: i32, outcome: Value) -> (i32, Value) {
        (
            exit,
            json!({
                "command": self.command,
                "inputs": self.inputs,
                "seed": self.seed,
                "outcome": outcome,
            }),
        )
    }
}

fn node_cap_from(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("MDKIT_NODE_CAP")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_NODE_CAP)
}

fn read_graph_file(record: &mut Record, path: &Path) -> Result<Graph, (i32, Value)> {
    let text = record.read_file(path)?;
    match io::read_graph(&text) {
        Ok(read) => {
            for w in &read.warnings {
                eprintln!("mdkit: {}: {w}", path.display());
            }
            Ok(read.graph)
        }
        Err(e) => Err(record.input_error(format!("{}: {e}", path.display()))),
    }
}

fn parse_id_list(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let id: usize = part
            .parse()
            .map_err(|_| format!("bad vertex id {part:?} in list"))?;
        if id < 1 {
            return Err("vertex ids are 1-based".into());
        }
        out.push(id - 1);
    }
    Ok(out)
}

fn to_one_based(ids: &[usize]) -> Vec<usize> {
    ids.iter().map(|&v| v + 1).collect()
}

fn write_out(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn cmd_md(graph_path: &Path, k: Option<usize>, node_cap: Option<u64>) -> (i32, Value) {
    let mut record = Record::new("md");
    let graph = match read_graph_file(&mut record, graph_path) {
        Ok(g) => g,
        Err(r) => return r,
    };
    let opts = SolveOptions {
        bound: k,
        node_cap: Some(node_cap_from(node_cap)),
    };
    let mut flags: Vec<&str> = Vec::new();
    if graph.n() <= 1 {
        flags.push("single_vertex");
    }
    if !graph.is_connected() {
        flags.push("disconnected");
    }
    match resolve::metric_dimension_exact(&graph, &opts) {
        Ok(result) => {
            let exit = 0;
            record.finish(exit, io::md_result_to_json(&result, &flags))
        }
        Err(SolveError::NodeCapExceeded { explored }) => record.finish(
            3,
            json!({
                "status": "indeterminate",
                "value": null,
                "certificate": [],
                "explored_nodes": explored,
                "bound": k,
                "flags": flags,
            }),
        ),
    }
}

fn cmd_verify(graph_path: &Path, set: &str) -> (i32, Value) {
    let mut record = Record::new("verify");
    let graph = match read_graph_file(&mut record, graph_path) {
        Ok(g) => g,
        Err(r) => return r,
    };
    let ids = match parse_id_list(set) {
        Ok(ids) => ids,
        Err(e) => return record.input_error(e),
    };
    if let Some(&v) = ids.iter().find(|&&v| v >= graph.n()) {
        return record.input_error(format!("vertex id {} out of range", v + 1));
    }
    let cert = resolve::is_resolving_set(&graph, &ids);
    let exit = if cert.verified { 0 } else { 1 };
    record.finish(exit, io::certificate_to_json(&cert))
}

fn cmd_modulator(graph_path: &Path, budget: usize, mode: ModeArg) -> (i32, Value) {
    let mut record = Record::new("modulator");
    let graph = match read_graph_file(&mut record, graph_path) {
        Ok(g) => g,
        Err(r) => return r,
    };
    match kernel::find_modulator(&graph, budget, mode.into()) {
        Some(m) => record.finish(
            0,
            json!({
                "found": true,
                "mode": m.mode().as_str(),
                "modulator": to_one_based(m.vertices()),
            }),
        ),
        None => record.finish(
            0,
            json!({ "found": false, "mode": ModulatorMode::from(mode).as_str(), "modulator": null }),
        ),
    }
}

fn cmd_kernelize(
    graph_path: &Path,
    k: i64,
    modulator: Option<&str>,
    modulator_budget: Option<usize>,
    mode: ModeArg,
    out_dir: &Path,
) -> (i32, Value) {
    let mut record = Record::new("kernelize");
    let graph = match read_graph_file(&mut record, graph_path) {
        Ok(g) => g,
        Err(r) => return r,
    };
    let mode: ModulatorMode = mode.into();
    let x = match modulator {
        Some(text) => match parse_id_list(text) {
            Ok(ids) => match Modulator::new(ids, mode, &graph) {
                Ok(m) => Some(m),
                Err(e) => return record.input_error(e.to_string()),
            },
            Err(e) => return record.input_error(e),
        },
        None => None,
    };
    let budget = modulator_budget.unwrap_or(kernel::DEFAULT_MODULATOR_BUDGET);
    let outcome = match kernel::kernelize(&graph, k, x, mode, budget) {
        Ok(o) => o,
        Err(e) => return record.input_error(e.to_string()),
    };
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        return record.input_error(format!("cannot create {}: {e}", out_dir.display()));
    }
    match outcome {
        KernelOutcome::TrivialNo { trace } => {
            let trace_path = out_dir.join("trace.json");
            if let Err(e) = write_out(&trace_path, &io::write_trace(&trace)) {
                return record.input_error(e);
            }
            record.finish(
                0,
                json!({
                    "outcome": "trivial_no",
                    "final_k": trace.final_k,
                    "steps": trace.steps.len(),
                    "files": { "trace": trace_path.display().to_string() },
                }),
            )
        }
        KernelOutcome::Reduced {
            graph: kernel_graph,
            k: final_k,
            trace,
        } => {
            let graph_path = out_dir.join("kernel.graph");
            let labels_path = out_dir.join("kernel.labels.json");
            let trace_path = out_dir.join("trace.json");
            let steps = trace.steps.len();
            if let Err(e) = write_out(&graph_path, &io::write_graph(&kernel_graph))
                .and_then(|()| write_out(&labels_path, &io::write_labels(&kernel_graph)))
                .and_then(|()| write_out(&trace_path, &io::write_trace(&trace)))
            {
                return record.input_error(e);
            }
            record.finish(
                0,
                json!({
                    "outcome": "kernelized",
                    "final_k": final_k,
                    "vertices": kernel_graph.n(),
                    "steps": steps,
                    "files": {
                        "graph": graph_path.display().to_string(),
                        "labels": labels_path.display().to_string(),
                        "trace": trace_path.display().to_string(),
                    },
                }),
            )
        }
    }
}

fn gen_nae(input: &Path, out_dir: &Path) -> (i32, Value) {
    let mut record = Record::new("gen nae");
    let text = match record.read_file(input) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let inst = match io::read_nae(&text) {
        Ok(i) => i,
        Err(e) => return record.input_error(format!("{}: {e}", input.display())),
    };
    let gadget = reduce_nae::build_nae_gadget(&inst);
    let witness = reduce_nae::fvs_witness(&gadget);
    let (rest, _) = gadget
        .graph
        .remove_vertices(&witness.iter().copied().collect())
        .expect("witness ids are valid");
    assert!(rest.is_acyclic(), "feedback witness must leave a forest");
    let meta = json!({
        "k": gadget.k,
        "fvs_witness": to_one_based(&witness),
        "input_sha256": io::sha256_hex(text.as_bytes()),
        "generator": format!("mdkit/{}", env!("CARGO_PKG_VERSION")),
    });
    write_bundle(
        &mut record,
        out_dir,
        &gadget.graph,
        &meta,
        json!({
            "k": gadget.k,
            "vertices": gadget.graph.n(),
            "fvs_witness_size": witness.len(),
        }),
    )
}

fn gen_sat(cnf_path: &Path, out_dir: &Path, variant: GadgetVariant) -> (i32, Value) {
    let mut record = Record::new(match variant {
        GadgetVariant::Vc => "gen sat-vc",
        GadgetVariant::Clique => "gen sat-clique",
    });
    let text = match record.read_file(cnf_path) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let formula = match reduce_sat::parse_dimacs_cnf(&text) {
        Ok(f) => f,
        Err(e) => return record.input_error(format!("{}: {e}", cnf_path.display())),
    };
    let build = match variant {
        GadgetVariant::Vc => reduce_sat::build_vc_gadget(&formula),
        GadgetVariant::Clique => reduce_sat::build_clique_gadget(&formula),
    };
    let art = match build {
        Ok(a) => a,
        Err(e) => return record.input_error(e.to_string()),
    };
    let (witness_key, witness) = match variant {
        GadgetVariant::Vc => ("vc_witness", reduce_sat::vc_witness(&art)),
        GadgetVariant::Clique => (
            "clique_modulator",
            reduce_sat::clique_modulator_witness(&art),
        ),
    };
    let witness = witness.expect("witness construction is total for built gadgets");
    let meta = json!({
        "k": art.k,
        "alpha": art.alpha,
        "variant": art.variant.as_str(),
        witness_key: to_one_based(&witness),
        "input_sha256": io::sha256_hex(text.as_bytes()),
        "generator": format!("mdkit/{}", env!("CARGO_PKG_VERSION")),
    });
    write_bundle(
        &mut record,
        out_dir,
        &art.graph,
        &meta,
        json!({
            "k": art.k,
            "alpha": art.alpha,
            "variant": art.variant.as_str(),
            "vertices": art.graph.n(),
            "witness_size": witness.len(),
        }),
    )
}

fn write_bundle(
    record: &mut Record,
    out_dir: &Path,
    graph: &Graph,
    meta: &Value,
    mut outcome: Value,
) -> (i32, Value) {
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        return record.input_error(format!("cannot create {}: {e}", out_dir.display()));
    }
    let graph_path = out_dir.join("gadget.graph");
    let labels_path = out_dir.join("gadget.labels.json");
    let meta_path = out_dir.join("gadget.meta.json");
    if let Err(e) = write_out(&graph_path, &io::write_graph(graph))
        .and_then(|()| write_out(&labels_path, &io::write_labels(graph)))
        .and_then(|()| write_out(&meta_path, &io::canonical_json(meta)))
    {
        return record.input_error(e);
    }
    outcome["files"] = json!({
        "graph": graph_path.display().to_string(),
        "labels": labels_path.display().to_string(),
        "meta": meta_path.display().to_string(),
    });
    record.finish(0, outcome)
}

fn cmd_check_claims(input: &Path) -> (i32, Value) {
    let mut record = Record::new("check claims-nae");
    let text = match record.read_file(input) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let inst = match io::read_nae(&text) {
        Ok(i) => i,
        Err(e) => return record.input_error(format!("{}: {e}", input.display())),
    };
    let gadget = reduce_nae::build_nae_gadget(&inst);
    let report = reduce_nae::check_distance_claims(&gadget, &inst);
    let mismatches: Vec<Value> = report
        .mismatches()
        .iter()
        .take(50)
        .map(|c| {
            json!({
                "claim": c.claim,
                "context": c.context,
                "expected": format!("{:?}", c.expected),
                "actual": c.actual.to_string(),
            })
        })
        .collect();
    let exit = if report.all_ok() { 0 } else { 1 };
    record.finish(
        exit,
        json!({
            "checks": report.checks.len(),
            "mismatches": report.checks.len() - report.checks.iter().filter(|c| c.ok).count(),
            "failures": mismatches,
        }),
    )
}

fn cmd_check_table1(cnf_path: &Path, variant: Option<VariantArg>) -> (i32, Value) {
    let mut record = Record::new("check table1");
    let text = match record.read_file(cnf_path) {
        Ok(t) => t,
        Err(r) => return r,
    };
    let formula = match reduce_sat::parse_dimacs_cnf(&text) {
        Ok(f) => f,
        Err(e) => return record.input_error(format!("{}: {e}", cnf_path.display())),
    };
    let variants: Vec<GadgetVariant> = match variant {
        Some(VariantArg::Vc) => vec![GadgetVariant::Vc],
        Some(VariantArg::Clique) => vec![GadgetVariant::Clique],
        None => vec![GadgetVariant::Vc, GadgetVariant::Clique],
    };
    let mut per_variant = serde_json::Map::new();
    let mut total_mismatches = 0usize;
    for v in variants {
        let art = match v {
            GadgetVariant::Vc => reduce_sat::build_vc_gadget(&formula),
            GadgetVariant::Clique => reduce_sat::build_clique_gadget(&formula),
        };
        let art = match art {
            Ok(a) => a,
            Err(e) => return record.input_error(e.to_string()),
        };
        let report = reduce_sat::check_table1(&art);
        let mismatches = report.mismatches();
        total_mismatches += mismatches.len();
        per_variant.insert(
            v.as_str().to_string(),
            json!({
                "rows": report.entries.len(),
                "mismatches": mismatches.len(),
                "failures": mismatches.iter().take(50).map(|e| json!({
                    "row": e.row,
                    "vertex": e.vertex + 1,
                    "expected": e.expected,
                    "actual": e.actual.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                })).collect::<Vec<Value>>(),
            }),
        );
    }
    let exit = if total_mismatches == 0 { 0 } else { 1 };
    record.finish(exit, Value::Object(per_variant))
}

fn failure_dir() -> PathBuf {
    PathBuf::from(FAILURE_DIR)
}

fn dump_failure(stem: &str, files: &[(&str, String)]) -> Vec<String> {
    let dir = failure_dir();
    let mut written = Vec::new();
    if std::fs::create_dir_all(&dir).is_err() {
        return written;
    }
    for (ext, contents) in files {
        let path = dir.join(format!("{stem}.{ext}"));
        if std::fs::write(&path, contents).is_ok() {
            written.push(path.display().to_string());
        }
    }
    written
}

fn xval_sat(
    n: usize,
    m_max: usize,
    samples: usize,
    seed: u64,
    variant: Option<VariantArg>,
) -> (i32, Value) {
    let record = Record::with_seed("xval sat", seed);
    if n == 0 || m_max == 0 || samples == 0 {
        return record.input_error("--n, --m-max, and --samples must be positive".into());
    }
    let node_cap = node_cap_from(None);
    let variants: Vec<GadgetVariant> = match variant {
        Some(VariantArg::Vc) => vec![GadgetVariant::Vc],
        Some(VariantArg::Clique) => vec![GadgetVariant::Clique],
        None => vec![GadgetVariant::Vc, GadgetVariant::Clique],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_sample = Vec::new();
    let mut disagreements = 0usize;
    let mut indeterminate = 0usize;
    for sample in 0..samples {
        let formula = gen::random_cnf(n, m_max, &mut rng);
        let sat = reduce_sat::sat_brute_force(&formula, reduce_sat::DEFAULT_SAT_CAP)
            .expect("cap covers n")
            .is_some();
        for &v in &variants {
            let art = match v {
                GadgetVariant::Vc => reduce_sat::build_vc_gadget(&formula),
                GadgetVariant::Clique => reduce_sat::build_clique_gadget(&formula),
            }
            .expect("valid formula builds");
            let opts = SolveOptions {
                bound: Some(art.k),
                node_cap: Some(node_cap),
            };
            let (verdict, agree) = match resolve::metric_dimension_exact(&art.graph, &opts) {
                Ok(res) => {
                    let md_le_k = res.status == MdStatus::Exact;
                    (json!(md_le_k), md_le_k == sat)
                }
                Err(SolveError::NodeCapExceeded { .. }) => {
                    indeterminate += 1;
                    (json!("indeterminate"), false)
                }
            };
            if !agree {
                disagreements += usize::from(verdict != json!("indeterminate"));
                let stem = format!("sat_seed{seed}_s{sample}_{}", v.as_str());
                let files = dump_failure(
                    &stem,
                    &[
                        ("cnf", formula.to_dimacs()),
                        ("graph", io::write_graph(&art.graph)),
                        ("labels.json", io::write_labels(&art.graph)),
                    ],
                );
                eprintln!("mdkit: xval sat witness written: {files:?}");
                per_sample.push(json!({
                    "sample": sample,
                    "variant": v.as_str(),
                    "formula": formula.to_dimacs(),
                    "sat": sat,
                    "md_le_k": verdict,
                    "agree": false,
                    "witness_files": files,
                }));
            } else {
                per_sample.push(json!({
                    "sample": sample,
                    "variant": v.as_str(),
                    "sat": sat,
                    "md_le_k": verdict,
                    "agree": true,
                }));
            }
        }
        eprintln!("mdkit: xval sat sample {sample} done");
    }
    let exit = if disagreements > 0 {
        1
    } else if indeterminate > 0 {
        3
    } else {
        0
    };
    record.finish(
        exit,
        json!({
            "samples": samples,
            "checked": per_sample.len(),
            "disagreements": disagreements,
            "indeterminate": indeterminate,
            "records": per_sample,
        }),
    )
}

fn xval_nae(d: usize, vars: usize, clauses: usize, samples: usize, seed: u64) -> (i32, Value) {
    let record = Record::with_seed("xval nae", seed);
    if d == 0 || vars < 3 || samples == 0 {
        return record.input_error("need --d >= 1, --vars >= 3, --samples >= 1".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_sample = Vec::new();
    let mut violations = 0usize;
    let sweep_cap: u128 = 10_000;
    for sample in 0..samples {
        let inst = gen::random_nae(d, vars, clauses, &mut rng);
        let gadget = reduce_nae::build_nae_gadget(&inst);
        let claims = reduce_nae::check_distance_claims(&gadget, &inst);
        let sat = reduce_nae::nae_brute_force(&inst, reduce_nae::DEFAULT_NAE_CAP)
            .expect("cap covers the sampled shapes");
        let mut sample_ok = claims.all_ok();
        let mut notes: Vec<String> = Vec::new();
        if !claims.all_ok() {
            notes.push(format!("{} claim mismatches", claims.mismatches().len()));
        }
        let covered = inst.every_variable_occurs();
        let mut constructive = Value::Null;
        if let Some(phi) = &sat {
            if covered {
                let cert = reduce_nae::resolving_set_from_assignment(&gadget, &inst, phi)
                    .expect("brute-force assignment satisfies");
                if !cert.verified {
                    sample_ok = false;
                    notes.push(format!(
                        "constructive set unresolved pair {:?}",
                        cert.witness_pair
                    ));
                }
                constructive = json!(cert.verified);
            } else {
                // A padded instance leaves an isolated variable cycle; the
                // constructed set is only claimed for covered instances.
                constructive = json!("skipped_unused_variable");
            }
        }
        let mut sweep = Value::Null;
        let within_cap = (2 * d as u128).pow(vars as u32) <= sweep_cap;
        if within_cap {
            let report = reduce_nae::reverse_candidate_sweep(&gadget, &inst, sweep_cap)
                .expect("cap checked above");
            let resolving = report.resolving.len();
            match &sat {
                Some(_) => {
                    // A padded instance has no resolving choice at all; the
                    // existence claim only applies to covered instances.
                    if covered && resolving == 0 {
                        sample_ok = false;
                        notes.push("satisfiable but no resolving choice".into());
                    }
                    if let Some(bad) = report.resolving.iter().find(|h| !h.satisfies) {
                        sample_ok = false;
                        notes.push(format!(
                            "resolving choice induces an unsatisfying assignment {:?}",
                            bad.assignment
                        ));
                    }
                }
                None => {
                    if resolving != 0 {
                        sample_ok = false;
                        notes.push(format!("unsatisfiable but {resolving} resolving choices"));
                    }
                }
            }
            sweep = json!({ "choices": report.total_choices as u64, "resolving": resolving });
        }
        if !sample_ok {
            violations += 1;
            let stem = format!("nae_seed{seed}_s{sample}");
            let files = dump_failure(
                &stem,
                &[
                    ("json", io::write_nae(&inst)),
                    ("graph", io::write_graph(&gadget.graph)),
                    ("labels.json", io::write_labels(&gadget.graph)),
                ],
            );
            eprintln!("mdkit: xval nae witness written: {files:?}");
            per_sample.push(json!({
                "sample": sample,
                "instance": io::write_nae(&inst),
                "satisfiable": sat.is_some(),
                "claims_ok": claims.all_ok(),
                "constructive": constructive,
                "sweep": sweep,
                "ok": false,
                "notes": notes,
                "witness_files": files,
            }));
        } else {
            per_sample.push(json!({
                "sample": sample,
                "satisfiable": sat.is_some(),
                "claims_ok": true,
                "constructive": constructive,
                "sweep": sweep,
                "ok": true,
            }));
        }
        eprintln!("mdkit: xval nae sample {sample} done");
    }
    let exit = if violations > 0 { 1 } else { 0 };
    record.finish(
        exit,
        json!({
            "samples": samples,
            "violations": violations,
            "records": per_sample,
        }),
    )
}

fn xval_kernel(planted_x: usize, samples: usize, seed: u64, mode: ModeArg) -> (i32, Value) {
    let record = Record::with_seed("xval kernel", seed);
    if planted_x > 1 {
        return record.input_error(
            "--planted-x must be 0 or 1 (larger instances exceed the exact solver)".into(),
        );
    }
    if samples == 0 {
        return record.input_error("--samples must be positive".into());
    }
    let mode: ModulatorMode = mode.into();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_sample = Vec::new();
    let mut violations = 0usize;
    for sample in 0..samples {
        // Twin-rule safeness on a small random graph with a planted triple.
        let base_n = rand::Rng::gen_range(&mut rng, 3..=12);
        let g = gen::random_graph_with_twin_triple(base_n, &mut rng);
        let md_before = resolve::metric_dimension(&g);
        let (reduced, _, _) = kernel::apply_rr2(&g, 0).expect("planted triple");
        let md_after = resolve::metric_dimension(&reduced);
        let rr2_ok = md_before == md_after + 1;

        // Identical-clique (or independent-set) rule on a planted instance.
        let kind = gen::PlantedKind::for_x_size(planted_x, &mut rng);
        let extra = rand::Rng::gen_range(&mut rng, 0..=1);
        let planted =
            gen::planted_cluster_instance(kind, kernel::rule_threshold(planted_x) + extra);
        let (target, modulator) = match mode {
            ModulatorMode::Cluster => (planted.graph.clone(), planted.modulator.clone()),
            ModulatorMode::CoCluster => {
                let co = planted.graph.complement();
                let m = Modulator::new(planted.modulator.vertices().to_vec(), mode, &co)
                    .expect("complement of a planted instance is co-cluster");
                (co, m)
            }
        };
        let step = match mode {
            ModulatorMode::Cluster => kernel::apply_rr3(&target, 0, &modulator),
            ModulatorMode::CoCluster => kernel::apply_rr4(&target, 0, &modulator),
        }
        .expect("planted modulator is valid")
        .expect("planted class meets the threshold");
        let md_full = resolve::metric_dimension(&target);
        let md_reduced = resolve::metric_dimension(&step.graph);
        let rule_ok = md_full as i64 == md_reduced as i64 + step.decrement;

        let ok = rr2_ok && rule_ok;
        if !ok {
            violations += 1;
            let stem = format!("kernel_seed{seed}_s{sample}");
            let files = dump_failure(
                &stem,
                &[
                    ("rr2.graph", io::write_graph(&g)),
                    ("planted.graph", io::write_graph(&target)),
                ],
            );
            eprintln!("mdkit: xval kernel witness written: {files:?}");
            per_sample.push(json!({
                "sample": sample,
                "rr2_ok": rr2_ok,
                "rule_ok": rule_ok,
                "planted": planted.description,
                "md_full": md_full,
                "md_reduced": md_reduced,
                "decrement": step.decrement,
                "ok": false,
                "witness_files": files,
            }));
        } else {
            per_sample.push(json!({
                "sample": sample,
                "rr2_ok": true,
                "rule_ok": true,
                "planted": planted.description,
                "ok": true,
            }));
        }
        eprintln!("mdkit: xval kernel sample {sample} done");
    }
    let exit = if violations > 0 { 1 } else { 0 };
    record.finish(
        exit,
        json!({
            "samples": samples,
            "violations": violations,
            "mode": mode.as_str(),
            "records": per_sample,
        }),
    )
}
