//! The seeded cross-validation harnesses, driven programmatically.
//!
//! Each harness is also a CLI subcommand (`mdkit xval ...`); this example
//! invokes the same dispatch path and summarizes the verdicts.
//!
//! ```bash
//! cargo run -p mdkit --example cross_validation
//! ```

use clap::Parser;
use mdkit::cli::{dispatch, Cli};

fn run(args: &[&str]) -> serde_json::Value {
    let mut argv = vec!["mdkit"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).unwrap();
    let (exit, record) = dispatch(&cli.command);
    assert_eq!(exit, 0, "harness reported a failure: {record}");
    record
}

fn main() {
    println!("=== SAT equivalence harness ===");
    let record = run(&[
        "xval",
        "sat",
        "--n",
        "2",
        "--m-max",
        "3",
        "--samples",
        "30",
        "--seed",
        "42",
    ]);
    let o = &record["outcome"];
    println!(
        "{} solver decisions vs. brute force: {} disagreements, {} indeterminate",
        o["checked"], o["disagreements"], o["indeterminate"]
    );

    println!("\n=== NAE harness (claims + constructive + sweep) ===");
    let record = run(&[
        "xval",
        "nae",
        "--d",
        "2",
        "--vars",
        "3",
        "--clauses",
        "1",
        "--samples",
        "15",
        "--seed",
        "42",
    ]);
    let o = &record["outcome"];
    println!("{} samples, {} violations", o["samples"], o["violations"]);

    println!("\n=== Kernel-rule safeness harness ===");
    for mode in ["cluster", "co-cluster"] {
        let record = run(&[
            "xval",
            "kernel",
            "--planted-x",
            "1",
            "--samples",
            "10",
            "--seed",
            "42",
            "--mode",
            mode,
        ]);
        let o = &record["outcome"];
        println!(
            "mode {mode:<10} {} samples, {} violations",
            o["samples"], o["violations"]
        );
    }

    println!("\nSame seed, same corpus: every harness is replayable.");
}
