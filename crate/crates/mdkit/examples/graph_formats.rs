//! File formats: graph text, label sidecars, instance files, and traces.
//!
//! Everything serializes to a canonical byte form (sorted edges, sorted JSON
//! keys, no insignificant whitespace), so equal objects produce identical
//! files and golden tests stay stable.
//!
//! ```bash
//! cargo run -p mdkit --example graph_formats
//! ```

use mdkit::io::{
    read_graph, read_labels, read_nae, sha256_hex, write_graph, write_labels, write_nae,
};
use mdkit::reduce_nae::NaeInstance;

fn main() {
    println!("=== Graph text format ===");
    let text = "c a 4-cycle\np graph 4 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n";
    let parsed = read_graph(text).unwrap();
    println!("input (with comment):\n{text}");
    println!("canonical form:\n{}", write_graph(&parsed.graph));

    println!("=== Duplicate edges warn and dedup ===");
    let noisy = "p graph 3 3\ne 1 2\ne 2 1\ne 2 3\n";
    let parsed = read_graph(noisy).unwrap();
    println!("warnings: {:?}", parsed.warnings);
    println!("{}", write_graph(&parsed.graph));

    println!("=== Label sidecar ===");
    let mut g = parsed.graph.clone();
    g.set_label(0, "left").unwrap();
    g.set_label(1, "middle").unwrap();
    g.set_label(2, "right").unwrap();
    let labels = write_labels(&g);
    println!("{labels}");
    assert_eq!(read_labels(&labels).unwrap().len(), 3);

    println!("\n=== Instance file ===");
    let inst = NaeInstance::new(2, 3, vec![[(0, 1), (1, 2), (2, 1)]]).unwrap();
    let text = write_nae(&inst);
    println!("{text}");
    assert_eq!(read_nae(&text).unwrap(), inst);

    println!("=== Schema errors carry a JSON pointer ===");
    let bad = r#"{"clauses":[[]],"d":2,"vars":3}"#;
    println!("{bad}\n-> {}", read_nae(bad).unwrap_err());

    println!("\n=== Input hashes for provenance ===");
    println!("sha256(instance) = {}", sha256_hex(text.as_bytes()));
}
