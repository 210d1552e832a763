//! Deterministic instance generators for tests and the cross-validation
//! harnesses. All randomness flows through a caller-supplied ChaCha8 RNG so
//! that a seed pins the full corpus.

use crate::graph::Graph;
use crate::kernel::{Modulator, ModulatorMode};
use crate::reduce_nae::NaeInstance;
use crate::reduce_sat::CnfFormula;
use rand::Rng;

pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle_graph(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((n - 1, 0));
    Graph::from_edges(n, &edges).unwrap()
}

/// Star with center 0 and `n - 1` leaves.
pub fn star_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn complete_graph(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// G(n, p) with each edge included independently.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Connected G(n, p): resamples until the graph is connected.
pub fn random_connected_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    loop {
        let g = random_graph(n, p, rng);
        if g.is_connected() {
            return g;
        }
    }
}

/// Random graph guaranteed to contain a mutual twin triple: two extra
/// vertices clone a random base vertex (closed copy for true twins, open
/// copy for false twins).
pub fn random_graph_with_twin_triple(n_base: usize, rng: &mut impl Rng) -> Graph {
    assert!(n_base >= 1);
    let base = random_graph(n_base, 0.4, rng);
    let model = rng.gen_range(0..n_base);
    let true_twins = rng.gen_bool(0.5);
    let n = n_base + 2;
    let mut edges = base.edges();
    for clone in [n_base, n_base + 1] {
        for &u in base.neighbors(model) {
            edges.push((clone, u));
        }
        if true_twins {
            edges.push((clone, model));
        }
    }
    if true_twins {
        edges.push((n_base, n_base + 1));
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Random CNF on exactly `n` variables with between 1 and `m_max` distinct,
/// non-tautological clauses.
pub fn random_cnf(n: usize, m_max: usize, rng: &mut impl Rng) -> CnfFormula {
    assert!(n >= 1 && m_max >= 1);
    loop {
        let m = rng.gen_range(1..=m_max);
        let mut clauses = Vec::with_capacity(m);
        for _ in 0..m {
            // Per variable: absent, positive, or negative.
            let clause: Vec<i32> = (1..=n as i32)
                .filter_map(|v| match rng.gen_range(0..3) {
                    0 => None,
                    1 => Some(v),
                    _ => Some(-v),
                })
                .collect();
            if clause.is_empty() {
                return random_cnf(n, m_max, rng); // retry; empty clauses are rejected
            }
            clauses.push(clause);
        }
        if let Ok(f) = CnfFormula::new(n, clauses) {
            return f;
        }
    }
}

/// Random NAE-Integer-3-SAT instance with the given shape; every clause
/// picks three distinct variables and bounds in `[1, d]`.
///
/// Whenever `3 * clauses >= vars` the sample is resampled until every
/// variable occurs in some clause: a variable outside all clauses leaves an
/// isolated cycle in the generated graph, which no size-`k` candidate set
/// can resolve, so such instances sit outside the reduction's scope.
pub fn random_nae(d: usize, vars: usize, clauses: usize, rng: &mut impl Rng) -> NaeInstance {
    assert!(vars >= 3, "clauses need three distinct variables");
    let must_cover = 3 * clauses >= vars;
    loop {
        let mut cls = Vec::with_capacity(clauses);
        let mut used = vec![false; vars];
        for _ in 0..clauses {
            let mut picked: Vec<usize> = Vec::new();
            while picked.len() < 3 {
                let v = rng.gen_range(0..vars);
                if !picked.contains(&v) {
                    picked.push(v);
                }
            }
            picked.sort_unstable();
            for &v in &picked {
                used[v] = true;
            }
            let lits = [
                (picked[0], rng.gen_range(1..=d)),
                (picked[1], rng.gen_range(1..=d)),
                (picked[2], rng.gen_range(1..=d)),
            ];
            cls.push(lits);
        }
        if !must_cover || used.iter().all(|&u| u) {
            return NaeInstance::new(d, vars, cls).unwrap();
        }
    }
}

/// A planted kernelization instance: one equivalence class large enough to
/// trigger the identical-clique rule, plus the modulator wiring.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub graph: Graph,
    pub modulator: Modulator,
    /// Number of cliques in the planted class.
    pub class_size: usize,
    /// True-twin pairs per clique of the planted class.
    pub twin_pairs: usize,
    pub description: String,
}

/// Shapes available for planted classes; all stay twin-triple-free so the
/// identical-clique rule is the first applicable one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlantedKind {
    /// |X| = 0, cliques are K2 with both neighborhoods empty (t = 1).
    NoModulatorPairs,
    /// |X| = 1, cliques are K2 with one endpoint on x (t = 0).
    OneModulatorMixed,
    /// |X| = 1, cliques are K2 with both endpoints on x (t = 1).
    OneModulatorPairs,
}

impl PlantedKind {
    pub fn for_x_size(x_size: usize, rng: &mut impl Rng) -> PlantedKind {
        match x_size {
            0 => PlantedKind::NoModulatorPairs,
            1 => {
                if rng.gen_bool(0.5) {
                    PlantedKind::OneModulatorMixed
                } else {
                    PlantedKind::OneModulatorPairs
                }
            }
            _ => panic!("planted instances support |X| <= 1"),
        }
    }
}

/// Builds a cluster-mode planted instance of the given kind with
/// `class_size` cliques (at least the rule threshold to be useful).
pub fn planted_cluster_instance(kind: PlantedKind, class_size: usize) -> PlantedInstance {
    let (x_size, on_x, twin_pairs) = match kind {
        PlantedKind::NoModulatorPairs => (0usize, [false, false], 1usize),
        PlantedKind::OneModulatorMixed => (1, [true, false], 0),
        PlantedKind::OneModulatorPairs => (1, [true, true], 1),
    };
    let n = x_size + 2 * class_size;
    let mut edges = Vec::new();
    for c in 0..class_size {
        let a = x_size + 2 * c;
        let b = a + 1;
        edges.push((a, b));
        if x_size == 1 {
            if on_x[0] {
                edges.push((0, a));
            }
            if on_x[1] {
                edges.push((0, b));
            }
        }
    }
    let graph = Graph::from_edges(n, &edges).unwrap();
    let modulator = Modulator::new((0..x_size).collect(), ModulatorMode::Cluster, &graph).unwrap();
    PlantedInstance {
        graph,
        modulator,
        class_size,
        twin_pairs,
        description: format!("{kind:?} x{class_size}"),
    }
}
