//! Reduction rules for metric dimension relative to a distance-to-cluster
//! (or co-cluster) modulator, with replayable traces.
//!
//! The pipeline checks the trivial-no rule, exhausts twin-triple removal,
//! then repeatedly deletes one clique (or independent set) from any
//! oversized equivalence class, re-exhausting twin removal after each
//! structural change. Every step is recorded against original vertex ids so
//! the kernel can be reproduced byte for byte.

use crate::graph::{Graph, TwinGroup};
use std::collections::BTreeSet;
use thiserror::Error;

/// Default search budget when the modulator has to be computed.
pub const DEFAULT_MODULATOR_BUDGET: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("modulator invariant violated: {0}")]
    InvalidModulator(String),
    #[error("reduction precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no modulator of size <= {budget} found")]
    ModulatorNotFound { budget: usize },
    #[error("cliques are not in the same equivalence class")]
    CliquesNotInSameClass,
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulatorMode {
    Cluster,
    CoCluster,
}

impl ModulatorMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ModulatorMode::Cluster => "cluster",
            ModulatorMode::CoCluster => "co-cluster",
        }
    }
}

/// A vertex set whose deletion leaves a cluster graph (mode `Cluster`) or a
/// co-cluster graph (mode `CoCluster`); validated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modulator {
    vertices: Vec<usize>,
    mode: ModulatorMode,
}

impl Modulator {
    pub fn new(
        vertices: Vec<usize>,
        mode: ModulatorMode,
        g: &Graph,
    ) -> Result<Modulator, KernelError> {
        let mut vertices = vertices;
        vertices.sort_unstable();
        vertices.dedup();
        if let Some(&v) = vertices.iter().find(|&&v| v >= g.n()) {
            return Err(KernelError::UnknownVertex(v));
        }
        let m = Modulator { vertices, mode };
        m.validate(g)?;
        Ok(m)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn mode(&self) -> ModulatorMode {
        self.mode
    }

    fn validate(&self, g: &Graph) -> Result<(), KernelError> {
        for part in parts_outside(g, &self.vertices, self.mode) {
            for (i, &u) in part.iter().enumerate() {
                for &v in &part[i + 1..] {
                    match self.mode {
                        ModulatorMode::Cluster if !g.has_edge(u, v) => {
                            return Err(KernelError::InvalidModulator(format!(
                                "component {{{u},{v},..}} of G-X is not a clique"
                            )));
                        }
                        ModulatorMode::CoCluster if g.has_edge(u, v) => {
                            return Err(KernelError::InvalidModulator(format!(
                                "part {{{u},{v},..}} of G-X is not independent"
                            )));
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }
}

/// Connected parts of the graph outside `x`: components of `G - X` in
/// cluster mode, co-components (parts of the complete multipartite
/// complement) in co-cluster mode. Sorted lists ordered by smallest member.
fn parts_outside(g: &Graph, x: &[usize], mode: ModulatorMode) -> Vec<Vec<usize>> {
    let in_x: BTreeSet<usize> = x.iter().copied().collect();
    let rest: Vec<usize> = (0..g.n()).filter(|v| !in_x.contains(v)).collect();
    let rest_set: BTreeSet<usize> = rest.iter().copied().collect();
    let neighbors = |u: usize| -> Vec<usize> {
        match mode {
            ModulatorMode::Cluster => g
                .neighbors(u)
                .iter()
                .copied()
                .filter(|v| rest_set.contains(v))
                .collect(),
            ModulatorMode::CoCluster => rest
                .iter()
                .copied()
                .filter(|&v| v != u && !g.has_edge(u, v))
                .collect(),
        }
    };
    let mut seen = BTreeSet::new();
    let mut parts = Vec::new();
    for &s in &rest {
        if seen.contains(&s) {
            continue;
        }
        let mut part = vec![s];
        seen.insert(s);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in neighbors(u) {
                if seen.insert(v) {
                    part.push(v);
                    queue.push_back(v);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    parts
}

/// Cliques (or independent sets) of `G - X` sharing one signature: the
/// multiset of X-neighborhoods of their vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    /// Sorted multiset of sorted X-neighborhoods.
    pub signature: Vec<Vec<usize>>,
    /// Member parts, each sorted, ordered by smallest member id.
    pub cliques: Vec<Vec<usize>>,
    /// Twin pairs inside each member: neighborhoods of multiplicity two.
    pub twin_pair_count: usize,
}

/// Groups the parts of `G - X` by signature. Requires twin-triple removal
/// to have been exhausted (no X-neighborhood may appear three times inside
/// one part).
pub fn classify(g: &Graph, x: &Modulator) -> Result<Vec<EquivalenceClass>, KernelError> {
    x.validate(g)?;
    let xs = x.vertices();
    let mut by_sig: std::collections::BTreeMap<Vec<Vec<usize>>, Vec<Vec<usize>>> =
        std::collections::BTreeMap::new();
    for part in parts_outside(g, xs, x.mode) {
        let mut sig: Vec<Vec<usize>> = part
            .iter()
            .map(|&u| {
                g.neighbors(u)
                    .iter()
                    .copied()
                    .filter(|v| xs.binary_search(v).is_ok())
                    .collect()
            })
            .collect();
        sig.sort();
        for window in sig.windows(3) {
            if window[0] == window[1] && window[1] == window[2] {
                return Err(KernelError::PreconditionViolated(format!(
                    "part containing vertex {} holds a twin triple (neighborhood multiplicity > 2)",
                    part[0]
                )));
            }
        }
        by_sig.entry(sig).or_default().push(part);
    }
    Ok(by_sig
        .into_iter()
        .map(|(signature, mut cliques)| {
            cliques.sort();
            let twin_pair_count = signature.windows(2).filter(|w| w[0] == w[1]).count();
            EquivalenceClass {
                signature,
                cliques,
                twin_pair_count,
            }
        })
        .collect())
}

/// Clones of `u` inside `target`: its vertices with the same X-neighborhood
/// as `u`. Both parts must belong to the same equivalence class.
pub fn clone_of(
    g: &Graph,
    x: &Modulator,
    classes: &[EquivalenceClass],
    u: usize,
    target: &[usize],
) -> Result<Vec<usize>, KernelError> {
    let mut target: Vec<usize> = target.to_vec();
    target.sort_unstable();
    let class = classes
        .iter()
        .find(|c| c.cliques.iter().any(|cl| cl.binary_search(&u).is_ok()))
        .ok_or(KernelError::CliquesNotInSameClass)?;
    if !class.cliques.contains(&target) {
        return Err(KernelError::CliquesNotInSameClass);
    }
    let xs = x.vertices();
    let nb_x = |v: usize| -> Vec<usize> {
        g.neighbors(v)
            .iter()
            .copied()
            .filter(|w| xs.binary_search(w).is_ok())
            .collect()
    };
    let want = nb_x(u);
    Ok(target
        .iter()
        .copied()
        .filter(|&v| nb_x(v) == want)
        .collect())
}

/// Size threshold of the identical-clique rules: classes with at least this
/// many members lose one.
pub fn rule_threshold(x_size: usize) -> usize {
    (1usize << (x_size + 2)) + x_size + 2
}

/// Vertex bound guaranteed after kernelization; `None` when it overflows
/// `u128` (then any graph trivially satisfies it).
pub fn kernel_size_bound(x_size: usize) -> Option<u128> {
    let exp_inner = 1u32.checked_shl(x_size as u32 + 1)?; // 2^(|X|+1)
    let classes = 2u128.checked_pow(exp_inner)?; // 2^(2^(|X|+1))
    let per_class = (1u128 << (x_size + 2)) + x_size as u128 + 1;
    let clique_order = 1u128 << (x_size + 1);
    classes
        .checked_mul(per_class)?
        .checked_mul(clique_order)?
        .checked_add(x_size as u128)
}

/// Trivial-no rule: a nonempty graph with `k <= 0` cannot have a resolving
/// set of size at most `k`.
pub fn apply_rr1(g: &Graph, k: i64) -> bool {
    g.n() > 0 && k <= 0
}

/// One twin-triple reduction step: removes the highest-id member of a
/// mutual (true or false) twin group of size three or more and decrements
/// `k`. Both twin kinds are reduced in both modulator modes.
pub fn apply_rr2(g: &Graph, k: i64) -> Option<(Graph, i64, usize)> {
    let group = pick_twin_group(g)?;
    let victim = *group.vertices.last().unwrap();
    let (h, _) = g.remove_vertices(&BTreeSet::from([victim])).unwrap();
    Some((h, k - 1, victim))
}

fn pick_twin_group(g: &Graph) -> Option<TwinGroup> {
    g.twins().twin_groups(3).into_iter().next()
}

/// Outcome of one identical-clique (or identical-independent-set) step.
#[derive(Debug, Clone)]
pub struct RuleStep {
    pub graph: Graph,
    pub k: i64,
    /// Removed vertices, in the ids of the input graph.
    pub removed: Vec<usize>,
    pub decrement: i64,
    /// Old id -> new id for the surviving vertices.
    pub remap: Vec<Option<usize>>,
}

/// Identical-clique rule: if some equivalence class has at least
/// `rule_threshold(|X|)` cliques, removes its lexicographically smallest
/// clique and decreases `k` by `max(1, t)`.
pub fn apply_rr3(g: &Graph, k: i64, x: &Modulator) -> Result<Option<RuleStep>, KernelError> {
    if x.mode() != ModulatorMode::Cluster {
        return Err(KernelError::PreconditionViolated(
            "identical-clique rule needs a cluster modulator".into(),
        ));
    }
    apply_identical_rule(g, k, x)
}

/// Co-cluster mirror of [`apply_rr3`] over independent sets.
pub fn apply_rr4(g: &Graph, k: i64, x: &Modulator) -> Result<Option<RuleStep>, KernelError> {
    if x.mode() != ModulatorMode::CoCluster {
        return Err(KernelError::PreconditionViolated(
            "identical-independent-set rule needs a co-cluster modulator".into(),
        ));
    }
    apply_identical_rule(g, k, x)
}

fn apply_identical_rule(g: &Graph, k: i64, x: &Modulator) -> Result<Option<RuleStep>, KernelError> {
    let threshold = rule_threshold(x.vertices().len());
    let classes = classify(g, x)?;
    for class in &classes {
        if class.cliques.len() >= threshold {
            let victim = class.cliques[0].clone();
            let decrement = class.twin_pair_count.max(1) as i64;
            let (h, remap) = g
                .remove_vertices(&victim.iter().copied().collect())
                .unwrap();
            return Ok(Some(RuleStep {
                graph: h,
                k: k - decrement,
                removed: victim,
                decrement,
                remap,
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    Rr2,
    Rr3,
    Rr4,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Rr2 => "RR2",
            RuleId::Rr3 => "RR3",
            RuleId::Rr4 => "RR4",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleId> {
        match s {
            "RR2" => Some(RuleId::Rr2),
            "RR3" => Some(RuleId::Rr3),
            "RR4" => Some(RuleId::Rr4),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: RuleId,
    /// Removed vertices by their ids in the *original* graph.
    pub removed: Vec<usize>,
    pub decrement: i64,
}

/// Ordered record of applied reduction steps, sufficient to replay the
/// kernelization on the original graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelTrace {
    pub mode: ModulatorMode,
    pub initial_k: i64,
    pub final_k: i64,
    pub steps: Vec<TraceStep>,
}

impl KernelTrace {
    pub fn check_consistency(&self) -> Result<(), String> {
        let total: i64 = self.steps.iter().map(|s| s.decrement).sum();
        if self.final_k != self.initial_k - total {
            return Err(format!(
                "final_k {} != initial_k {} - total decrements {}",
                self.final_k, self.initial_k, total
            ));
        }
        for (i, s) in self.steps.iter().enumerate() {
            if s.rule == RuleId::Rr2 && s.decrement != 1 {
                return Err(format!("step {i}: RR2 must decrement by exactly 1"));
            }
            if s.decrement < 1 {
                return Err(format!("step {i}: decrement must be at least 1"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum KernelOutcome {
    Reduced {
        graph: Graph,
        k: i64,
        trace: KernelTrace,
    },
    /// The trivial-no rule fired (possibly mid-run); the trace covers the
    /// steps applied before it.
    TrivialNo { trace: KernelTrace },
}

/// Runs the full reduction pipeline. When `x` is absent a modulator is
/// searched for with the given budget.
pub fn kernelize(
    g: &Graph,
    k: i64,
    x: Option<Modulator>,
    mode: ModulatorMode,
    modulator_budget: usize,
) -> Result<KernelOutcome, KernelError> {
    let x = match x {
        Some(m) => {
            if m.mode() != mode {
                return Err(KernelError::PreconditionViolated(
                    "modulator mode does not match requested mode".into(),
                ));
            }
            m.validate(g)?;
            m
        }
        None => {
            find_modulator(g, modulator_budget, mode).ok_or(KernelError::ModulatorNotFound {
                budget: modulator_budget,
            })?
        }
    };

    let mut graph = g.clone();
    let mut cur_k = k;
    // Current id -> original id, and the surviving modulator in current ids.
    let mut orig: Vec<usize> = (0..g.n()).collect();
    let mut x_cur: Vec<usize> = x.vertices().to_vec();
    let mut steps: Vec<TraceStep> = Vec::new();

    let finish_trace = |steps: Vec<TraceStep>, final_k: i64| KernelTrace {
        mode,
        initial_k: k,
        final_k,
        steps,
    };

    loop {
        if apply_rr1(&graph, cur_k) {
            return Ok(KernelOutcome::TrivialNo {
                trace: finish_trace(steps, cur_k),
            });
        }
        if let Some((h, k2, victim)) = apply_rr2(&graph, cur_k) {
            steps.push(TraceStep {
                rule: RuleId::Rr2,
                removed: vec![orig[victim]],
                decrement: 1,
            });
            let mut next_orig = orig.clone();
            next_orig.remove(victim);
            orig = next_orig;
            x_cur = x_cur
                .iter()
                .filter(|&&v| v != victim)
                .map(|&v| if v > victim { v - 1 } else { v })
                .collect();
            graph = h;
            cur_k = k2;
            continue;
        }
        let x_now = Modulator::new(x_cur.clone(), mode, &graph)?;
        let step = match mode {
            ModulatorMode::Cluster => apply_rr3(&graph, cur_k, &x_now)?,
            ModulatorMode::CoCluster => apply_rr4(&graph, cur_k, &x_now)?,
        };
        match step {
            Some(s) => {
                steps.push(TraceStep {
                    rule: match mode {
                        ModulatorMode::Cluster => RuleId::Rr3,
                        ModulatorMode::CoCluster => RuleId::Rr4,
                    },
                    removed: s.removed.iter().map(|&v| orig[v]).collect(),
                    decrement: s.decrement,
                });
                orig = (0..graph.n())
                    .filter_map(|v| s.remap[v].map(|nv| (nv, orig[v])))
                    .collect::<std::collections::BTreeMap<_, _>>()
                    .into_values()
                    .collect();
                x_cur = x_cur.iter().filter_map(|&v| s.remap[v]).collect();
                graph = s.graph;
                cur_k = s.k;
            }
            None => break,
        }
    }

    let x_size = x_cur.len();
    if let Some(bound) = kernel_size_bound(x_size) {
        assert!(
            (graph.n() as u128) <= bound,
            "kernel has {} vertices, exceeding the guaranteed bound {bound} for |X| = {x_size}",
            graph.n()
        );
    }
    Ok(KernelOutcome::Reduced {
        graph: graph.clone(),
        k: cur_k,
        trace: finish_trace(steps, cur_k),
    })
}

/// Re-applies a trace to the original graph; the result must match the
/// kernel byte for byte.
pub fn replay_trace(g: &Graph, trace: &KernelTrace) -> Result<Graph, KernelError> {
    let mut graph = g.clone();
    let mut current: Vec<Option<usize>> = (0..g.n()).map(Some).collect();
    for step in &trace.steps {
        let mut victims = BTreeSet::new();
        for &o in &step.removed {
            let cur = current
                .get(o)
                .copied()
                .flatten()
                .ok_or(KernelError::UnknownVertex(o))?;
            victims.insert(cur);
        }
        let (h, remap) = graph
            .remove_vertices(&victims)
            .map_err(|_| KernelError::UnknownVertex(*step.removed.first().unwrap_or(&0)))?;
        for slot in current.iter_mut() {
            *slot = slot.and_then(|c| remap[c]);
        }
        graph = h;
    }
    Ok(graph)
}

/// Searches for a modulator of size at most `budget` by three-way branching
/// on induced paths (every induced P3 must lose a vertex); the returned set
/// is minimal under single-vertex removal.
pub fn find_modulator(g: &Graph, budget: usize, mode: ModulatorMode) -> Option<Modulator> {
    let target = match mode {
        ModulatorMode::Cluster => g.clone(),
        ModulatorMode::CoCluster => g.complement(),
    };
    let mut deleted = Vec::new();
    if !branch(&target, budget, &mut deleted) {
        return None;
    }
    // Minimality pass: drop any vertex whose removal keeps G-X in class.
    let mut keep: Vec<usize> = deleted.clone();
    keep.sort_unstable();
    let mut i = 0;
    while i < keep.len() {
        let mut trial = keep.clone();
        trial.remove(i);
        if p3_free_outside(&target, &trial) {
            keep = trial;
        } else {
            i += 1;
        }
    }
    Some(Modulator::new(keep, mode, g).expect("branching produces a valid modulator"))
}

fn first_p3_outside(g: &Graph, deleted: &[usize]) -> Option<(usize, usize, usize)> {
    let gone: BTreeSet<usize> = deleted.iter().copied().collect();
    for b in 0..g.n() {
        if gone.contains(&b) {
            continue;
        }
        let nb: Vec<usize> = g
            .neighbors(b)
            .iter()
            .copied()
            .filter(|v| !gone.contains(v))
            .collect();
        for (i, &a) in nb.iter().enumerate() {
            for &c in &nb[i + 1..] {
                if !g.has_edge(a, c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

fn p3_free_outside(g: &Graph, deleted: &[usize]) -> bool {
    first_p3_outside(g, deleted).is_none()
}

fn branch(g: &Graph, budget: usize, deleted: &mut Vec<usize>) -> bool {
    match first_p3_outside(g, deleted) {
        None => true,
        Some(_) if budget == 0 => false,
        Some((a, b, c)) => {
            for v in [a, b, c] {
                deleted.push(v);
                if branch(g, budget - 1, deleted) {
                    return true;
                }
                deleted.pop();
            }
            false
        }
    }
}
