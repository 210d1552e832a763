//! Resolving-set semantics and the exact metric-dimension solver.
//!
//! The solver works on the hitting-set reformulation: for every vertex pair
//! `(u, v)` the *pair set* is the set of vertices `w` with `d(w,u) != d(w,v)`,
//! and a set is resolving exactly when it hits every pair set. Branch and
//! bound runs inside an iterative-deepening loop, branching on the smallest
//! unhit pair set in ascending vertex order, with a greedy disjoint-set
//! packing as the pruning lower bound.

use crate::graph::{DistanceMatrix, Graph};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    /// The node budget ran out: the answer is indeterminate, never wrong.
    #[error("node budget exhausted after {explored} search nodes")]
    NodeCapExceeded { explored: u64 },
}

/// Verification outcome for a candidate resolving set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvingCertificate {
    /// The candidate set, ascending.
    pub vertices: Vec<usize>,
    pub verified: bool,
    /// Lexicographically smallest unresolved pair when `verified` is false.
    pub witness_pair: Option<(usize, usize)>,
}

/// The hitting-set view of a graph: one set of resolving vertices per vertex
/// pair, with identical sets merged.
#[derive(Debug, Clone)]
pub struct DistinguishingInstance {
    pub universe: usize,
    pub sets: Vec<PairSet>,
    /// Pairs no vertex resolves; impossible for simple graphs on >= 2
    /// vertices (each of `u`, `v` resolves `(u, v)`), reported for safety.
    pub empty_pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    /// Vertices resolving every pair in `pairs`, ascending.
    pub resolvers: Vec<usize>,
    /// The vertex pairs sharing this resolver set.
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdStatus {
    Exact,
    ExceedsBound,
}

/// Result of an exact metric-dimension computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdResult {
    pub status: MdStatus,
    /// The metric dimension, present when `status` is `Exact`.
    pub value: Option<usize>,
    pub certificate: Option<ResolvingCertificate>,
    pub explored_nodes: u64,
    pub bound: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Decision bound: prune at this depth; `ExceedsBound` proves no
    /// resolving set of that size exists.
    pub bound: Option<usize>,
    /// Search-node budget; exceeding it aborts with an error.
    pub node_cap: Option<u64>,
}

/// Distance vector `r(S|v) = (d(s_1,v), ..., d(s_k,v))` for an ordered set.
pub fn distance_vector(g: &Graph, s: &[usize], v: usize) -> Vec<crate::graph::Dist> {
    assert!(!s.is_empty(), "distance vector needs a non-empty base set");
    s.iter().map(|&w| g.bfs_distances(w)[v]).collect()
}

/// Checks the resolving-set definition pair by pair.
pub fn is_resolving_set(g: &Graph, s: &[usize]) -> ResolvingCertificate {
    let mut vertices: Vec<usize> = s.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    for &v in &vertices {
        assert!(v < g.n(), "vertex {v} out of range");
    }
    let rows: Vec<_> = vertices.iter().map(|&w| g.bfs_distances(w)).collect();
    for u in 0..g.n() {
        for v in (u + 1)..g.n() {
            if rows.iter().all(|row| row[u] == row[v]) {
                return ResolvingCertificate {
                    vertices,
                    verified: false,
                    witness_pair: Some((u, v)),
                };
            }
        }
    }
    ResolvingCertificate {
        vertices,
        verified: true,
        witness_pair: None,
    }
}

/// All twin pairs; every resolving set must intersect each of them.
pub fn mandatory_pair_constraints(g: &Graph) -> Vec<(usize, usize)> {
    g.twins().all_pairs()
}

/// Builds the pair-set instance from the distance matrix.
pub fn build_distinguishing_instance(g: &Graph) -> DistinguishingInstance {
    let m = g.all_pairs_distances();
    build_distinguishing_from_matrix(g.n(), &m)
}

fn build_distinguishing_from_matrix(n: usize, m: &DistanceMatrix) -> DistinguishingInstance {
    use std::collections::BTreeMap;
    let mut by_set: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    let mut empty_pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let resolvers: Vec<usize> = (0..n).filter(|&w| m.get(w, u) != m.get(w, v)).collect();
            if resolvers.is_empty() {
                empty_pairs.push((u, v));
            } else {
                by_set.entry(resolvers).or_default().push((u, v));
            }
        }
    }
    DistinguishingInstance {
        universe: n,
        sets: by_set
            .into_iter()
            .map(|(resolvers, pairs)| PairSet { resolvers, pairs })
            .collect(),
        empty_pairs,
    }
}

/// Greedy resolving set: repeatedly add the vertex resolving the most
/// still-unresolved pairs, ties broken by smallest id. Seeds the solver's
/// deepening range.
pub fn greedy_upper_bound(g: &Graph) -> Vec<usize> {
    assert!(g.n() >= 2, "greedy seed needs at least two vertices");
    let m = g.all_pairs_distances();
    let mut unresolved: Vec<(usize, usize)> = (0..g.n())
        .flat_map(|u| ((u + 1)..g.n()).map(move |v| (u, v)))
        .collect();
    let mut chosen = Vec::new();
    while !unresolved.is_empty() {
        let mut best = (0usize, 0usize); // (count, vertex) with max count, min id
        for w in 0..g.n() {
            let count = unresolved
                .iter()
                .filter(|&&(u, v)| m.get(w, u) != m.get(w, v))
                .count();
            if count > best.0 {
                best = (count, w);
            }
        }
        debug_assert!(best.0 > 0, "some vertex always resolves a live pair");
        let w = best.1;
        chosen.push(w);
        unresolved.retain(|&(u, v)| m.get(w, u) == m.get(w, v));
    }
    chosen
}

/// Exact metric dimension by iterative deepening over the hitting-set
/// branch and bound. Deterministic for identical input.
pub fn metric_dimension_exact(g: &Graph, opts: &SolveOptions) -> Result<MdResult, SolveError> {
    if g.n() <= 1 {
        return Ok(MdResult {
            status: MdStatus::Exact,
            value: Some(0),
            certificate: Some(ResolvingCertificate {
                vertices: Vec::new(),
                verified: true,
                witness_pair: None,
            }),
            explored_nodes: 0,
            bound: opts.bound,
        });
    }
    let instance = build_distinguishing_instance(g);
    debug_assert!(instance.empty_pairs.is_empty());
    let mut search = Search::new(&instance, opts.node_cap);

    let root_lb = search.disjoint_lower_bound(&(0..search.sets.len()).collect::<Vec<_>>());
    let ub = greedy_upper_bound(g).len();
    let hi = opts.bound.map_or(ub, |b| b.min(ub));

    for target in root_lb..=hi {
        let all: Vec<usize> = (0..search.sets.len()).collect();
        let mut chosen = Vec::new();
        if let Some(sol) = search.dfs(&all, &mut chosen, target)? {
            let mut vertices = sol;
            vertices.sort_unstable();
            let cert = is_resolving_set(g, &vertices);
            debug_assert!(cert.verified);
            return Ok(MdResult {
                status: MdStatus::Exact,
                value: Some(target),
                certificate: Some(cert),
                explored_nodes: search.nodes,
                bound: opts.bound,
            });
        }
    }
    // Unreachable without a bound: depth `ub` always succeeds because the
    // greedy set hits every pair set.
    Ok(MdResult {
        status: MdStatus::ExceedsBound,
        value: None,
        certificate: None,
        explored_nodes: search.nodes,
        bound: opts.bound,
    })
}

/// Convenience wrapper: the exact value with no bound and no node cap.
pub fn metric_dimension(g: &Graph) -> usize {
    metric_dimension_exact(g, &SolveOptions::default())
        .expect("uncapped solve cannot hit a node budget")
        .value
        .expect("unbounded solve is exact")
}

struct Search {
    /// One bitmask of resolvers per deduplicated pair set.
    sets: Vec<Bits>,
    members: Vec<Vec<usize>>,
    banned: Bits,
    nodes: u64,
    cap: Option<u64>,
}

impl Search {
    fn new(instance: &DistinguishingInstance, cap: Option<u64>) -> Search {
        let sets: Vec<Bits> = instance
            .sets
            .iter()
            .map(|s| Bits::from_members(instance.universe, &s.resolvers))
            .collect();
        Search {
            members: instance.sets.iter().map(|s| s.resolvers.clone()).collect(),
            sets,
            banned: Bits::new(instance.universe),
            nodes: 0,
            cap,
        }
    }

    fn effective_len(&self, set: usize) -> usize {
        self.sets[set].count_minus(&self.banned)
    }

    /// Greedy packing of pairwise-disjoint unhit sets, counting live
    /// (non-banned) members only; each packed set needs its own pick.
    /// `usize::MAX` when some set has no live member left.
    fn disjoint_lower_bound(&self, unhit: &[usize]) -> usize {
        let mut order: Vec<(usize, usize)> =
            unhit.iter().map(|&i| (self.effective_len(i), i)).collect();
        if order.iter().any(|&(len, _)| len == 0) {
            return usize::MAX;
        }
        order.sort_unstable();
        let mut used = Bits::new(self.banned.words.len() * 64);
        let mut count = 0;
        for (_, i) in order {
            if !self.live_intersects(i, &used) {
                self.union_live(i, &mut used);
                count += 1;
            }
        }
        count
    }

    fn live_intersects(&self, set: usize, used: &Bits) -> bool {
        self.sets[set]
            .words
            .iter()
            .zip(&self.banned.words)
            .zip(&used.words)
            .any(|((s, b), u)| s & !b & u != 0)
    }

    fn union_live(&self, set: usize, used: &mut Bits) {
        for ((s, b), u) in self.sets[set]
            .words
            .iter()
            .zip(&self.banned.words)
            .zip(used.words.iter_mut())
        {
            *u |= s & !b;
        }
    }

    fn dfs(
        &mut self,
        unhit: &[usize],
        chosen: &mut Vec<usize>,
        depth_left: usize,
    ) -> Result<Option<Vec<usize>>, SolveError> {
        self.nodes += 1;
        if let Some(cap) = self.cap {
            if self.nodes > cap {
                return Err(SolveError::NodeCapExceeded {
                    explored: self.nodes,
                });
            }
        }
        if unhit.is_empty() {
            return Ok(Some(chosen.clone()));
        }
        if depth_left == 0 {
            return Ok(None);
        }
        let lb = self.disjoint_lower_bound(unhit);
        if lb > depth_left {
            return Ok(None);
        }
        // Branch on the unhit set with the fewest live members.
        let &pick = unhit
            .iter()
            .min_by_key(|&&i| (self.effective_len(i), i))
            .unwrap();
        let branch_vertices: Vec<usize> = self.members[pick]
            .iter()
            .copied()
            .filter(|&v| !self.banned.contains(v))
            .collect();
        let mut result = None;
        let mut newly_banned = Vec::new();
        for v in branch_vertices {
            let next: Vec<usize> = unhit
                .iter()
                .copied()
                .filter(|&i| !self.sets[i].contains(v))
                .collect();
            chosen.push(v);
            let sub = self.dfs(&next, chosen, depth_left - 1)?;
            chosen.pop();
            if sub.is_some() {
                result = sub;
                break;
            }
            // Later siblings must not reuse this vertex.
            self.banned.insert(v);
            newly_banned.push(v);
        }
        for v in newly_banned {
            self.banned.remove(v);
        }
        Ok(result)
    }
}

#[derive(Clone)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(n: usize) -> Bits {
        Bits {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn from_members(n: usize, members: &[usize]) -> Bits {
        let mut b = Bits::new(n);
        for &v in members {
            b.insert(v);
        }
        b
    }

    fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1 << (v % 64));
    }

    fn contains(&self, v: usize) -> bool {
        self.words[v / 64] & (1 << (v % 64)) != 0
    }

    /// Number of members outside `mask`.
    fn count_minus(&self, mask: &Bits) -> usize {
        self.words
            .iter()
            .zip(&mask.words)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }
}
