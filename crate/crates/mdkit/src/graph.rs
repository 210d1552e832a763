//! Simple undirected graphs with dense ids, BFS distances, twin detection,
//! and the structural predicates used by the solver and the reductions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u},{v}) has an endpoint out of range for {n} vertices")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop ({u},{u}) is not allowed")]
    SelfLoop { u: usize },
    #[error("unknown vertex id {0}")]
    UnknownVertex(usize),
    #[error("label {label:?} already assigned to vertex {holder}")]
    DuplicateLabel { label: String, holder: usize },
}

/// Distance value of an unweighted shortest path.
///
/// `Unreachable` orders strictly above every finite distance and is equal
/// only to itself, so two vertices that are both unreachable from `w` are
/// *not* resolved by `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dist {
    Finite(usize),
    Unreachable,
}

impl Dist {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Unreachable => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }
}

impl std::fmt::Display for Dist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Unreachable => write!(f, "inf"),
        }
    }
}

/// Immutable simple undirected graph on vertex ids `0..n`.
///
/// Adjacency lists are sorted and symmetric; self-loops and parallel edges
/// are rejected at construction. Labels are optional injective role strings
/// attached by the gadget generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: BTreeMap<usize, String>,
}

impl Graph {
    /// Builds a graph from an edge list, deduplicating and symmetrizing.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { u });
            }
            sets[u].insert(v);
            sets[v].insert(u);
        }
        Ok(Graph {
            adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            labels: BTreeMap::new(),
        })
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
            labels: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Attaches a role label; labels must be unique across vertices.
    pub fn set_label(&mut self, v: usize, label: impl Into<String>) -> Result<(), GraphError> {
        if v >= self.n() {
            return Err(GraphError::UnknownVertex(v));
        }
        let label = label.into();
        if let Some((&holder, _)) = self.labels.iter().find(|(&u, l)| u != v && **l == label) {
            return Err(GraphError::DuplicateLabel { label, holder });
        }
        self.labels.insert(v, label);
        Ok(())
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(|s| s.as_str())
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<usize> {
        self.labels
            .iter()
            .find(|(_, l)| *l == label)
            .map(|(&v, _)| v)
    }

    /// BFS distances from `src`, with [`Dist::Unreachable`] for other
    /// components.
    pub fn bfs_distances(&self, src: usize) -> Vec<Dist> {
        let mut dist = vec![Dist::Unreachable; self.n()];
        dist[src] = Dist::Finite(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = match dist[u] {
                Dist::Finite(d) => d,
                Dist::Unreachable => unreachable!(),
            };
            for &v in &self.adj[u] {
                if dist[v] == Dist::Unreachable {
                    dist[v] = Dist::Finite(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// All-pairs shortest-path distances via one BFS per vertex.
    pub fn all_pairs_distances(&self) -> DistanceMatrix {
        DistanceMatrix {
            rows: (0..self.n()).map(|v| self.bfs_distances(v)).collect(),
        }
    }

    /// Exhaustive true- and false-twin pairs, sorted and deduplicated.
    pub fn twins(&self) -> TwinReport {
        let mut true_twin_pairs = Vec::new();
        let mut false_twin_pairs = Vec::new();
        for u in 0..self.n() {
            for v in (u + 1)..self.n() {
                if self.closed_neighborhood(u) == self.closed_neighborhood(v) {
                    true_twin_pairs.push((u, v));
                } else if !self.has_edge(u, v) && self.adj[u] == self.adj[v] {
                    false_twin_pairs.push((u, v));
                }
            }
        }
        TwinReport {
            true_twin_pairs,
            false_twin_pairs,
        }
    }

    fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut nb = self.adj[v].clone();
        let pos = nb.binary_search(&v).unwrap_err();
        nb.insert(pos, v);
        nb
    }

    /// Every induced path on three vertices as `(a, b, c)` with middle vertex
    /// `b` and `a < c`, sorted; empty iff every component is a clique.
    pub fn induced_p3s(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.n() {
            let nb = &self.adj[b];
            for (i, &a) in nb.iter().enumerate() {
                for &c in &nb[i + 1..] {
                    if !self.has_edge(a, c) {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Complement graph on the same vertex set; labels carry over.
    pub fn complement(&self) -> Graph {
        let adj = (0..self.n())
            .map(|u| {
                (0..self.n())
                    .filter(|&v| u != v && !self.has_edge(u, v))
                    .collect()
            })
            .collect();
        Graph {
            adj,
            labels: self.labels.clone(),
        }
    }

    /// True iff the graph has no cycle (edges = vertices - components).
    pub fn is_acyclic(&self) -> bool {
        self.edge_count() + self.connected_components().len() == self.n()
    }

    /// Connected components as sorted vertex lists, ordered by smallest
    /// member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut comps = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.connected_components().len() == 1
    }

    /// Induced subgraph on the remaining vertices with ids compacted.
    ///
    /// Returns the new graph and a remap table `old id -> Some(new id)`
    /// (`None` for deleted vertices). Labels follow their vertices.
    pub fn remove_vertices(
        &self,
        s: &BTreeSet<usize>,
    ) -> Result<(Graph, Vec<Option<usize>>), GraphError> {
        if let Some(&v) = s.iter().find(|&&v| v >= self.n()) {
            return Err(GraphError::UnknownVertex(v));
        }
        let mut remap = vec![None; self.n()];
        let mut next = 0usize;
        for (v, slot) in remap.iter_mut().enumerate() {
            if !s.contains(&v) {
                *slot = Some(next);
                next += 1;
            }
        }
        let mut adj = vec![Vec::new(); next];
        let mut labels = BTreeMap::new();
        for v in 0..self.n() {
            if let Some(nv) = remap[v] {
                adj[nv] = self.adj[v].iter().filter_map(|&u| remap[u]).collect();
                if let Some(l) = self.labels.get(&v) {
                    labels.insert(nv, l.clone());
                }
            }
        }
        Ok((Graph { adj, labels }, remap))
    }
}

/// All-pairs unweighted shortest-path distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    rows: Vec<Vec<Dist>>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, u: usize, v: usize) -> Dist {
        self.rows[u][v]
    }

    pub fn row(&self, u: usize) -> &[Dist] {
        &self.rows[u]
    }

    /// `d(A, B)`: minimum distance over pairs from the two sets.
    pub fn between_sets(&self, a: &[usize], b: &[usize]) -> Dist {
        let mut best = Dist::Unreachable;
        for &u in a {
            for &v in b {
                best = best.min(self.get(u, v));
            }
        }
        best
    }
}

/// True- and false-twin pairs of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinReport {
    /// Pairs with `N[u] = N[v]` (necessarily adjacent).
    pub true_twin_pairs: Vec<(usize, usize)>,
    /// Pairs with `N(u) = N(v)` and `uv` not an edge.
    pub false_twin_pairs: Vec<(usize, usize)>,
}

impl TwinReport {
    /// All twin pairs of either kind, sorted.
    pub fn all_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = self.true_twin_pairs.clone();
        out.extend_from_slice(&self.false_twin_pairs);
        out.sort_unstable();
        out
    }

    /// Maximal groups of mutually (true or false) twin vertices with at
    /// least `min_size` members, each sorted, ordered by smallest member.
    /// True-twin groups come first.
    pub fn twin_groups(&self, min_size: usize) -> Vec<TwinGroup> {
        let mut out = Vec::new();
        for (pairs, kind) in [
            (&self.true_twin_pairs, TwinKind::True),
            (&self.false_twin_pairs, TwinKind::False),
        ] {
            for group in group_pairs(pairs) {
                if group.len() >= min_size {
                    out.push(TwinGroup {
                        kind,
                        vertices: group,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwinKind {
    True,
    False,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinGroup {
    pub kind: TwinKind,
    pub vertices: Vec<usize>,
}

// Twin-ness of a fixed kind is transitive, so the pair graph is a disjoint
// union of cliques and plain union-find grouping is exact.
fn group_pairs(pairs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<usize, usize>, v: usize) -> usize {
        let p = *parent.entry(v).or_insert(v);
        if p == v {
            v
        } else {
            let root = find(parent, p);
            parent.insert(v, root);
            root
        }
    }
    for &(u, v) in pairs {
        let ru = find(&mut parent, u);
        let rv = find(&mut parent, v);
        if ru != rv {
            parent.insert(ru.max(rv), ru.min(rv));
        }
    }
    let members: Vec<usize> = parent.keys().copied().collect();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in members {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{complete_graph, cycle_graph, path_graph, star_graph};

    #[test]
    fn from_edges_builds_path() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn from_edges_single_vertex() {
        let g = Graph::from_edges(1, &[]).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn from_edges_dedups_and_symmetrizes() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert_eq!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(GraphError::EndpointOutOfRange { u: 0, v: 2, n: 2 })
        );
        assert_eq!(
            Graph::from_edges(2, &[(1, 1)]),
            Err(GraphError::SelfLoop { u: 1 })
        );
    }

    #[test]
    fn distances_on_path() {
        let g = path_graph(3);
        let m = g.all_pairs_distances();
        assert_eq!(m.get(0, 2), Dist::Finite(2));
        assert_eq!(m.get(2, 0), Dist::Finite(2));
    }

    #[test]
    fn distances_between_isolated_vertices() {
        let g = Graph::empty(2);
        let m = g.all_pairs_distances();
        assert_eq!(m.get(0, 1), Dist::Unreachable);
        assert_eq!(m.get(0, 0), Dist::Finite(0));
    }

    #[test]
    fn sentinel_orders_above_every_finite_distance() {
        assert!(Dist::Finite(usize::MAX) < Dist::Unreachable);
        assert_eq!(Dist::Unreachable, Dist::Unreachable);
        assert_ne!(Dist::Finite(0), Dist::Unreachable);
    }

    // Independent oracle for C6 opposite-vertex distance: enumerate all
    // simple paths between the two vertices and take the shortest.
    fn shortest_simple_path(g: &Graph, s: usize, t: usize) -> Option<usize> {
        fn rec(g: &Graph, t: usize, path: &mut Vec<usize>, best: &mut Option<usize>) {
            let u = *path.last().unwrap();
            if u == t {
                let len = path.len() - 1;
                *best = Some(best.map_or(len, |b: usize| b.min(len)));
                return;
            }
            for &v in g.neighbors(u) {
                if !path.contains(&v) {
                    path.push(v);
                    rec(g, t, path, best);
                    path.pop();
                }
            }
        }
        let mut best = None;
        rec(g, t, &mut vec![s], &mut best);
        best
    }

    #[test]
    fn cycle_opposite_distance_matches_path_enumeration() {
        let g = cycle_graph(6);
        let m = g.all_pairs_distances();
        let oracle = shortest_simple_path(&g, 0, 3).unwrap();
        assert_eq!(oracle, 3);
        assert_eq!(m.get(0, 3), Dist::Finite(oracle));
    }

    #[test]
    fn twins_on_triangle_and_star() {
        let k3 = complete_graph(3);
        let rep = k3.twins();
        assert_eq!(rep.true_twin_pairs, vec![(0, 1), (0, 2), (1, 2)]);
        assert!(rep.false_twin_pairs.is_empty());

        let star = star_graph(4); // center 0, leaves 1..=3
        let rep = star.twins();
        assert!(rep.true_twin_pairs.is_empty());
        assert_eq!(rep.false_twin_pairs, vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn cycle_has_no_twins() {
        let g = cycle_graph(6);
        // Oracle: direct neighborhood comparison over all 15 pairs.
        for u in 0..6 {
            for v in (u + 1)..6 {
                let closed = |x: usize| {
                    let mut nb: Vec<usize> = g.neighbors(x).to_vec();
                    nb.push(x);
                    nb.sort_unstable();
                    nb
                };
                assert_ne!(closed(u), closed(v));
                assert_ne!(g.neighbors(u), g.neighbors(v));
            }
        }
        let rep = g.twins();
        assert!(rep.true_twin_pairs.is_empty());
        assert!(rep.false_twin_pairs.is_empty());
    }

    #[test]
    fn induced_p3s_examples() {
        assert_eq!(path_graph(3).induced_p3s(), vec![(0, 1, 2)]);
        assert!(complete_graph(4).induced_p3s().is_empty());

        // Two disjoint triangles; oracle is an exhaustive triple scan.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let mut oracle = Vec::new();
        for b in 0..6 {
            for a in 0..6 {
                for c in (a + 1)..6 {
                    if a != b && c != b && g.has_edge(a, b) && g.has_edge(b, c) && !g.has_edge(a, c)
                    {
                        oracle.push((a, b, c));
                    }
                }
            }
        }
        assert!(oracle.is_empty());
        assert!(g.induced_p3s().is_empty());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complete_graph(3).complement().edge_count(), 0);
        assert_eq!(Graph::empty(2).complement().edges(), vec![(0, 1)]);

        // C5 is self-complementary; its complement is exactly the chord set.
        let c5 = cycle_graph(5);
        let expected = vec![(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)];
        assert_eq!(c5.complement().edges(), expected);
    }

    #[test]
    fn complement_is_involutive() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4), (0, 4)]).unwrap();
        assert_eq!(g.complement().complement(), g);
    }

    #[test]
    fn acyclicity_examples() {
        assert!(path_graph(3).is_acyclic());
        assert!(!complete_graph(3).is_acyclic());
        let forest = Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert!(forest.is_acyclic());
    }

    #[test]
    fn remove_vertices_examples() {
        let k3 = complete_graph(3);
        let (g, remap) = k3.remove_vertices(&BTreeSet::from([0])).unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
        assert_eq!(remap, vec![None, Some(0), Some(1)]);

        let (same, remap) = k3.remove_vertices(&BTreeSet::new()).unwrap();
        assert_eq!(same, k3);
        assert_eq!(remap, vec![Some(0), Some(1), Some(2)]);

        let c4 = cycle_graph(4);
        let (p3, _) = c4.remove_vertices(&BTreeSet::from([3])).unwrap();
        assert_eq!(p3.edge_count(), 2);
        assert_eq!(p3.induced_p3s().len(), 1);

        assert!(k3.remove_vertices(&BTreeSet::from([7])).is_err());
    }

    #[test]
    fn labels_follow_vertices_and_stay_unique() {
        let mut g = path_graph(3);
        g.set_label(0, "left").unwrap();
        g.set_label(2, "right").unwrap();
        assert!(g.set_label(1, "left").is_err());
        let (h, _) = g.remove_vertices(&BTreeSet::from([0])).unwrap();
        assert_eq!(h.label(1), Some("right"));
        assert_eq!(h.vertex_by_label("left"), None);
    }

    #[test]
    fn twin_distance_invariance_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(2..=20);
            let g = crate::gen::random_graph(n, 0.4, &mut rng);
            let m = g.all_pairs_distances();
            let rep = g.twins();
            for (u, v) in rep.all_pairs() {
                for w in 0..n {
                    if w != u && w != v {
                        assert_eq!(m.get(u, w), m.get(v, w));
                    }
                }
            }
        }
    }

    #[test]
    fn bfs_agrees_with_breadth_layering_oracle() {
        use rand::{Rng, SeedableRng};
        // Oracle: expand frontier sets layer by layer, no queue.
        fn layered(g: &Graph, src: usize) -> Vec<Dist> {
            let mut dist = vec![Dist::Unreachable; g.n()];
            let mut layer = BTreeSet::from([src]);
            let mut depth = 0usize;
            while !layer.is_empty() {
                let mut next = BTreeSet::new();
                for &u in &layer {
                    if dist[u] == Dist::Unreachable {
                        dist[u] = Dist::Finite(depth);
                        next.extend(g.neighbors(u).iter().copied());
                    }
                }
                layer = next
                    .into_iter()
                    .filter(|&v| dist[v] == Dist::Unreachable)
                    .collect();
                depth += 1;
            }
            dist
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let n = rng.gen_range(1..=50);
            let g = crate::gen::random_graph(n, 0.15, &mut rng);
            let m = g.all_pairs_distances();
            for v in 0..n {
                assert_eq!(m.row(v), layered(&g, v).as_slice());
            }
        }
    }

    #[test]
    fn distance_matrix_invariants_hold() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..=16);
            let g = crate::gen::random_graph(n, 0.3, &mut rng);
            let m = g.all_pairs_distances();
            for u in 0..n {
                assert_eq!(m.get(u, u), Dist::Finite(0));
                for v in 0..n {
                    assert_eq!(m.get(u, v), m.get(v, u));
                    assert_eq!(m.get(u, v) == Dist::Finite(1), g.has_edge(u, v));
                    for w in 0..n {
                        if let (Dist::Finite(a), Dist::Finite(b), Dist::Finite(c)) =
                            (m.get(u, v), m.get(u, w), m.get(w, v))
                        {
                            assert!(a <= b + c);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn p3_free_iff_components_are_cliques() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.gen_range(1..=12);
            let g = crate::gen::random_graph(n, 0.5, &mut rng);
            let cliques = g.connected_components().iter().all(|comp| {
                comp.iter()
                    .all(|&u| comp.iter().all(|&v| u == v || g.has_edge(u, v)))
            });
            assert_eq!(g.induced_p3s().is_empty(), cliques);
        }
    }
}
