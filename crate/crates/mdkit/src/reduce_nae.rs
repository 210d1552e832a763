//! NAE-Integer-3-SAT encoded as metric dimension.
//!
//! Variables range over `1..=d` and every clause bounds three distinct
//! variables; a clause holds when its three inequalities are neither all
//! true nor all false. The generated graph has one cycle of length `2d + 2`
//! per variable, two mirrored clause components tied to the variable cycles
//! by paths whose lengths encode the clause bounds, a central 3-vertex path,
//! and pendant claws that pin down the forced part of any small resolving
//! set; the target size is `k = |X| + 10|C| + 1`.
//!
//! `check_distance_claims` verifies by BFS every distance the correctness
//! argument uses. `resolving_set_from_assignment` materializes the resolving
//! set induced by a satisfying assignment, and `reverse_candidate_sweep`
//! enumerates the non-forced candidate sets to confirm that resolving
//! choices and satisfying assignments coincide.

use crate::graph::{Dist, Graph};
use crate::resolve::{is_resolving_set, ResolvingCertificate};
use std::collections::HashMap;
use thiserror::Error;

pub const DEFAULT_NAE_CAP: u128 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NaeError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("enumeration needs {needed} candidates, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("assignment does not satisfy the instance (clause {index} fails)")]
    UnsatisfyingAssignment { index: usize },
    #[error("bad assignment: {0}")]
    BadAssignment(String),
}

/// An NAE-Integer-3-SAT instance: domain bound, variable count, and clauses
/// of three `(variable, bound)` inequalities over distinct variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaeInstance {
    d: usize,
    var_count: usize,
    clauses: Vec<[(usize, usize); 3]>,
}

impl NaeInstance {
    pub fn new(
        d: usize,
        var_count: usize,
        clauses: Vec<[(usize, usize); 3]>,
    ) -> Result<NaeInstance, NaeError> {
        if d < 1 {
            return Err(NaeError::InvalidInstance(
                "domain bound d must be >= 1".into(),
            ));
        }
        let mut canon = Vec::with_capacity(clauses.len());
        for (idx, clause) in clauses.into_iter().enumerate() {
            let mut members = clause;
            members.sort_by_key(|&(x, _)| x);
            for &(x, a) in &members {
                if x >= var_count {
                    return Err(NaeError::InvalidInstance(format!(
                        "clause {idx}: variable {x} out of range for {var_count} variables"
                    )));
                }
                if a < 1 || a > d {
                    return Err(NaeError::InvalidInstance(format!(
                        "clause {idx}: bound {a} outside [1, {d}]"
                    )));
                }
            }
            if members[0].0 == members[1].0 || members[1].0 == members[2].0 {
                return Err(NaeError::InvalidInstance(format!(
                    "clause {idx}: variables must be pairwise distinct"
                )));
            }
            canon.push(members);
        }
        Ok(NaeInstance {
            d,
            var_count,
            clauses: canon,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clauses(&self) -> &[[(usize, usize); 3]] {
        &self.clauses
    }

    /// NAE semantics: the three inequalities are neither all true nor all
    /// false, for every clause.
    pub fn is_satisfied_by(&self, phi: &[usize]) -> bool {
        self.failing_clause(phi).is_none()
    }

    /// True when every variable occurs in at least one clause. A variable
    /// outside all clauses leaves an isolated cycle in the gadget, and a
    /// cycle cannot be resolved by the single vertex a size-`k` candidate
    /// set spends on it; the constructed resolving set is only claimed for
    /// covered instances.
    pub fn every_variable_occurs(&self) -> bool {
        let mut used = vec![false; self.var_count];
        for clause in &self.clauses {
            for &(x, _) in clause {
                used[x] = true;
            }
        }
        used.iter().all(|&u| u)
    }

    fn failing_clause(&self, phi: &[usize]) -> Option<usize> {
        self.clauses.iter().position(|clause| {
            let truths: Vec<bool> = clause.iter().map(|&(x, a)| phi[x] <= a).collect();
            truths.iter().all(|&t| t) || truths.iter().all(|&t| !t)
        })
    }
}

/// Lexicographically smallest satisfying assignment (values in `1..=d`), or
/// `None` when unsatisfiable.
pub fn nae_brute_force(inst: &NaeInstance, cap: u128) -> Result<Option<Vec<usize>>, NaeError> {
    let needed =
        (inst.d as u128)
            .checked_pow(inst.var_count as u32)
            .ok_or(NaeError::CapExceeded {
                needed: u128::MAX,
                cap,
            })?;
    if needed > cap {
        return Err(NaeError::CapExceeded { needed, cap });
    }
    let mut phi = vec![1usize; inst.var_count];
    loop {
        if inst.is_satisfied_by(&phi) {
            return Ok(Some(phi));
        }
        // Increment the mixed-radix counter, most significant digit first.
        let mut pos = inst.var_count;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            if phi[pos] < inst.d {
                phi[pos] += 1;
                for digit in phi.iter_mut().skip(pos + 1) {
                    *digit = 1;
                }
                break;
            }
        }
    }
}

/// Side of a clause gadget: the plain component or its mirrored copy.
pub const SIDE_PLAIN: usize = 0;
pub const SIDE_BAR: usize = 1;

/// Generated gadget with typed handles into the labeled graph.
#[derive(Debug, Clone)]
pub struct NaeGadget {
    pub graph: Graph,
    pub k: usize,
    d: usize,
    u1: Vec<usize>,
    u2: Vec<usize>,
    v: Vec<Vec<usize>>,
    w: Vec<Vec<usize>>,
    head: Vec<[usize; 2]>,
    core_v: Vec<[usize; 2]>,
    core_p1: Vec<[usize; 2]>,
    core_p2: Vec<[usize; 2]>,
    b: Vec<[usize; 2]>,
    h_vertices: Vec<[Vec<usize>; 2]>,
    conn_w: Vec<[[usize; 2]; 3]>,
    conn_t1: Vec<[[usize; 2]; 3]>,
    conn_t2: Vec<[[usize; 2]; 3]>,
    t1: usize,
    p: usize,
    t2: usize,
    side_w: Vec<[usize; 2]>,
    side_t1: Vec<[usize; 2]>,
    side_t2: Vec<[usize; 2]>,
}

impl NaeGadget {
    /// `v_i^x` under the convention `v_0 = u_1` and `v_{d+1} = u_2`.
    pub fn v_at(&self, x: usize, i: usize) -> usize {
        match i {
            0 => self.u1[x],
            i if i == self.d + 1 => self.u2[x],
            i => self.v[x][i - 1],
        }
    }

    /// `w_i^x` under the same anchor convention.
    pub fn w_at(&self, x: usize, i: usize) -> usize {
        match i {
            0 => self.u1[x],
            i if i == self.d + 1 => self.u2[x],
            i => self.w[x][i - 1],
        }
    }

    /// All vertices of the variable cycle `G_x`.
    pub fn variable_cycle(&self, x: usize) -> Vec<usize> {
        let mut out = vec![self.u1[x], self.u2[x]];
        out.extend_from_slice(&self.v[x]);
        out.extend_from_slice(&self.w[x]);
        out.sort_unstable();
        out
    }

    pub fn clause_component(&self, j: usize, side: usize) -> &[usize] {
        &self.h_vertices[j][side]
    }

    pub fn central_t1(&self) -> usize {
        self.t1
    }

    /// The central path `t1 - p - t2`.
    pub fn central_path(&self) -> (usize, usize, usize) {
        (self.t1, self.p, self.t2)
    }

    pub fn clause_head(&self, j: usize, side: usize) -> usize {
        self.head[j][side]
    }

    pub fn clause_b(&self, j: usize, side: usize) -> usize {
        self.b[j][side]
    }

    /// Claw attachment point on the connection path of clause `j`, member
    /// `slot`, on the given side.
    pub fn claw_attach(&self, j: usize, slot: usize, side: usize) -> usize {
        self.conn_w[j][slot][side]
    }

    /// Neighbor of the central vertex on the path towards clause `j`.
    pub fn central_side_w(&self, j: usize, side: usize) -> usize {
        self.side_w[j][side]
    }

    pub fn central_side_leaves(&self, j: usize, side: usize) -> [usize; 2] {
        [self.side_t1[j][side], self.side_t2[j][side]]
    }

    pub fn clause_core_v(&self, j: usize, side: usize) -> usize {
        self.core_v[j][side]
    }

    pub fn clause_p(&self, j: usize, side: usize) -> [usize; 2] {
        [self.core_p1[j][side], self.core_p2[j][side]]
    }

    pub fn claw_leaf1(&self, j: usize, slot: usize, side: usize) -> usize {
        self.conn_t1[j][slot][side]
    }

    pub fn claw_leaf2(&self, j: usize, slot: usize, side: usize) -> usize {
        self.conn_t2[j][slot][side]
    }

    /// The forced part of every candidate resolving set: the central leaf,
    /// one pendant vertex per twin pair of every clause gadget.
    pub fn forced_picks(&self) -> Vec<usize> {
        let mut s = vec![self.t1];
        for j in 0..self.head.len() {
            for side in [SIDE_PLAIN, SIDE_BAR] {
                s.push(self.core_p1[j][side]);
                s.push(self.side_t1[j][side]);
                for slot in 0..3 {
                    s.push(self.conn_t1[j][slot][side]);
                }
            }
        }
        s.sort_unstable();
        s
    }
}

struct Builder {
    edges: Vec<(usize, usize)>,
    labels: Vec<(usize, String)>,
    next: usize,
}

impl Builder {
    fn fresh(&mut self, label: String) -> usize {
        let v = self.next;
        self.next += 1;
        self.labels.push((v, label));
        v
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    /// Path of `len` edges from `from` to `to`; interior vertex at position
    /// `pos` (1-based from the `from` side) is labeled by `name(pos)`.
    fn path(
        &mut self,
        from: usize,
        to: usize,
        len: usize,
        mut name: impl FnMut(usize) -> String,
    ) -> Vec<usize> {
        assert!(len >= 1);
        let mut interior = Vec::with_capacity(len - 1);
        let mut prev = from;
        for pos in 1..len {
            let q = self.fresh(name(pos));
            self.edge(prev, q);
            interior.push(q);
            prev = q;
        }
        self.edge(prev, to);
        interior
    }

    /// Pendant claw at `attach`: a fresh center adjacent to `attach` and two
    /// fresh leaves. Returns `(center, leaf1, leaf2)`.
    fn claw(&mut self, attach: usize, tag: &str) -> (usize, usize, usize) {
        let center = self.fresh(format!("claw{tag}"));
        let l1 = self.fresh(format!("t1{tag}"));
        let l2 = self.fresh(format!("t2{tag}"));
        self.edge(center, attach);
        self.edge(center, l1);
        self.edge(center, l2);
        (center, l1, l2)
    }
}

/// Builds the gadget for a valid instance. Identical instances produce
/// byte-identical graphs and label maps.
pub fn build_nae_gadget(inst: &NaeInstance) -> NaeGadget {
    let d = inst.d();
    let vars = inst.var_count();
    let m = inst.clauses().len();
    let mut b = Builder {
        edges: Vec::new(),
        labels: Vec::new(),
        next: 0,
    };

    // Variable cycles, rotation order u1, v_1..v_d, u2, w_d..w_1.
    let mut u1 = Vec::with_capacity(vars);
    let mut u2 = Vec::with_capacity(vars);
    let mut v: Vec<Vec<usize>> = Vec::with_capacity(vars);
    let mut w: Vec<Vec<usize>> = Vec::with_capacity(vars);
    for x in 0..vars {
        let a1 = b.fresh(format!("u1[x{x}]"));
        let vx: Vec<usize> = (1..=d).map(|i| b.fresh(format!("v[x{x}][{i}]"))).collect();
        let a2 = b.fresh(format!("u2[x{x}]"));
        let mut wx_rev: Vec<usize> = (1..=d)
            .rev()
            .map(|i| b.fresh(format!("w[x{x}][{i}]")))
            .collect();
        wx_rev.reverse(); // store as w_1..w_d
        b.edge(a1, vx[0]);
        for pair in vx.windows(2) {
            b.edge(pair[0], pair[1]);
        }
        b.edge(vx[d - 1], a2);
        b.edge(a2, wx_rev[d - 1]);
        for pair in wx_rev.windows(2) {
            b.edge(pair[0], pair[1]);
        }
        b.edge(wx_rev[0], a1);
        u1.push(a1);
        u2.push(a2);
        v.push(vx);
        w.push(wx_rev);
    }

    // Clause components: a K_{1,3} core plus a pendant path of length d.
    let side_tag = |j: usize, side: usize| -> String {
        if side == SIDE_PLAIN {
            format!("c{j}")
        } else {
            format!("cbar{j}")
        }
    };
    let mut head = Vec::with_capacity(m);
    let mut core_v = Vec::with_capacity(m);
    let mut core_p1 = Vec::with_capacity(m);
    let mut core_p2 = Vec::with_capacity(m);
    let mut bb = Vec::with_capacity(m);
    let mut h_vertices: Vec<[Vec<usize>; 2]> = Vec::with_capacity(m);
    for j in 0..m {
        let mut per_side: Vec<(usize, usize, usize, usize, usize, Vec<usize>)> = Vec::new();
        for side in [SIDE_PLAIN, SIDE_BAR] {
            let tag = side_tag(j, side);
            let hd = b.fresh(if side == SIDE_PLAIN {
                format!("c[{j}]")
            } else {
                format!("cbar[{j}]")
            });
            let vc = b.fresh(format!("v[{tag}]"));
            let p1 = b.fresh(format!("p1[{tag}]"));
            let p2 = b.fresh(format!("p2[{tag}]"));
            b.edge(hd, vc);
            b.edge(vc, p1);
            b.edge(vc, p2);
            // Pendant path of length d from the head to b^l.
            let mut prev = hd;
            let mut members = vec![hd, vc, p1, p2];
            for pos in 1..d {
                let q = b.fresh(format!("Pb[{tag}]#{pos}"));
                b.edge(prev, q);
                members.push(q);
                prev = q;
            }
            let bl = b.fresh(format!("b[{tag}]"));
            b.edge(prev, bl);
            members.push(bl);
            per_side.push((hd, vc, p1, p2, bl, members));
        }
        let s0 = per_side.remove(0);
        let s1 = per_side.remove(0);
        head.push([s0.0, s1.0]);
        core_v.push([s0.1, s1.1]);
        core_p1.push([s0.2, s1.2]);
        core_p2.push([s0.3, s1.3]);
        bb.push([s0.4, s1.4]);
        h_vertices.push([s0.5, s1.5]);
    }

    // Connection paths and their pendant claws, grouped (variable, clause,
    // side). Interior numbering counts from the clause-side endpoint; the
    // neighbor of v^l keeps its role label w[..].
    let mut conn_w = vec![[[usize::MAX; 2]; 3]; m];
    let mut conn_t1 = vec![[[usize::MAX; 2]; 3]; m];
    let mut conn_t2 = vec![[[usize::MAX; 2]; 3]; m];
    for x in 0..vars {
        for (j, clause) in inst.clauses().iter().enumerate() {
            let Some(slot) = clause.iter().position(|&(t, _)| t == x) else {
                continue;
            };
            let a = clause[slot].1;
            // Plain side: b^c -> u1 (length 4d - a), v^c -> u2 (4d + a - 1).
            let tag = side_tag(j, SIDE_PLAIN);
            b.path(bb[j][SIDE_PLAIN], u1[x], 4 * d - a, |pos| {
                format!("P1[x{x}][{tag}]#{pos}")
            });
            let wxc = b.fresh(format!("w[x{x}][{tag}]"));
            b.edge(core_v[j][SIDE_PLAIN], wxc);
            b.path(wxc, u2[x], 4 * d + a - 2, |pos| {
                format!("P2[x{x}][{tag}]#{}", pos + 1)
            });
            let (_, l1, l2) = b.claw(wxc, &format!("[x{x}][{tag}]"));
            conn_w[j][slot][SIDE_PLAIN] = wxc;
            conn_t1[j][slot][SIDE_PLAIN] = l1;
            conn_t2[j][slot][SIDE_PLAIN] = l2;

            // Mirror side: b^cbar -> u2 (3d + a), v^cbar -> u1 (5d - a).
            let tag = side_tag(j, SIDE_BAR);
            b.path(bb[j][SIDE_BAR], u2[x], 3 * d + a, |pos| {
                format!("P2[x{x}][{tag}]#{pos}")
            });
            let wxc = b.fresh(format!("w[x{x}][{tag}]"));
            b.edge(core_v[j][SIDE_BAR], wxc);
            b.path(wxc, u1[x], 5 * d - a - 1, |pos| {
                format!("P1[x{x}][{tag}]#{}", pos + 1)
            });
            let (_, l1, l2) = b.claw(wxc, &format!("[x{x}][{tag}]"));
            conn_w[j][slot][SIDE_BAR] = wxc;
            conn_t1[j][slot][SIDE_BAR] = l1;
            conn_t2[j][slot][SIDE_BAR] = l2;
        }
    }

    // Central path t1 - p - t2 with one pendant-claw path per clause side.
    let t1 = b.fresh("t1".into());
    let p = b.fresh("p".into());
    let t2 = b.fresh("t2".into());
    b.edge(t1, p);
    b.edge(p, t2);
    let mut side_w = vec![[usize::MAX; 2]; m];
    let mut side_t1 = vec![[usize::MAX; 2]; m];
    let mut side_t2 = vec![[usize::MAX; 2]; m];
    for j in 0..m {
        for side in [SIDE_PLAIN, SIDE_BAR] {
            let tag = side_tag(j, side);
            // Path of length 2d from v^l to p; the p-neighbor is w^l.
            let mut prev = core_v[j][side];
            for pos in 1..=(2 * d - 2) {
                let q = b.fresh(format!("P[{tag}]#{pos}"));
                b.edge(prev, q);
                prev = q;
            }
            let wl = b.fresh(format!("w[{tag}]"));
            b.edge(prev, wl);
            b.edge(wl, p);
            let (_, l1, l2) = b.claw(wl, &format!("[{tag}]"));
            side_w[j][side] = wl;
            side_t1[j][side] = l1;
            side_t2[j][side] = l2;
        }
    }

    let n = b.next;
    let mut graph = Graph::from_edges(n, &b.edges).expect("construction is simple by design");
    for (vtx, label) in b.labels {
        graph
            .set_label(vtx, label)
            .expect("labels are injective by construction");
    }
    NaeGadget {
        graph,
        k: vars + 10 * m + 1,
        d,
        u1,
        u2,
        v,
        w,
        head,
        core_v,
        core_p1,
        core_p2,
        b: bb,
        h_vertices,
        conn_w,
        conn_t1,
        conn_t2,
        t1,
        p,
        t2,
        side_w,
        side_t1,
        side_t2,
    }
}

/// Feedback-vertex-set witness: the central vertex plus both anchors of
/// every variable cycle; removing it provably leaves a forest.
pub fn fvs_witness(gadget: &NaeGadget) -> Vec<usize> {
    let mut s = vec![gadget.p];
    s.extend_from_slice(&gadget.u1);
    s.extend_from_slice(&gadget.u2);
    s.sort_unstable();
    s
}

/// The resolving set induced by a satisfying assignment: the forced picks
/// plus `v_{phi(x)}^x` per variable. Always has size `k`; verification runs
/// the full pair check.
pub fn resolving_set_from_assignment(
    gadget: &NaeGadget,
    inst: &NaeInstance,
    phi: &[usize],
) -> Result<ResolvingCertificate, NaeError> {
    validate_assignment(inst, phi)?;
    if let Some(index) = inst.failing_clause(phi) {
        return Err(NaeError::UnsatisfyingAssignment { index });
    }
    let mut s = gadget.forced_picks();
    for (x, &value) in phi.iter().enumerate() {
        s.push(gadget.v[x][value - 1]);
    }
    assert_eq!(s.len(), gadget.k);
    Ok(is_resolving_set(&gadget.graph, &s))
}

fn validate_assignment(inst: &NaeInstance, phi: &[usize]) -> Result<(), NaeError> {
    if phi.len() != inst.var_count() {
        return Err(NaeError::BadAssignment(format!(
            "expected {} values, got {}",
            inst.var_count(),
            phi.len()
        )));
    }
    if let Some(&bad) = phi.iter().find(|&&value| value < 1 || value > inst.d()) {
        return Err(NaeError::BadAssignment(format!(
            "value {bad} outside [1, {}]",
            inst.d()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Exactly(usize),
    AtLeast(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimCheck {
    pub claim: &'static str,
    pub context: String,
    pub expected: Expected,
    pub actual: Dist,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct ClaimReport {
    pub checks: Vec<ClaimCheck>,
}

impl ClaimReport {
    pub fn mismatches(&self) -> Vec<&ClaimCheck> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Verifies by BFS every distance property the reduction argument uses:
/// clause-component separation, variable-cycle separation, and the exact
/// piecewise distances from cycle vertices to clause heads, cores, and
/// pendant-claw leaves. Mismatches are report entries, not panics.
pub fn check_distance_claims(gadget: &NaeGadget, inst: &NaeInstance) -> ClaimReport {
    let d = inst.d() as i64;
    let matrix = gadget.graph.all_pairs_distances();
    let mut checks = Vec::new();

    let mut push = |claim: &'static str, context: String, expected: Expected, actual: Dist| {
        let ok = match (&expected, actual) {
            (Expected::Exactly(e), Dist::Finite(a)) => a == *e,
            (Expected::AtLeast(e), Dist::Finite(a)) => a >= *e,
            (Expected::AtLeast(_), Dist::Unreachable) => true,
            (Expected::Exactly(_), Dist::Unreachable) => false,
        };
        checks.push(ClaimCheck {
            claim,
            context,
            expected,
            actual,
            ok,
        });
    };

    let m = inst.clauses().len();
    let sides: Vec<(usize, usize)> = (0..m)
        .flat_map(|j| [(j, SIDE_PLAIN), (j, SIDE_BAR)])
        .collect();

    // Separation between distinct clause components.
    for (idx, &(j1, s1)) in sides.iter().enumerate() {
        for &(j2, s2) in &sides[idx + 1..] {
            let actual = matrix.between_sets(
                gadget.clause_component(j1, s1),
                gadget.clause_component(j2, s2),
            );
            push(
                "sep/components",
                format!("H({j1},{s1}) to H({j2},{s2})"),
                Expected::Exactly(4 * d as usize),
                actual,
            );
        }
    }
    // Separation between distinct variable cycles.
    let vars = inst.var_count();
    for x in 0..vars {
        for y in (x + 1)..vars {
            let actual = matrix.between_sets(&gadget.variable_cycle(x), &gadget.variable_cycle(y));
            push(
                "sep/cycles",
                format!("G_x{x} to G_x{y}"),
                Expected::AtLeast(6 * d as usize),
                actual,
            );
        }
    }
    // Cycle-to-component separation, member and non-member variables.
    for &(j, s) in &sides {
        let members: Vec<usize> = inst.clauses()[j].iter().map(|&(x, _)| x).collect();
        for x in 0..vars {
            let actual =
                matrix.between_sets(&gadget.variable_cycle(x), gadget.clause_component(j, s));
            if members.contains(&x) {
                push(
                    "sep/member-cycle",
                    format!("G_x{x} to H({j},{s})"),
                    Expected::AtLeast(3 * d as usize),
                    actual,
                );
            } else {
                push(
                    "sep/far-cycle",
                    format!("G_x{x} to H({j},{s})"),
                    Expected::AtLeast(8 * d as usize),
                    actual,
                );
            }
        }
    }

    // Exact piecewise distances from v_i^t. Formula values are positive for
    // every i in 0..=d+1 and a in 1..=d.
    let exact = |value: i64| -> Expected {
        assert!(value > 0);
        Expected::Exactly(value as usize)
    };
    for (j, clause) in inst.clauses().iter().enumerate() {
        for (slot, &(t, a_us)) in clause.iter().enumerate() {
            let a = a_us as i64;
            for i_us in 0..=(inst.d() + 1) {
                let i = i_us as i64;
                let src = gadget.v_at(t, i_us);
                let ctx = |target: &str| format!("clause {j}, var x{t}, i={i_us}, {target}");

                let expected = if i <= a {
                    5 * d + i - a
                } else {
                    5 * d + 1 + a - i
                };
                push(
                    "dist/head",
                    ctx("head"),
                    exact(expected),
                    matrix.get(src, gadget.head[j][SIDE_PLAIN]),
                );
                let expected = if i < a {
                    5 * d + 1 + i - a
                } else {
                    5 * d + a - i
                };
                push(
                    "dist/core",
                    ctx("core v"),
                    exact(expected),
                    matrix.get(src, gadget.core_v[j][SIDE_PLAIN]),
                );
                let expected = if i <= a - 2 {
                    5 * d + 4 + i - a
                } else {
                    5 * d + 1 + a - i
                };
                push(
                    "dist/claw",
                    ctx("claw leaf"),
                    exact(expected),
                    matrix.get(src, gadget.conn_t1[j][slot][SIDE_PLAIN]),
                );

                let expected = if i <= a {
                    5 * d + 1 + i - a
                } else {
                    5 * d + 1 + a - i
                };
                push(
                    "dist/mirror-head",
                    ctx("mirror head"),
                    exact(expected),
                    matrix.get(src, gadget.head[j][SIDE_BAR]),
                );
                let expected = if i <= a + 1 {
                    5 * d + i - a
                } else {
                    5 * d + 2 + a - i
                };
                push(
                    "dist/mirror-core",
                    ctx("mirror core v"),
                    exact(expected),
                    matrix.get(src, gadget.core_v[j][SIDE_BAR]),
                );
                let expected = if i <= a + 2 {
                    5 * d + 1 + i - a
                } else {
                    5 * d + 5 + a - i
                };
                push(
                    "dist/mirror-claw",
                    ctx("mirror claw leaf"),
                    exact(expected),
                    matrix.get(src, gadget.conn_t1[j][slot][SIDE_BAR]),
                );
            }
        }
    }
    ClaimReport { checks }
}

/// One resolving candidate from the sweep: the free picks, the assignment
/// they induce, and whether that assignment satisfies the instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepHit {
    /// Chosen cycle vertex per variable.
    pub picks: Vec<usize>,
    /// Index `i_x` per variable (the subscript of the chosen vertex).
    pub assignment: Vec<usize>,
    pub satisfies: bool,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub total_choices: u128,
    pub resolving: Vec<SweepHit>,
}

/// Enumerates every candidate set of size `k`: the forced picks plus one
/// vertex from `{v_i^x, w_i^x}` per variable, and records which choices
/// resolve the graph. Pairs already resolved by the forced picks are
/// precomputed once; a choice is resolving iff it separates the remainder.
pub fn reverse_candidate_sweep(
    gadget: &NaeGadget,
    inst: &NaeInstance,
    cap: u128,
) -> Result<SweepReport, NaeError> {
    let d = inst.d();
    let vars = inst.var_count();
    let options = 2 * d;
    let total: u128 = (options as u128)
        .checked_pow(vars as u32)
        .ok_or(NaeError::CapExceeded {
            needed: u128::MAX,
            cap,
        })?;
    if total > cap {
        return Err(NaeError::CapExceeded { needed: total, cap });
    }

    let matrix = gadget.graph.all_pairs_distances();
    let forced = gadget.forced_picks();
    let n = gadget.graph.n();

    // Bucket vertices by their distance vector to the forced picks; only
    // pairs inside one bucket still need a free pick to separate them.
    let mut buckets: HashMap<Vec<Dist>, Vec<usize>> = HashMap::new();
    for vtx in 0..n {
        let key: Vec<Dist> = forced.iter().map(|&s| matrix.get(s, vtx)).collect();
        buckets.entry(key).or_default().push(vtx);
    }
    let mut open_pairs: Vec<(usize, usize)> = Vec::new();
    for bucket in buckets.values() {
        for (idx, &u) in bucket.iter().enumerate() {
            for &v in &bucket[idx + 1..] {
                open_pairs.push((u.min(v), u.max(v)));
            }
        }
    }
    open_pairs.sort_unstable();

    let mut resolving = Vec::new();
    let mut digits = vec![0usize; vars];
    loop {
        let picks: Vec<usize> = digits
            .iter()
            .enumerate()
            .map(|(x, &digit)| {
                if digit < d {
                    gadget.v[x][digit]
                } else {
                    gadget.w[x][digit - d]
                }
            })
            .collect();
        let resolved = open_pairs
            .iter()
            .all(|&(u, v)| picks.iter().any(|&s| matrix.get(s, u) != matrix.get(s, v)));
        if resolved {
            let assignment: Vec<usize> = digits
                .iter()
                .map(|&digit| if digit < d { digit + 1 } else { digit - d + 1 })
                .collect();
            let satisfies = inst.is_satisfied_by(&assignment);
            resolving.push(SweepHit {
                picks,
                assignment,
                satisfies,
            });
        }
        // Advance the mixed-radix counter.
        let mut pos = vars;
        loop {
            if pos == 0 {
                return Ok(SweepReport {
                    total_choices: total,
                    resolving,
                });
            }
            pos -= 1;
            if digits[pos] + 1 < options {
                digits[pos] += 1;
                for later in digits.iter_mut().skip(pos + 1) {
                    *later = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance(d: usize, vars: usize, clauses: Vec<[(usize, usize); 3]>) -> NaeInstance {
        NaeInstance::new(d, vars, clauses).unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let inst = instance(2, 3, vec![]);
        assert_eq!(
            nae_brute_force(&inst, DEFAULT_NAE_CAP).unwrap(),
            Some(vec![1, 1, 1])
        );

        // d = 1 forces every inequality true: unsatisfiable.
        let inst = instance(1, 3, vec![[(0, 1), (1, 1), (2, 1)]]);
        assert_eq!(nae_brute_force(&inst, DEFAULT_NAE_CAP).unwrap(), None);

        // Enumerating the 8 assignments by hand gives (1,1,2) first.
        let inst = instance(2, 3, vec![[(0, 1), (1, 1), (2, 1)]]);
        assert_eq!(
            nae_brute_force(&inst, DEFAULT_NAE_CAP).unwrap(),
            Some(vec![1, 1, 2])
        );
    }

    #[test]
    fn instance_validation() {
        assert!(NaeInstance::new(2, 3, vec![[(0, 1), (0, 2), (2, 1)]]).is_err());
        assert!(NaeInstance::new(2, 2, vec![[(0, 1), (1, 1), (2, 1)]]).is_err());
        assert!(NaeInstance::new(2, 3, vec![[(0, 1), (1, 3), (2, 1)]]).is_err());
        assert!(NaeInstance::new(0, 0, vec![]).is_err());
    }

    /// Piece-sum oracle for the gadget vertex count.
    fn expected_vertex_count(d: usize, vars: usize, clauses: usize) -> usize {
        vars * (2 * d + 2) + clauses * (54 * d + 15) + 3
    }

    /// Piece-sum oracle for the gadget edge count: cycles, two clause
    /// components, three connection-path groups per clause, the per-clause
    /// central paths (bound-independent, so members contribute 16d + 5
    /// each), and the two spine edges of the central path.
    fn expected_edge_count(d: usize, vars: usize, clauses: usize) -> usize {
        vars * (2 * d + 2) + clauses * ((2 * d + 6) + 3 * (16 * d + 5) + (4 * d + 6)) + 2
    }

    #[test]
    fn gadget_degrees_match_construction() {
        let inst = instance(3, 3, vec![[(0, 2), (1, 1), (2, 3)]]);
        let gadget = build_nae_gadget(&inst);
        let g = &gadget.graph;
        assert_eq!(g.edge_count(), expected_edge_count(3, 3, 1));
        for x in 0..3 {
            // Anchors carry the cycle plus one path endpoint per side of
            // every clause containing the variable.
            assert_eq!(g.degree(gadget.u1[x]), 2 + 2);
            assert_eq!(g.degree(gadget.u2[x]), 2 + 2);
        }
        for side in [SIDE_PLAIN, SIDE_BAR] {
            // Core center: head, two pendant leaves, three member paths,
            // one central path.
            assert_eq!(g.degree(gadget.clause_core_v(0, side)), 7);
            assert_eq!(g.degree(gadget.clause_head(0, side)), 2);
            assert_eq!(g.degree(gadget.clause_b(0, side)), 4);
        }
        let (t1, p, t2) = gadget.central_path();
        assert_eq!(g.degree(p), 2 + 2);
        assert_eq!(g.degree(t1), 1);
        assert_eq!(g.degree(t2), 1);
    }

    #[test]
    fn gadget_shape_examples() {
        let inst = instance(2, 3, vec![[(0, 1), (1, 2), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        assert_eq!(gadget.k, 14); // |X| + 10|C| + 1

        // Each variable cycle has 2d + 2 = 6 vertices.
        assert_eq!(gadget.variable_cycle(0).len(), 6);

        // Frozen regression constant for (d=2, |X|=3, |C|=1), cross-checked
        // against the piece-sum oracle.
        assert_eq!(expected_vertex_count(2, 3, 1), 144);
        assert_eq!(gadget.graph.n(), 144);
        assert!(gadget.graph.is_connected());
    }

    #[test]
    fn gadget_shape_across_parameters() {
        for (d, vars, clauses) in [(1, 3, 1), (2, 4, 2), (3, 3, 1), (4, 3, 2)] {
            let cls: Vec<[(usize, usize); 3]> = (0..clauses)
                .map(|j| {
                    let mut members = [j % vars, (j + 1) % vars, (j + 2) % vars];
                    members.sort_unstable();
                    [(members[0], 1 + j % d), (members[1], 1), (members[2], d)]
                })
                .collect();
            let inst = instance(d, vars, cls);
            let gadget = build_nae_gadget(&inst);
            assert_eq!(
                gadget.graph.n(),
                expected_vertex_count(d, vars, clauses),
                "d={d} vars={vars} clauses={clauses}"
            );
            assert!(gadget.graph.is_connected());
        }
    }

    #[test]
    fn builder_is_deterministic() {
        let inst = instance(3, 3, vec![[(0, 2), (1, 1), (2, 3)]]);
        let a = build_nae_gadget(&inst);
        let b = build_nae_gadget(&inst);
        assert_eq!(a.graph, b.graph);
        assert_eq!(
            crate::io::write_graph(&a.graph),
            crate::io::write_graph(&b.graph)
        );
        assert_eq!(a.graph.labels(), b.graph.labels());
    }

    #[test]
    fn every_vertex_is_labeled_injectively() {
        let inst = instance(2, 3, vec![[(0, 1), (1, 2), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        assert_eq!(gadget.graph.labels().len(), gadget.graph.n());
        let mut roles: Vec<&String> = gadget.graph.labels().values().collect();
        roles.sort();
        roles.dedup();
        assert_eq!(roles.len(), gadget.graph.n());
    }

    #[test]
    fn fvs_witness_examples() {
        let inst = instance(2, 3, vec![[(0, 1), (1, 2), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        let witness = fvs_witness(&gadget);
        assert_eq!(witness.len(), 7); // 2|X| + 1
        let (rest, _) = gadget
            .graph
            .remove_vertices(&witness.iter().copied().collect())
            .unwrap();
        assert!(rest.is_acyclic());
    }

    #[test]
    fn distance_claims_hold_on_small_instances() {
        let inst = instance(2, 3, vec![[(0, 1), (1, 2), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        let report = check_distance_claims(&gadget, &inst);
        assert!(report.all_ok(), "mismatches: {:#?}", report.mismatches());

        // Spot values from the piecewise formulas at d = 3, a_t = 2.
        let inst = instance(3, 3, vec![[(0, 2), (1, 1), (2, 3)]]);
        let gadget = build_nae_gadget(&inst);
        let m = gadget.graph.all_pairs_distances();
        assert_eq!(
            m.get(gadget.v_at(0, 1), gadget.clause_head(0, SIDE_PLAIN)),
            Dist::Finite(14) // i <= a: 5d + i - a
        );
        assert_eq!(
            m.get(gadget.v_at(0, 3), gadget.clause_head(0, SIDE_PLAIN)),
            Dist::Finite(15) // i > a: 5d + 1 + a - i
        );
        let report = check_distance_claims(&gadget, &inst);
        assert!(report.all_ok(), "mismatches: {:#?}", report.mismatches());
    }

    #[test]
    fn core_to_core_distance_is_4d() {
        let inst = instance(
            2,
            3,
            vec![[(0, 1), (1, 1), (2, 2)], [(0, 2), (1, 2), (2, 1)]],
        );
        let gadget = build_nae_gadget(&inst);
        let m = gadget.graph.all_pairs_distances();
        let dist = m.between_sets(
            gadget.clause_component(0, SIDE_PLAIN),
            gadget.clause_component(0, SIDE_BAR),
        );
        assert_eq!(dist, Dist::Finite(8));
    }

    #[test]
    fn constructive_direction_verifies() {
        let inst = instance(2, 3, vec![[(0, 1), (1, 2), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        let phi = nae_brute_force(&inst, DEFAULT_NAE_CAP).unwrap().unwrap();
        let cert = resolving_set_from_assignment(&gadget, &inst, &phi).unwrap();
        assert!(cert.verified, "witness pair: {:?}", cert.witness_pair);
        assert_eq!(cert.vertices.len(), gadget.k);

        // Unsatisfying assignments are rejected up front.
        let all_one = vec![1, 1, 1]; // all inequalities true in clause 0
        assert!(matches!(
            resolving_set_from_assignment(&gadget, &inst, &all_one),
            Err(NaeError::UnsatisfyingAssignment { index: 0 })
        ));
    }

    #[test]
    fn reverse_sweep_matches_satisfiability() {
        // Unsatisfiable with d = 1: no choice can resolve.
        let inst = instance(1, 3, vec![[(0, 1), (1, 1), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        let report = reverse_candidate_sweep(&gadget, &inst, DEFAULT_NAE_CAP).unwrap();
        assert_eq!(report.total_choices, 8);
        assert!(report.resolving.is_empty());

        // Satisfiable: at least one resolving choice, and every resolving
        // choice induces a satisfying assignment.
        let inst = instance(2, 3, vec![[(0, 1), (1, 1), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        let report = reverse_candidate_sweep(&gadget, &inst, DEFAULT_NAE_CAP).unwrap();
        assert!(!report.resolving.is_empty());
        assert!(report.resolving.iter().all(|hit| hit.satisfies));
    }

    #[test]
    fn sweep_agrees_with_direct_verification() {
        let inst = instance(1, 3, vec![[(0, 1), (1, 1), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        let forced = gadget.forced_picks();
        let report = reverse_candidate_sweep(&gadget, &inst, DEFAULT_NAE_CAP).unwrap();
        let hits: std::collections::BTreeSet<Vec<usize>> =
            report.resolving.iter().map(|h| h.picks.clone()).collect();
        // Re-check each choice with the definitional verifier.
        for digits in 0..8usize {
            let picks: Vec<usize> = (0..3)
                .map(|x| {
                    let digit = (digits >> x) & 1;
                    if digit == 0 {
                        gadget.v[x][0]
                    } else {
                        gadget.w[x][0]
                    }
                })
                .collect();
            let mut s = forced.clone();
            s.extend_from_slice(&picks);
            let direct = is_resolving_set(&gadget.graph, &s).verified;
            assert_eq!(direct, hits.contains(&picks));
        }
    }

    #[test]
    fn swapping_a_forced_twin_preserves_resolution() {
        // Twin leaves are interchangeable; verify one swapped variant.
        let inst = instance(2, 3, vec![[(0, 1), (1, 2), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        let phi = nae_brute_force(&inst, DEFAULT_NAE_CAP).unwrap().unwrap();
        let cert = resolving_set_from_assignment(&gadget, &inst, &phi).unwrap();
        let mut swapped: Vec<usize> = cert
            .vertices
            .iter()
            .map(|&v| {
                if v == gadget.conn_t1[0][0][SIDE_PLAIN] {
                    gadget.conn_t2[0][0][SIDE_PLAIN]
                } else {
                    v
                }
            })
            .collect();
        swapped.sort_unstable();
        assert!(is_resolving_set(&gadget.graph, &swapped).verified);
    }

    #[test]
    fn forced_twin_pairs_exist_throughout_the_gadget() {
        let inst = instance(2, 3, vec![[(0, 1), (1, 2), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        let pairs = crate::resolve::mandatory_pair_constraints(&gadget.graph);
        let has = |a: usize, b: usize| pairs.contains(&(a.min(b), a.max(b)));
        let (t1, _, t2) = gadget.central_path();
        assert!(has(t1, t2));
        for side in [SIDE_PLAIN, SIDE_BAR] {
            let [p1, p2] = gadget.clause_p(0, side);
            assert!(has(p1, p2));
            let [l1, l2] = gadget.central_side_leaves(0, side);
            assert!(has(l1, l2));
            for slot in 0..3 {
                assert!(has(
                    gadget.claw_leaf1(0, slot, side),
                    gadget.claw_leaf2(0, slot, side)
                ));
            }
        }
    }

    #[test]
    fn central_attachment_distances_match_construction() {
        let inst = instance(2, 3, vec![[(0, 1), (1, 2), (2, 1)]]);
        let gadget = build_nae_gadget(&inst);
        let m = gadget.graph.all_pairs_distances();
        let (t1, p, _) = gadget.central_path();
        for side in [SIDE_PLAIN, SIDE_BAR] {
            // The path neighbor of p sits two steps from t1; the claw
            // attachment sits next to the clause core.
            assert_eq!(m.get(t1, gadget.central_side_w(0, side)), Dist::Finite(2));
            assert_eq!(m.get(p, gadget.clause_core_v(0, side)), Dist::Finite(2 * 2));
            assert!(gadget.graph.has_edge(
                gadget.clause_core_v(0, side),
                gadget.claw_attach(0, 0, side)
            ));
            // b^l hangs d steps below the clause head.
            assert_eq!(
                m.get(gadget.clause_head(0, side), gadget.clause_b(0, side)),
                Dist::Finite(2)
            );
        }
    }

    #[test]
    fn unused_variable_leaves_an_unresolvable_cycle() {
        // A variable outside every clause yields an isolated cycle; the one
        // vertex the candidate set spends there cannot resolve a cycle, so
        // the constructive direction is limited to covered instances.
        let inst = instance(2, 4, vec![[(0, 1), (1, 2), (2, 1)]]);
        assert!(!inst.every_variable_occurs());
        let gadget = build_nae_gadget(&inst);
        let phi = nae_brute_force(&inst, DEFAULT_NAE_CAP).unwrap().unwrap();
        let cert = resolving_set_from_assignment(&gadget, &inst, &phi).unwrap();
        assert!(!cert.verified);
        let (u, v) = cert.witness_pair.unwrap();
        let cycle = gadget.variable_cycle(3);
        assert!(cycle.contains(&u) && cycle.contains(&v));
        // The distance claims are indifferent to the padding.
        assert!(check_distance_claims(&gadget, &inst).all_ok());
    }

    #[test]
    fn no_clause_instance_builds_central_path_only() {
        let inst = instance(2, 0, vec![]);
        let gadget = build_nae_gadget(&inst);
        assert_eq!(gadget.graph.n(), 3);
        assert_eq!(gadget.k, 1);
        let cert = resolving_set_from_assignment(&gadget, &inst, &[]).unwrap();
        assert!(cert.verified);
    }
}
