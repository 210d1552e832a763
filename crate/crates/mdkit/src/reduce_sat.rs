//! SAT-encoding instance generators for metric dimension.
//!
//! A CNF formula on `n` variables and `m` clauses becomes a graph with one
//! 6-cycle per variable, a 3-vertex hub path, one vertex pair per clause, and
//! `alpha = ceil(n * log2 3)` indexing paths whose hub vertices form a clique;
//! the target is `k = n + alpha + 1`. The clique variant additionally turns
//! the clause pairs into a clique, leaving every checked distance unchanged.
//! `check_table1` machine-verifies the distance table that the correctness
//! argument rests on; `vc_witness` and `clique_modulator_witness` certify the
//! structural parameters.

use crate::graph::{Dist, Graph};
use crate::resolve::{is_resolving_set, ResolvingCertificate};
use thiserror::Error;

pub const DEFAULT_SAT_CAP: u128 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("clause {index} is tautological (contains a literal and its negation)")]
    Tautology { index: usize },
    #[error("clause {index} is empty")]
    EmptyClause { index: usize },
    #[error("literal {lit} is out of range for {vars} variables")]
    LiteralOutOfRange { lit: i32, vars: usize },
    #[error("clause count mismatch: header declares {declared}, found {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("brute force needs {needed} assignments, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("variable count {0} too large for gadget construction")]
    VarCountTooLarge(usize),
    #[error("assignment does not satisfy the formula (clause {index} fails)")]
    UnsatisfyingAssignment { index: usize },
    #[error("witness self-check failed: {0}")]
    WitnessCheckFailed(String),
    #[error("operation needs the {0} variant")]
    WrongVariant(&'static str),
}

/// CNF formula in canonical form: clauses sorted and deduplicated, literals
/// sorted by variable with the positive polarity first, no tautological or
/// empty clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    var_count: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(var_count: usize, clauses: Vec<Vec<i32>>) -> Result<CnfFormula, CnfError> {
        let mut canon: Vec<Vec<i32>> = Vec::with_capacity(clauses.len());
        for (index, clause) in clauses.into_iter().enumerate() {
            let mut lits = clause;
            for &lit in &lits {
                if lit == 0 || lit.unsigned_abs() as usize > var_count {
                    return Err(CnfError::LiteralOutOfRange {
                        lit,
                        vars: var_count,
                    });
                }
            }
            lits.sort_by_key(|l| (l.abs(), *l < 0));
            lits.dedup();
            if lits.is_empty() {
                return Err(CnfError::EmptyClause { index });
            }
            if lits.windows(2).any(|w| w[0] == -w[1]) {
                return Err(CnfError::Tautology { index });
            }
            canon.push(lits);
        }
        canon.sort();
        canon.dedup();
        Ok(CnfFormula {
            var_count,
            clauses: canon,
        })
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.failing_clause(assignment).is_none()
    }

    fn failing_clause(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|clause| {
            !clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                (lit > 0) == value
            })
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.var_count, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF text; clauses are zero-terminated and may span lines.
pub fn parse_dimacs_cnf(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut clause_open_line = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::Syntax {
                    line: line_no,
                    message: "duplicate problem line".into(),
                });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(CnfError::Syntax {
                    line: line_no,
                    message: format!("expected `p cnf <vars> <clauses>`, got {line:?}"),
                });
            }
            let vars = parts[2].parse().map_err(|_| CnfError::Syntax {
                line: line_no,
                message: format!("bad variable count {:?}", parts[2]),
            })?;
            let m = parts[3].parse().map_err(|_| CnfError::Syntax {
                line: line_no,
                message: format!("bad clause count {:?}", parts[3]),
            })?;
            header = Some((vars, m));
            continue;
        }
        if header.is_none() {
            return Err(CnfError::Syntax {
                line: line_no,
                message: "clause before problem line".into(),
            });
        }
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| CnfError::Syntax {
                line: line_no,
                message: format!("bad literal {tok:?}"),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(CnfError::EmptyClause {
                        index: clauses.len(),
                    });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if current.is_empty() {
                    clause_open_line = line_no;
                }
                current.push(lit);
            }
        }
    }
    let (vars, declared) = header.ok_or(CnfError::Syntax {
        line: 0,
        message: "missing problem line".into(),
    })?;
    if !current.is_empty() {
        return Err(CnfError::Syntax {
            line: clause_open_line,
            message: "unterminated clause (missing 0)".into(),
        });
    }
    if clauses.len() != declared {
        return Err(CnfError::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    CnfFormula::new(vars, clauses)
}

/// Lexicographically smallest satisfying assignment (false < true), or
/// `None` when unsatisfiable.
pub fn sat_brute_force(f: &CnfFormula, cap: u128) -> Result<Option<Vec<bool>>, CnfError> {
    let n = f.var_count();
    let needed = 1u128.checked_shl(n as u32).ok_or(CnfError::CapExceeded {
        needed: u128::MAX,
        cap,
    })?;
    if needed > cap {
        return Err(CnfError::CapExceeded { needed, cap });
    }
    for word in 0..needed {
        let assignment: Vec<bool> = (0..n).map(|i| (word >> (n - 1 - i)) & 1 == 1).collect();
        if f.is_satisfied_by(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

/// `alpha(n)`: the smallest integer `a` with `2^a >= 3^n`, computed in exact
/// integer arithmetic.
pub fn alpha_for(var_count: usize) -> Result<usize, CnfError> {
    let mut p3: u128 = 1;
    for _ in 0..var_count {
        p3 = p3
            .checked_mul(3)
            .ok_or(CnfError::VarCountTooLarge(var_count))?;
    }
    let mut a = 0usize;
    let mut p2: u128 = 1;
    while p2 < p3 {
        p2 = p2
            .checked_mul(2)
            .ok_or(CnfError::VarCountTooLarge(var_count))?;
        a += 1;
    }
    Ok(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetVariant {
    Vc,
    Clique,
}

impl GadgetVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            GadgetVariant::Vc => "vc",
            GadgetVariant::Clique => "clique",
        }
    }
}

/// Generated SAT gadget with typed handles into the labeled graph.
#[derive(Debug, Clone)]
pub struct SatGadget {
    pub graph: Graph,
    pub k: usize,
    pub alpha: usize,
    pub variant: GadgetVariant,
    pub t: Vec<usize>,
    pub f: Vec<usize>,
    pub a1: Vec<usize>,
    pub a2: Vec<usize>,
    pub b1: Vec<usize>,
    pub b2: Vec<usize>,
    pub g: usize,
    pub g1: usize,
    pub g2: usize,
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    pub z: Vec<usize>,
    pub z1: Vec<usize>,
    pub z2: Vec<usize>,
}

impl SatGadget {
    /// The ordered base set `(g^1, z_1^1, ..., z_alpha^1)` whose distance
    /// vectors the table check inspects.
    pub fn r1(&self) -> Vec<usize> {
        let mut r = vec![self.g1];
        r.extend_from_slice(&self.z1);
        r
    }

    /// Inner cycle vertices of variable `i`.
    pub fn inner(&self, i: usize) -> [usize; 4] {
        [self.a1[i], self.a2[i], self.b1[i], self.b2[i]]
    }
}

/// `bin(j)[l]`: bit `l` (1-based, from the right) of the 1-based clause
/// index `j`.
pub fn bin_bit(j: usize, l: usize) -> usize {
    (j >> (l - 1)) & 1
}

pub fn build_vc_gadget(f: &CnfFormula) -> Result<SatGadget, CnfError> {
    build_gadget(f, GadgetVariant::Vc)
}

/// Vertex-cover gadget plus a clique on the clause pairs.
pub fn build_clique_gadget(f: &CnfFormula) -> Result<SatGadget, CnfError> {
    build_gadget(f, GadgetVariant::Clique)
}

fn build_gadget(formula: &CnfFormula, variant: GadgetVariant) -> Result<SatGadget, CnfError> {
    let n = formula.var_count();
    let m = formula.clause_count();
    let alpha = alpha_for(n)?;
    let total = 6 * n + 3 + 2 * m + 3 * alpha;

    let mut next = 0usize;
    let mut fresh = || {
        let v = next;
        next += 1;
        v
    };
    let (mut t, mut f, mut a1, mut a2, mut b1, mut b2) = (
        Vec::new(),
        Vec::new(),
        Vec::new(),
        Vec::new(),
        Vec::new(),
        Vec::new(),
    );
    for _ in 0..n {
        t.push(fresh());
        a1.push(fresh());
        b1.push(fresh());
        f.push(fresh());
        b2.push(fresh());
        a2.push(fresh());
    }
    let g1 = fresh();
    let g = fresh();
    let g2 = fresh();
    let (mut c1, mut c2) = (Vec::new(), Vec::new());
    for _ in 0..m {
        c1.push(fresh());
        c2.push(fresh());
    }
    let (mut z1, mut z, mut z2) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..alpha {
        z1.push(fresh());
        z.push(fresh());
        z2.push(fresh());
    }
    debug_assert_eq!(next, total);

    let mut edges = Vec::new();
    for i in 0..n {
        edges.extend([
            (t[i], a1[i]),
            (a1[i], b1[i]),
            (b1[i], f[i]),
            (f[i], b2[i]),
            (b2[i], a2[i]),
            (a2[i], t[i]),
        ]);
        edges.extend([(g, t[i]), (g, f[i])]);
    }
    edges.extend([(g1, g), (g, g2)]);
    for (jj, clause) in formula.clauses().iter().enumerate() {
        for i in 0..n {
            edges.push((c2[jj], t[i]));
            edges.push((c2[jj], f[i]));
            let var = (i + 1) as i32;
            // The literal vertex is skipped exactly when that polarity
            // satisfies the clause.
            if !clause.contains(&var) {
                edges.push((c1[jj], t[i]));
            }
            if !clause.contains(&-var) {
                edges.push((c1[jj], f[i]));
            }
        }
        let j = jj + 1;
        for l in 1..=alpha {
            if bin_bit(j, l) == 1 {
                edges.push((z[l - 1], c1[jj]));
                edges.push((z[l - 1], c2[jj]));
            }
        }
    }
    for l in 0..alpha {
        edges.extend([(z1[l], z[l]), (z[l], z2[l])]);
    }
    // Clique on the hub: z_1, ..., z_alpha, g.
    let mut hub = z.clone();
    hub.push(g);
    for (i, &u) in hub.iter().enumerate() {
        for &v in &hub[i + 1..] {
            edges.push((u, v));
        }
    }
    if variant == GadgetVariant::Clique {
        let mut kv: Vec<usize> = Vec::with_capacity(2 * m);
        for jj in 0..m {
            kv.push(c1[jj]);
            kv.push(c2[jj]);
        }
        for (i, &u) in kv.iter().enumerate() {
            for &v in &kv[i + 1..] {
                edges.push((u, v));
            }
        }
    }

    let mut graph = Graph::from_edges(total, &edges).expect("construction is simple by design");
    for i in 0..n {
        let p = i + 1;
        graph.set_label(t[i], format!("t[{p}]")).unwrap();
        graph.set_label(f[i], format!("f[{p}]")).unwrap();
        graph.set_label(a1[i], format!("a1[{p}]")).unwrap();
        graph.set_label(a2[i], format!("a2[{p}]")).unwrap();
        graph.set_label(b1[i], format!("b1[{p}]")).unwrap();
        graph.set_label(b2[i], format!("b2[{p}]")).unwrap();
    }
    graph.set_label(g1, "g1").unwrap();
    graph.set_label(g, "g").unwrap();
    graph.set_label(g2, "g2").unwrap();
    for jj in 0..m {
        let j = jj + 1;
        graph.set_label(c1[jj], format!("c1[{j}]")).unwrap();
        graph.set_label(c2[jj], format!("c2[{j}]")).unwrap();
    }
    for l in 0..alpha {
        let p = l + 1;
        graph.set_label(z[l], format!("z[{p}]")).unwrap();
        graph.set_label(z1[l], format!("z1[{p}]")).unwrap();
        graph.set_label(z2[l], format!("z2[{p}]")).unwrap();
    }

    Ok(SatGadget {
        graph,
        k: n + alpha + 1,
        alpha,
        variant,
        t,
        f,
        a1,
        a2,
        b1,
        b2,
        g,
        g1,
        g2,
        c1,
        c2,
        z,
        z1,
        z2,
    })
}

/// The constructed resolving set for a satisfying assignment: the base set
/// plus `a_i^1` for true variables and `b_i^1` for false ones. Errors when
/// the assignment does not satisfy the formula.
pub fn resolving_set_from_sat_assignment(
    art: &SatGadget,
    f: &CnfFormula,
    assignment: &[bool],
) -> Result<ResolvingCertificate, CnfError> {
    if let Some(index) = f.failing_clause(assignment) {
        return Err(CnfError::UnsatisfyingAssignment { index });
    }
    let mut r = art.r1();
    for (i, &value) in assignment.iter().enumerate() {
        r.push(if value { art.a1[i] } else { art.b1[i] });
    }
    assert_eq!(r.len(), art.k);
    Ok(is_resolving_set(&art.graph, &r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Entry {
    pub row: String,
    pub vertex: usize,
    pub expected: Vec<usize>,
    pub actual: Vec<Dist>,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct Table1Report {
    pub entries: Vec<Table1Entry>,
}

impl Table1Report {
    pub fn mismatches(&self) -> Vec<&Table1Entry> {
        self.entries.iter().filter(|e| !e.ok).collect()
    }

    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }
}

/// Checks the distance vector of the base set against every tabulated
/// vertex class; mismatches become report entries, never panics.
pub fn check_table1(art: &SatGadget) -> Table1Report {
    let alpha = art.alpha;
    let r1 = art.r1();
    let rows: Vec<Vec<Dist>> = r1.iter().map(|&v| art.graph.bfs_distances(v)).collect();
    let vector_of = |v: usize| -> Vec<Dist> { rows.iter().map(|r| r[v]).collect() };
    let uniform = |first: usize, rest: usize| -> Vec<usize> {
        let mut e = vec![rest; alpha + 1];
        e[0] = first;
        e
    };

    let mut entries = Vec::new();
    let mut push = |row: String, vertex: usize, expected: Vec<usize>| {
        let actual = vector_of(vertex);
        let ok = actual.len() == expected.len()
            && actual
                .iter()
                .zip(&expected)
                .all(|(a, e)| *a == Dist::Finite(*e));
        entries.push(Table1Entry {
            row,
            vertex,
            expected,
            actual,
            ok,
        });
    };

    push("g2".into(), art.g2, uniform(2, 3));
    push("g".into(), art.g, uniform(1, 2));
    for i in 0..art.t.len() {
        push(format!("T/t[{}]", i + 1), art.t[i], uniform(2, 3));
        push(format!("T/f[{}]", i + 1), art.f[i], uniform(2, 3));
        for v in art.inner(i) {
            push(format!("I[{}]", i + 1), v, uniform(3, 4));
        }
    }
    for jj in 0..art.c1.len() {
        let j = jj + 1;
        let mut expected = vec![3usize];
        for l in 1..=alpha {
            expected.push(3 - bin_bit(j, l));
        }
        push(format!("C[{j}]/c1"), art.c1[jj], expected.clone());
        push(format!("C[{j}]/c2"), art.c2[jj], expected);
    }
    for l in 0..alpha {
        let mut expected = vec![2usize; alpha + 1];
        expected[l + 1] = 1;
        push(format!("z[{}]", l + 1), art.z[l], expected);
        let mut expected = vec![3usize; alpha + 1];
        expected[l + 1] = 2;
        push(format!("z2[{}]", l + 1), art.z2[l], expected);
    }
    Table1Report { entries }
}

/// Vertex cover of size `4n + alpha + 1`: the hub, both cycle contact rows,
/// the `a` vertices, and the indexing hubs. Verified edge by edge.
pub fn vc_witness(art: &SatGadget) -> Result<Vec<usize>, CnfError> {
    if art.variant != GadgetVariant::Vc {
        return Err(CnfError::WrongVariant("vc"));
    }
    let mut cover = vec![art.g];
    cover.extend_from_slice(&art.t);
    cover.extend_from_slice(&art.f);
    cover.extend_from_slice(&art.a1);
    cover.extend_from_slice(&art.a2);
    cover.extend_from_slice(&art.z);
    cover.sort_unstable();
    let n = art.t.len();
    assert_eq!(cover.len(), 4 * n + art.alpha + 1);
    let in_cover: std::collections::BTreeSet<usize> = cover.iter().copied().collect();
    for (u, v) in art.graph.edges() {
        if !in_cover.contains(&u) && !in_cover.contains(&v) {
            return Err(CnfError::WitnessCheckFailed(format!(
                "edge ({u},{v}) is uncovered"
            )));
        }
    }
    Ok(cover)
}

/// Clique modulator of size `6n + 3*alpha + 3`: everything except the clause
/// pairs; the remainder is verified to be a clique.
pub fn clique_modulator_witness(art: &SatGadget) -> Result<Vec<usize>, CnfError> {
    if art.variant != GadgetVariant::Clique {
        return Err(CnfError::WrongVariant("clique"));
    }
    let keep: std::collections::BTreeSet<usize> =
        art.c1.iter().chain(art.c2.iter()).copied().collect();
    let modulator: Vec<usize> = (0..art.graph.n()).filter(|v| !keep.contains(v)).collect();
    let n = art.t.len();
    assert_eq!(modulator.len(), 6 * n + 3 * art.alpha + 3);
    let kv: Vec<usize> = keep.into_iter().collect();
    for (i, &u) in kv.iter().enumerate() {
        for &v in &kv[i + 1..] {
            if !art.graph.has_edge(u, v) {
                return Err(CnfError::WitnessCheckFailed(format!(
                    "remainder pair ({u},{v}) not adjacent"
                )));
            }
        }
    }
    Ok(modulator)
}
