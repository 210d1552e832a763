//! Bit-exact serialization shared by every module: the graph text format,
//! label-map sidecars, instance files, kernel traces, and result records.
//!
//! Canonical JSON is compact with sorted keys, so semantically equal objects
//! serialize to identical bytes. Vertex ids are 1-based in every external
//! format and 0-based in the API; this module owns the conversion.

use crate::graph::{Graph, GraphError};
use crate::kernel::{KernelTrace, ModulatorMode, RuleId, TraceStep};
use crate::reduce_nae::NaeInstance;
use crate::resolve::{MdResult, MdStatus, ResolvingCertificate};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("edge count mismatch: header declares {declared}, found {found}")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

/// Compact JSON with sorted keys: the canonical byte form used everywhere.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string(&v).expect("value serializes")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphRead {
    pub graph: Graph,
    /// Non-fatal issues (duplicate edges) encountered while parsing.
    pub warnings: Vec<String>,
}

/// Parses the graph text format: optional `c` comment lines, one
/// `p graph <n> <m>` header, then `e <u> <v>` lines with 1-based ids.
pub fn read_graph(text: &str) -> Result<GraphRead, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut warnings = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(FormatError::Syntax {
                    line: line_no,
                    message: "duplicate header line".into(),
                });
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "graph" {
                return Err(FormatError::Syntax {
                    line: line_no,
                    message: format!("expected `p graph <n> <m>`, got {line:?}"),
                });
            }
            let n: usize = parts[1].parse().map_err(|_| FormatError::Syntax {
                line: line_no,
                message: format!("bad vertex count {:?}", parts[1]),
            })?;
            if n > 10_000_000 {
                return Err(FormatError::Syntax {
                    line: line_no,
                    message: format!("vertex count {n} exceeds the format limit of 10000000"),
                });
            }
            let m = parts[2].parse().map_err(|_| FormatError::Syntax {
                line: line_no,
                message: format!("bad edge count {:?}", parts[2]),
            })?;
            header = Some((n, m));
        } else if let Some(rest) = line.strip_prefix('e') {
            let (n, _) = header.ok_or(FormatError::Syntax {
                line: line_no,
                message: "edge before header".into(),
            })?;
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(FormatError::Syntax {
                    line: line_no,
                    message: format!("expected `e <u> <v>`, got {line:?}"),
                });
            }
            let mut ids = [0usize; 2];
            for (slot, part) in ids.iter_mut().zip(&parts) {
                let id: usize = part.parse().map_err(|_| FormatError::Syntax {
                    line: line_no,
                    message: format!("bad vertex id {part:?}"),
                })?;
                if id < 1 || id > n {
                    return Err(FormatError::Syntax {
                        line: line_no,
                        message: format!("vertex id {id} out of range 1..={n}"),
                    });
                }
                *slot = id - 1;
            }
            edges.push((ids[0], ids[1]));
        } else {
            return Err(FormatError::Syntax {
                line: line_no,
                message: format!("unrecognized line {line:?}"),
            });
        }
    }
    let (n, declared) = header.ok_or(FormatError::Syntax {
        line: 0,
        message: "missing `p graph` header".into(),
    })?;
    if edges.len() != declared {
        return Err(FormatError::EdgeCountMismatch {
            declared,
            found: edges.len(),
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for &(u, v) in &edges {
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            warnings.push(format!(
                "duplicate edge ({}, {}) deduplicated",
                key.0 + 1,
                key.1 + 1
            ));
        }
    }
    let graph = Graph::from_edges(n, &edges)?;
    Ok(GraphRead { graph, warnings })
}

/// Canonical graph text: header plus edges sorted with `u < v`,
/// lexicographically, 1-based.
pub fn write_graph(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("p graph {} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// Label sidecar: `{"labels": {"<1-based id>": "<role>"}}`. Roles must be
/// unique.
pub fn write_labels(g: &Graph) -> String {
    let map: BTreeMap<String, &String> = g
        .labels()
        .iter()
        .map(|(&v, l)| ((v + 1).to_string(), l))
        .collect();
    canonical_json(&json!({ "labels": map }))
}

/// Parses a label sidecar into a 0-based id map.
pub fn read_labels(text: &str) -> Result<BTreeMap<usize, String>, FormatError> {
    let v: Value = parse_json(text)?;
    let obj = as_object(&v, "")?;
    reject_unknown(obj, &["labels"], "")?;
    let labels = as_object(get(obj, "labels", "")?, "/labels")?;
    let mut out = BTreeMap::new();
    let mut seen_roles = std::collections::BTreeSet::new();
    for (key, val) in labels {
        let path = format!("/labels/{key}");
        let id: usize = key
            .parse()
            .map_err(|_| schema(&path, "key must be a 1-based vertex id"))?;
        if id < 1 {
            return Err(schema(&path, "vertex ids are 1-based"));
        }
        let role = val
            .as_str()
            .ok_or_else(|| schema(&path, "label must be a string"))?;
        if !seen_roles.insert(role.to_string()) {
            return Err(schema(&path, format!("duplicate role {role:?}")));
        }
        out.insert(id - 1, role.to_string());
    }
    Ok(out)
}

pub fn apply_labels(g: &mut Graph, labels: &BTreeMap<usize, String>) -> Result<(), FormatError> {
    for (&v, role) in labels {
        g.set_label(v, role.clone())?;
    }
    Ok(())
}

/// Instance file: `{"clauses": [[[var, bound] x3], ...], "d": int,
/// "vars": int}` with 0-based variable indices.
pub fn write_nae(inst: &NaeInstance) -> String {
    let clauses: Vec<Vec<[usize; 2]>> = inst
        .clauses()
        .iter()
        .map(|clause| clause.iter().map(|&(x, a)| [x, a]).collect())
        .collect();
    canonical_json(&json!({
        "clauses": clauses,
        "d": inst.d(),
        "vars": inst.var_count(),
    }))
}

pub fn read_nae(text: &str) -> Result<NaeInstance, FormatError> {
    let v: Value = parse_json(text)?;
    let obj = as_object(&v, "")?;
    reject_unknown(obj, &["clauses", "d", "vars"], "")?;
    let d = as_usize(get(obj, "d", "")?, "/d")?;
    let vars = as_usize(get(obj, "vars", "")?, "/vars")?;
    let clauses_v = as_array(get(obj, "clauses", "")?, "/clauses")?;
    let mut clauses = Vec::with_capacity(clauses_v.len());
    for (i, clause_v) in clauses_v.iter().enumerate() {
        let path = format!("/clauses/{i}");
        let lits = as_array(clause_v, &path)?;
        if lits.len() != 3 {
            return Err(schema(
                &path,
                format!("clause must have exactly 3 literals, has {}", lits.len()),
            ));
        }
        let mut clause = [(0usize, 0usize); 3];
        for (jj, lit_v) in lits.iter().enumerate() {
            let lit_path = format!("{path}/{jj}");
            let pair = as_array(lit_v, &lit_path)?;
            if pair.len() != 2 {
                return Err(schema(&lit_path, "literal must be [variable, bound]"));
            }
            let var = as_usize(&pair[0], &format!("{lit_path}/0"))?;
            let bound = as_usize(&pair[1], &format!("{lit_path}/1"))?;
            clause[jj] = (var, bound);
        }
        clauses.push(clause);
    }
    NaeInstance::new(d, vars, clauses).map_err(|e| schema("/clauses", e.to_string()))
}

/// Trace file: rule steps with 1-based original vertex ids.
pub fn write_trace(trace: &KernelTrace) -> String {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "rule": s.rule.as_str(),
                "removed": s.removed.iter().map(|&v| v + 1).collect::<Vec<usize>>(),
                "decrement": s.decrement,
            })
        })
        .collect();
    canonical_json(&json!({
        "mode": trace.mode.as_str(),
        "initial_k": trace.initial_k,
        "final_k": trace.final_k,
        "steps": steps,
    }))
}

pub fn read_trace(text: &str) -> Result<KernelTrace, FormatError> {
    let v: Value = parse_json(text)?;
    let obj = as_object(&v, "")?;
    reject_unknown(obj, &["final_k", "initial_k", "mode", "steps"], "")?;
    let mode = match as_str(get(obj, "mode", "")?, "/mode")? {
        "cluster" => ModulatorMode::Cluster,
        "co-cluster" => ModulatorMode::CoCluster,
        other => return Err(schema("/mode", format!("unknown mode {other:?}"))),
    };
    let initial_k = as_i64(get(obj, "initial_k", "")?, "/initial_k")?;
    let final_k = as_i64(get(obj, "final_k", "")?, "/final_k")?;
    let steps_v = as_array(get(obj, "steps", "")?, "/steps")?;
    let mut steps = Vec::with_capacity(steps_v.len());
    for (i, step_v) in steps_v.iter().enumerate() {
        let path = format!("/steps/{i}");
        let step = as_object(step_v, &path)?;
        reject_unknown(step, &["decrement", "removed", "rule"], &path)?;
        let rule_s = as_str(get(step, "rule", &path)?, &format!("{path}/rule"))?;
        let rule = RuleId::from_name(rule_s)
            .ok_or_else(|| schema(format!("{path}/rule"), format!("unknown rule {rule_s:?}")))?;
        let decrement = as_i64(get(step, "decrement", &path)?, &format!("{path}/decrement"))?;
        let removed_v = as_array(get(step, "removed", &path)?, &format!("{path}/removed"))?;
        let mut removed = Vec::with_capacity(removed_v.len());
        for (jj, id_v) in removed_v.iter().enumerate() {
            let id = as_usize(id_v, &format!("{path}/removed/{jj}"))?;
            if id < 1 {
                return Err(schema(
                    format!("{path}/removed/{jj}"),
                    "vertex ids are 1-based",
                ));
            }
            removed.push(id - 1);
        }
        steps.push(TraceStep {
            rule,
            removed,
            decrement,
        });
    }
    let trace = KernelTrace {
        mode,
        initial_k,
        final_k,
        steps,
    };
    trace
        .check_consistency()
        .map_err(|message| schema("/steps", message))?;
    Ok(trace)
}

/// Solver result record with 1-based certificate ids and advisory flags
/// (degenerate-input markers such as `single_vertex` or `disconnected`).
pub fn md_result_to_json(result: &MdResult, flags: &[&str]) -> Value {
    let certificate: Vec<usize> = result
        .certificate
        .as_ref()
        .map(|c| c.vertices.iter().map(|&v| v + 1).collect())
        .unwrap_or_default();
    let mut sorted_flags: Vec<&str> = flags.to_vec();
    sorted_flags.sort_unstable();
    json!({
        "status": match result.status {
            MdStatus::Exact => "exact",
            MdStatus::ExceedsBound => "exceeds_bound",
        },
        "value": result.value,
        "certificate": certificate,
        "explored_nodes": result.explored_nodes,
        "bound": result.bound,
        "flags": sorted_flags,
    })
}

/// Verification record with 1-based ids.
pub fn certificate_to_json(cert: &ResolvingCertificate) -> Value {
    json!({
        "set": cert.vertices.iter().map(|&v| v + 1).collect::<Vec<usize>>(),
        "verified": cert.verified,
        "witness_pair": cert.witness_pair.map(|(u, v)| vec![u + 1, v + 1]),
    })
}

fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, FormatError> {
    v.as_object()
        .ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array()
        .ok_or_else(|| schema(path, "expected an array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, FormatError> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize, FormatError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn as_i64(v: &Value, path: &str) -> Result<i64, FormatError> {
    v.as_i64()
        .ok_or_else(|| schema(path, "expected an integer"))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, FormatError> {
    obj.get(key)
        .ok_or_else(|| schema(format!("{path}/{key}"), "missing required field"))
}

fn reject_unknown(
    obj: &Map<String, Value>,
    allowed: &[&str],
    path: &str,
) -> Result<(), FormatError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema(format!("{path}/{key}"), "unknown field"));
        }
    }
    Ok(())
}
