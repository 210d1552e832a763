//! Toolkit for the metric dimension of graphs.
//!
//! A set `S` of vertices *resolves* a pair `u, v` if some `w` in `S` has
//! `d(w,u) != d(w,v)`; the metric dimension `MD(G)` is the size of a smallest
//! set resolving every pair. This crate bundles:
//!
//! - [`graph`]: simple undirected graphs, BFS distances, twin detection;
//! - [`resolve`]: an exact branch-and-bound solver over the
//!   pair-distinguishing hitting-set formulation;
//! - [`kernel`]: reduction rules that shrink an instance relative to a
//!   distance-to-cluster (or co-cluster) modulator, with replayable traces;
//! - [`reduce_nae`]: a deterministic generator for metric-dimension instances
//!   encoding NAE-Integer-3-SAT, with machine checks of every distance claim
//!   the construction relies on;
//! - [`reduce_sat`]: SAT-encoding instance generators (vertex-cover flavored
//!   and clique flavored) with distance-table checks and structural witnesses;
//! - [`io`]: bit-exact text/JSON formats for graphs, instances, and traces;
//! - [`gen`]: seeded generators for random and planted test instances;
//! - [`cli`]: the `mdkit` command-line surface used by the batch harnesses.
//!
//! The `examples/` directory has one runnable walkthrough per capability;
//! start with `examples/exact_solver.rs`.

pub mod cli;
pub mod gen;
pub mod graph;
pub mod io;
pub mod kernel;
pub mod reduce_nae;
pub mod reduce_sat;
pub mod resolve;
