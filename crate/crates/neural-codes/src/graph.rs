//! The codeword graph and the order-forcing engine: feasibility of walks,
//! exhaustive feasible path enumeration, forced-between sets, and the
//! bounded decision procedure for strong order-forcing.
//!
//! A walk `v_1, ..., v_k` is feasible when `v_i ∩ v_j ⊆ v_m` for all
//! `1 <= i < m < j <= k`. The enumeration below prunes with the equivalent
//! incremental form: appending `u` at position `k+1` is allowed iff
//! `(v_1 ∪ ... ∪ v_{m-1}) ∩ u ⊆ v_m` for every `m <= k`. Each triple is
//! checked exactly once, when its last index is appended, so a surviving
//! complete walk satisfies the full condition.

use thiserror::Error;

use crate::code::{Code, Codeword};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("codeword {0} is not in the code")]
    UnknownCodeword(String),
    #[error("walk is empty")]
    EmptyWalk,
    #[error("vertices at positions {position} and {} are not adjacent", position + 1)]
    NotAWalk { position: usize },
    #[error("sequence repeats a vertex, so it is not a simple path")]
    NotSimplePath,
    #[error("walk is infeasible: violation at {0}")]
    InfeasibleWalk(TripleViolation),
    #[error("no feasible path from {from} to {to}")]
    NoFeasiblePath { from: String, to: String },
}

/// Graph on the codewords of a code, with an edge exactly when one endpoint
/// strictly contains the other.
#[derive(Debug, Clone)]
pub struct CodewordGraph {
    code: Code,
    adj: Vec<Vec<usize>>,
}

pub fn codeword_graph(code: &Code) -> CodewordGraph {
    CodewordGraph::new(code)
}

impl CodewordGraph {
    pub fn new(code: &Code) -> Self {
        let words = code.codewords();
        let adj = words
            .iter()
            .map(|w| {
                words
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| w.is_strict_subset_of(**v) || v.is_strict_subset_of(*w))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        CodewordGraph {
            code: code.clone(),
            adj,
        }
    }

    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Neighbor indices in canonical codeword order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    fn word(&self, v: usize) -> Codeword {
        self.code.codewords()[v]
    }

    fn resolve(&self, w: Codeword) -> Result<usize, GraphError> {
        self.code
            .index_of(w)
            .ok_or_else(|| GraphError::UnknownCodeword(self.code.format_codeword(w)))
    }

    /// Edge list as codeword pairs, each pair and the list itself in
    /// canonical order.
    pub fn edges(&self) -> Vec<(Codeword, Codeword)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (a, nbrs) in self.adj.iter().enumerate() {
            for &b in nbrs {
                if a < b {
                    out.push((self.word(a), self.word(b)));
                }
            }
        }
        out
    }
}

/// An ordered, nonempty codeword sequence; consecutive vertices are adjacent
/// in the codeword graph of the code it was produced from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<Codeword>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Positions are 1-based, matching the `v_1, ..., v_k` convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleViolation {
    pub i: usize,
    pub m: usize,
    pub j: usize,
}

impl std::fmt::Display for TripleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(i, m, j) = ({}, {}, {})", self.i, self.m, self.j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// First violating triple in lexicographic `(i, m, j)` order.
    pub witness_violation: Option<TripleViolation>,
}

/// Checks adjacency of consecutive pairs and the triple condition.
/// Unknown vertices and non-adjacent pairs are errors, distinct from an
/// infeasible (but valid) walk.
pub fn is_feasible_walk(
    graph: &CodewordGraph,
    walk: &[Codeword],
) -> Result<FeasibilityReport, GraphError> {
    if walk.is_empty() {
        return Err(GraphError::EmptyWalk);
    }
    let idx: Vec<usize> = walk
        .iter()
        .map(|w| graph.resolve(*w))
        .collect::<Result<_, _>>()?;
    for (pos, pair) in idx.windows(2).enumerate() {
        if !graph.is_edge(pair[0], pair[1]) {
            return Err(GraphError::NotAWalk { position: pos + 1 });
        }
    }
    let k = walk.len();
    for i in 0..k {
        for m in i + 1..k {
            for j in m + 1..k {
                if !walk[i].intersection(walk[j]).is_subset_of(walk[m]) {
                    return Ok(FeasibilityReport {
                        feasible: false,
                        witness_violation: Some(TripleViolation {
                            i: i + 1,
                            m: m + 1,
                            j: j + 1,
                        }),
                    });
                }
            }
        }
    }
    Ok(FeasibilityReport {
        feasible: true,
        witness_violation: None,
    })
}

struct PathSearch<'g> {
    graph: &'g CodewordGraph,
    target: usize,
    path: Vec<usize>,
    /// `unions[t]` is the union of the first `t+1` vertices on the path.
    unions: Vec<Codeword>,
    visited: Vec<bool>,
    found: Vec<Vec<usize>>,
}

impl PathSearch<'_> {
    /// True iff appending `u` keeps every triple condition: for each interior
    /// position `m`, the part of `u` shared with any earlier vertex must lie
    /// inside `v_m`.
    fn extension_ok(&self, u: usize) -> bool {
        let u = self.graph.word(u);
        (1..self.path.len()).all(|m| {
            self.unions[m - 1]
                .intersection(u)
                .is_subset_of(self.graph.word(self.path[m]))
        })
    }

    fn push(&mut self, u: usize) {
        let prev = *self.unions.last().expect("path never empty");
        self.path.push(u);
        self.unions.push(prev.union(self.graph.word(u)));
        self.visited[u] = true;
    }

    fn pop(&mut self) {
        let u = self.path.pop().expect("pop matches push");
        self.unions.pop();
        self.visited[u] = false;
    }

    fn explore(&mut self) {
        let last = *self.path.last().unwrap();
        for &u in self.graph.neighbors(last) {
            if self.visited[u] || !self.extension_ok(u) {
                continue;
            }
            if u == self.target {
                let mut hit = self.path.clone();
                hit.push(u);
                self.found.push(hit);
                continue;
            }
            self.push(u);
            self.explore();
            self.pop();
        }
    }
}

fn paths_from_branch(
    graph: &CodewordGraph,
    from: usize,
    first: usize,
    to: usize,
) -> Vec<Vec<usize>> {
    if first == to {
        return vec![vec![from, to]];
    }
    let mut search = PathSearch {
        graph,
        target: to,
        path: vec![from],
        unions: vec![graph.word(from)],
        visited: {
            let mut v = vec![false; graph.vertex_count()];
            v[from] = true;
            v
        },
        found: Vec::new(),
    };
    search.push(first);
    search.explore();
    search.found
}

fn paths_to_walks(graph: &CodewordGraph, paths: Vec<Vec<usize>>) -> Vec<Walk> {
    paths
        .into_iter()
        .map(|p| Walk {
            vertices: p.into_iter().map(|v| graph.word(v)).collect(),
        })
        .collect()
}

/// Below this vertex count the subtrees are too small for forking to pay
/// off, so enumeration stays on one thread.
const PARALLEL_MIN_VERTICES: usize = 64;

/// All simple feasible paths from `from` to `to`, in canonical (depth-first)
/// order. On large codes the subtrees below each first step are explored
/// concurrently when the `parallel` feature is on; the output order is the
/// same either way.
pub fn enumerate_feasible_paths(
    graph: &CodewordGraph,
    from: Codeword,
    to: Codeword,
) -> Result<Vec<Walk>, GraphError> {
    let (from, to) = (graph.resolve(from)?, graph.resolve(to)?);
    if from == to {
        return Ok(paths_to_walks(graph, vec![vec![from]]));
    }
    let branches: Vec<usize> = graph.neighbors(from).to_vec();
    let nested = crate::exec::map_collect_when(
        graph.vertex_count() >= PARALLEL_MIN_VERTICES,
        branches,
        |first| paths_from_branch(graph, from, first, to),
    );
    Ok(paths_to_walks(
        graph,
        nested.into_iter().flatten().collect(),
    ))
}

/// Always-sequential variant of [`enumerate_feasible_paths`]; output is
/// identical. Kept public for benchmarks and equivalence tests.
pub fn enumerate_feasible_paths_seq(
    graph: &CodewordGraph,
    from: Codeword,
    to: Codeword,
) -> Result<Vec<Walk>, GraphError> {
    let (from, to) = (graph.resolve(from)?, graph.resolve(to)?);
    if from == to {
        return Ok(paths_to_walks(graph, vec![vec![from]]));
    }
    let mut all = Vec::new();
    for &first in graph.neighbors(from) {
        all.extend(paths_from_branch(graph, from, first, to));
    }
    Ok(paths_to_walks(graph, all))
}

/// The codewords lying on every feasible `from`,`to` path (endpoints always
/// included), in canonical order. Errors when no feasible path exists.
pub fn forced_between(
    graph: &CodewordGraph,
    from: Codeword,
    to: Codeword,
) -> Result<Vec<Codeword>, GraphError> {
    let paths = enumerate_feasible_paths(graph, from, to)?;
    if paths.is_empty() {
        return Err(GraphError::NoFeasiblePath {
            from: graph.code.format_codeword(from),
            to: graph.code.format_codeword(to),
        });
    }
    let mut on_all = vec![true; graph.vertex_count()];
    for walk in &paths {
        let mut here = vec![false; graph.vertex_count()];
        for w in &walk.vertices {
            here[graph.resolve(*w)?] = true;
        }
        for (a, h) in on_all.iter_mut().zip(here) {
            *a &= h;
        }
    }
    Ok(on_all
        .iter()
        .enumerate()
        .filter(|(_, keep)| **keep)
        .map(|(v, _)| graph.word(v))
        .collect())
}

fn contains_subsequence(walk: &[Codeword], seq: &[Codeword]) -> bool {
    let mut want = seq.iter();
    let mut next = want.next();
    for w in walk {
        if Some(w) == next {
            next = want.next();
        }
    }
    next.is_none()
}

/// True iff every feasible path between the sequence's endpoints contains the
/// sequence as a (not necessarily contiguous) subsequence. The sequence
/// itself need not be a walk. Errors when no feasible path exists: with no
/// paths at all there is nothing the sequence could be forcing.
pub fn is_order_forced(graph: &CodewordGraph, seq: &[Codeword]) -> Result<bool, GraphError> {
    if seq.is_empty() {
        return Err(GraphError::EmptyWalk);
    }
    for w in seq {
        graph.resolve(*w)?;
    }
    let paths = enumerate_feasible_paths(graph, seq[0], *seq.last().unwrap())?;
    if paths.is_empty() {
        return Err(GraphError::NoFeasiblePath {
            from: graph.code.format_codeword(seq[0]),
            to: graph.code.format_codeword(*seq.last().unwrap()),
        });
    }
    Ok(paths.iter().all(|p| contains_subsequence(&p.vertices, seq)))
}

/// Number of vertices a candidate walk may have in the bounded uniqueness
/// search: twice the codeword count.
pub fn default_walk_bound(code: &Code) -> usize {
    2 * code.len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongReport {
    pub strongly_order_forced: bool,
    /// Maximum walk length (in vertices) the uniqueness search examined.
    pub bound: usize,
    /// A feasible walk with the same endpoints that differs from the path,
    /// when one exists within the bound.
    pub counterexample: Option<Walk>,
}

/// Decides whether `path` is the unique feasible walk between its endpoints:
/// it must be the unique feasible simple path, and no feasible walk of at
/// most `bound` vertices may deviate from it. A found counterexample refutes
/// uniqueness unconditionally; a clean search confirms it up to the bound.
pub fn is_strongly_order_forced(
    graph: &CodewordGraph,
    path: &[Codeword],
    bound: usize,
) -> Result<StrongReport, GraphError> {
    let report = is_feasible_walk(graph, path)?;
    if let Some(violation) = report.witness_violation {
        return Err(GraphError::InfeasibleWalk(violation));
    }
    let idx: Vec<usize> = path
        .iter()
        .map(|w| graph.resolve(*w))
        .collect::<Result<_, _>>()?;
    {
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != idx.len() {
            return Err(GraphError::NotSimplePath);
        }
    }

    let from = path[0];
    let to = *path.last().unwrap();
    let paths = enumerate_feasible_paths(graph, from, to)?;
    if let Some(other) = paths.iter().find(|p| p.vertices != path) {
        return Ok(StrongReport {
            strongly_order_forced: false,
            bound,
            counterexample: Some(other.clone()),
        });
    }
    let deviant = find_deviant_feasible_walk(graph, idx[0], *idx.last().unwrap(), bound, &idx);
    Ok(StrongReport {
        strongly_order_forced: deviant.is_none(),
        bound,
        counterexample: deviant.map(|walk| Walk {
            vertices: walk.into_iter().map(|v| graph.word(v)).collect(),
        }),
    })
}

struct WalkSearch<'g> {
    graph: &'g CodewordGraph,
    target: usize,
    target_word: Codeword,
    bound: usize,
    path: &'g [usize],
    walk: Vec<usize>,
    unions: Vec<Codeword>,
    /// Union of `v_i ∩ target` over the walk so far. Any vertex appended
    /// before the final target must contain it, since it will be interior
    /// once the walk reaches the target.
    required: Codeword,
}

impl WalkSearch<'_> {
    fn extension_feasible(&self, u: Codeword) -> bool {
        (1..self.walk.len()).all(|m| {
            self.unions[m - 1]
                .intersection(u)
                .is_subset_of(self.graph.word(self.walk[m]))
        })
    }

    fn explore(&mut self) -> Option<Vec<usize>> {
        let last = *self.walk.last().unwrap();
        if self.walk.len() >= self.bound {
            return None;
        }
        for &u in self.graph.neighbors(last) {
            let word = self.graph.word(u);
            if !self.extension_feasible(word) {
                continue;
            }
            if u == self.target {
                let mut candidate = self.walk.clone();
                candidate.push(u);
                if candidate != self.path {
                    return Some(candidate);
                }
            }
            // Continue through `u` only if it can be interior to a walk that
            // still ends at the target.
            if !self.required.is_subset_of(word) {
                continue;
            }
            let prev_union = *self.unions.last().unwrap();
            let prev_required = self.required;
            self.walk.push(u);
            self.unions.push(prev_union.union(word));
            self.required = prev_required.union(word.intersection(self.target_word));
            if let Some(hit) = self.explore() {
                return Some(hit);
            }
            self.walk.pop();
            self.unions.pop();
            self.required = prev_required;
        }
        None
    }
}

/// First feasible `from`,`to` walk within `bound` vertices that differs from
/// `path`, in canonical depth-first order; `None` if none exists.
fn find_deviant_feasible_walk(
    graph: &CodewordGraph,
    from: usize,
    to: usize,
    bound: usize,
    path: &[usize],
) -> Option<Vec<usize>> {
    if from == to && path != [from] {
        return Some(vec![from]);
    }
    let from_word = graph.word(from);
    let to_word = graph.word(to);
    let mut search = WalkSearch {
        graph,
        target: to,
        target_word: to_word,
        bound,
        path,
        walk: vec![from],
        unions: vec![from_word],
        required: from_word.intersection(to_word),
    };
    search.explore()
}

/// Excises the segment strictly between the two occurrences of the first
/// repeated vertex (keeping one occurrence), repeatedly, until the walk is a
/// simple path. Feasibility and endpoints are preserved.
pub fn reduce_walk_to_path(graph: &CodewordGraph, walk: &[Codeword]) -> Result<Walk, GraphError> {
    let report = is_feasible_walk(graph, walk)?;
    if let Some(violation) = report.witness_violation {
        return Err(GraphError::InfeasibleWalk(violation));
    }
    let mut vertices = walk.to_vec();
    loop {
        let mut excise = None;
        'scan: for j in 1..vertices.len() {
            for i in 0..j {
                if vertices[i] == vertices[j] {
                    excise = Some((i, j));
                    break 'scan;
                }
            }
        }
        match excise {
            Some((i, j)) => {
                vertices.drain(i + 1..=j);
            }
            None => break,
        }
    }
    debug_assert!(matches!(
        is_feasible_walk(graph, &vertices),
        Ok(FeasibilityReport { feasible: true, .. })
    ));
    Ok(Walk { vertices })
}
