//! Oriented graphs with 0/1 vertex labelings, optional planar embeddings
//! with dangling-edge structure, and the path/cycle machinery used by the
//! gauging and holographic modules.
//!
//! Vertices labeled 1 are gauge-constrained (GC) bulk vertices; vertices
//! labeled 0 (NGC) are excluded from the gauge constraint. Edges are ordered
//! pairs (tail, head); an edge between an NGC and a GC vertex must point
//! from the former to the latter.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge ({0},{1}) references an unknown vertex")]
    UnknownVertex(u32, u32),
    #[error("both orientations of edge {0}-{1} are present")]
    BothOrientations(u32, u32),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(u32, u32),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("edge ({0},{1}) between an NGC and a GC vertex must point from NGC to GC")]
    DirectionConvention(u32, u32),
    #[error("planar embedding required but not provided")]
    NoEmbedding,
    #[error("path enumeration exceeded the configured cap of {0}")]
    BoundsExceeded(usize),
    #[error("embedding is inconsistent: {0}")]
    BadEmbedding(String),
}

/// Explicit planar data: a cyclic order of incident edges per vertex and the
/// set of vertices on the outer face.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlanarEmbedding {
    pub cyclic_order: BTreeMap<u32, Vec<(u32, u32)>>,
    pub boundary: BTreeSet<u32>,
}

/// Oriented graph with a bit labeling and optional planar embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    vertices: Vec<u32>,
    labels: BTreeMap<u32, u8>,
    edges: Vec<(u32, u32)>,
    embedding: Option<PlanarEmbedding>,
}

impl LabeledGraph {
    /// `labeled_vertices` pairs each vertex id with its bit label.
    pub fn new(
        labeled_vertices: &[(u32, u8)],
        edges: &[(u32, u32)],
        embedding: Option<PlanarEmbedding>,
    ) -> Result<Self, GraphError> {
        let mut labels = BTreeMap::new();
        for &(v, a) in labeled_vertices {
            labels.insert(v, if a == 0 { 0 } else { 1 });
        }
        let mut vertices: Vec<u32> = labels.keys().copied().collect();
        vertices.sort_unstable();
        let mut sorted_edges = edges.to_vec();
        sorted_edges.sort_unstable();
        let edge_set: BTreeSet<(u32, u32)> = sorted_edges.iter().copied().collect();
        for w in sorted_edges.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        for &(a, b) in &sorted_edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if !labels.contains_key(&a) || !labels.contains_key(&b) {
                return Err(GraphError::UnknownVertex(a, b));
            }
            if edge_set.contains(&(b, a)) && a < b {
                return Err(GraphError::BothOrientations(a, b));
            }
            // Mixed NGC/GC edges point from NGC to GC.
            if labels[&a] == 1 && labels[&b] == 0 {
                return Err(GraphError::DirectionConvention(a, b));
            }
        }
        if let Some(emb) = &embedding {
            for (v, ring) in &emb.cyclic_order {
                if !labels.contains_key(v) {
                    return Err(GraphError::BadEmbedding(format!("unknown vertex {v}")));
                }
                for e in ring {
                    if !edge_set.contains(e) {
                        return Err(GraphError::BadEmbedding(format!(
                            "edge ({},{}) in cyclic order but not in graph",
                            e.0, e.1
                        )));
                    }
                }
            }
            for v in &emb.boundary {
                if !labels.contains_key(v) {
                    return Err(GraphError::BadEmbedding(format!("unknown boundary vertex {v}")));
                }
            }
        }
        Ok(LabeledGraph {
            vertices,
            labels,
            edges: sorted_edges,
            embedding,
        })
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn label(&self, v: u32) -> u8 {
        self.labels[&v]
    }

    pub fn embedding(&self) -> Option<&PlanarEmbedding> {
        self.embedding.as_ref()
    }

    /// NGC vertices (label 0).
    pub fn v0(&self) -> Vec<u32> {
        self.vertices.iter().copied().filter(|v| self.labels[v] == 0).collect()
    }

    /// GC vertices (label 1).
    pub fn v1(&self) -> Vec<u32> {
        self.vertices.iter().copied().filter(|v| self.labels[v] == 1).collect()
    }

    /// Edges with both endpoints in V1.
    pub fn e1(&self) -> Vec<(u32, u32)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(a, b)| self.labels[&a] == 1 && self.labels[&b] == 1)
            .collect()
    }

    /// E \ E1.
    pub fn e0(&self) -> Vec<(u32, u32)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(a, b)| !(self.labels[&a] == 1 && self.labels[&b] == 1))
            .collect()
    }

    /// Edges with tail v (e⁺ = v for e = (e⁺, e⁻)).
    pub fn edges_plus(&self, v: u32) -> Vec<(u32, u32)> {
        self.edges.iter().copied().filter(|&(a, _)| a == v).collect()
    }

    /// Edges with head v (e⁻ = v).
    pub fn edges_minus(&self, v: u32) -> Vec<(u32, u32)> {
        self.edges.iter().copied().filter(|&(_, b)| b == v).collect()
    }

    pub fn incident(&self, v: u32) -> Vec<(u32, u32)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(a, b)| a == v || b == v)
            .collect()
    }

    pub fn neighbors(&self, v: u32) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn has_undirected_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains(&(a, b)) || self.edges.contains(&(b, a))
    }

    /// The oriented edge id joining a and b, if present in either direction.
    pub fn edge_between(&self, a: u32, b: u32) -> Option<(u32, u32)> {
        if self.edges.contains(&(a, b)) {
            Some((a, b))
        } else if self.edges.contains(&(b, a)) {
            Some((b, a))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectivityMode {
    Full,
    /// Connectivity of the V1-induced subgraph (the graph with V0 and E0
    /// removed). A single remaining vertex counts as connected, as does the
    /// empty subgraph.
    BulkOnly,
}

/// Weak connectivity: edge direction is ignored.
pub fn connectivity(graph: &LabeledGraph, mode: ConnectivityMode) -> bool {
    let (verts, edges): (Vec<u32>, Vec<(u32, u32)>) = match mode {
        ConnectivityMode::Full => (graph.vertices().to_vec(), graph.edges().to_vec()),
        ConnectivityMode::BulkOnly => (graph.v1(), graph.e1()),
    };
    if verts.len() <= 1 {
        return true;
    }
    let mut adj: BTreeMap<u32, Vec<u32>> = verts.iter().map(|&v| (v, vec![])).collect();
    for (a, b) in edges {
        adj.get_mut(&a).unwrap().push(b);
        adj.get_mut(&b).unwrap().push(a);
    }
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    let mut stack = vec![verts[0]];
    while let Some(v) = stack.pop() {
        if !seen.insert(v) {
            continue;
        }
        for &n in &adj[&v] {
            if !seen.contains(&n) {
                stack.push(n);
            }
        }
    }
    seen.len() == verts.len()
}

/// Dangling-edge violation categories, following the four failure modes of
/// a planar graph with dangling edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DanglingViolation {
    /// (a) an NGC vertex is not on the outer face.
    NgcNotOnBoundary(u32),
    /// (b) an NGC vertex is not connected to a GC vertex on the outer face.
    NgcWithoutBoundaryPartner(u32),
    /// (c) an NGC vertex participates in more than one edge.
    NgcMultipleEdges(u32),
    /// (d) an edge connects two NGC vertices.
    NgcToNgcEdge(u32, u32),
}

#[derive(Debug, Clone, Default)]
pub struct DanglingReport {
    pub violations: Vec<DanglingViolation>,
}

impl DanglingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the dangling-edge conditions: every NGC vertex lies on the outer
/// face and has exactly one incident edge, of the form (u, v) with v a GC
/// vertex also on the outer face.
pub fn validate_dangling(graph: &LabeledGraph) -> Result<DanglingReport, GraphError> {
    let emb = graph.embedding().ok_or(GraphError::NoEmbedding)?;
    let mut report = DanglingReport::default();
    for u in graph.v0() {
        if !emb.boundary.contains(&u) {
            report.violations.push(DanglingViolation::NgcNotOnBoundary(u));
        }
        let inc = graph.incident(u);
        for &(a, b) in &inc {
            if graph.label(a) == 0 && graph.label(b) == 0 {
                if a == u {
                    report.violations.push(DanglingViolation::NgcToNgcEdge(a, b));
                }
                continue;
            }
        }
        let mixed: Vec<(u32, u32)> = inc
            .iter()
            .copied()
            .filter(|&(a, b)| !(graph.label(a) == 0 && graph.label(b) == 0))
            .collect();
        if inc.len() > 1 {
            report.violations.push(DanglingViolation::NgcMultipleEdges(u));
        }
        let has_partner = mixed.iter().any(|&(a, b)| {
            a == u && graph.label(b) == 1 && emb.boundary.contains(&b)
        });
        if !has_partner {
            report
                .violations
                .push(DanglingViolation::NgcWithoutBoundaryPartner(u));
        }
    }
    Ok(report)
}

/// An undirected walk given as a vertex tuple; each step may traverse its
/// edge in either orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphPath {
    pub vertices: Vec<u32>,
}

impl GraphPath {
    pub fn new(vertices: Vec<u32>) -> Self {
        GraphPath { vertices }
    }

    pub fn len_edges(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_cycle(&self) -> bool {
        self.vertices.len() >= 2 && self.vertices.first() == self.vertices.last()
    }

    /// The oriented edges along the path, with a flag telling whether the
    /// step runs with the edge orientation (tail to head).
    pub fn step_edges(&self, graph: &LabeledGraph) -> Option<Vec<((u32, u32), bool)>> {
        let mut out = Vec::new();
        for w in self.vertices.windows(2) {
            let e = graph.edge_between(w[0], w[1])?;
            out.push((e, e.0 == w[0]));
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    /// Simple paths with both endpoints in V0 and interior in V1.
    NgcToNgc,
    /// Simple cycles with all vertices in V1, deduplicated up to rotation
    /// and reflection.
    CycleInBulk,
    /// Simple paths from the given vertex to any vertex of V0, with
    /// interior in V1.
    VertexToBoundary(u32),
}

#[derive(Debug, Clone, Copy)]
pub struct PathBounds {
    /// Maximum number of edges in a path.
    pub max_length: usize,
    /// Cap on the number of results before erroring.
    pub max_count: usize,
}

impl Default for PathBounds {
    fn default() -> Self {
        PathBounds {
            max_length: 16,
            max_count: 4096,
        }
    }
}

/// Exhaustive enumeration of simple paths or cycles of the requested kind,
/// in deterministic order.
pub fn enumerate_paths_and_cycles(
    graph: &LabeledGraph,
    kind: PathKind,
    bounds: PathBounds,
) -> Result<Vec<GraphPath>, GraphError> {
    let mut results: Vec<GraphPath> = Vec::new();
    match kind {
        PathKind::VertexToBoundary(start) => {
            let mut current = vec![start];
            dfs_to_boundary(graph, &mut current, &bounds, &mut results)?;
        }
        PathKind::NgcToNgc => {
            let mut v0 = graph.v0();
            v0.sort_unstable();
            for &u in &v0 {
                let mut current = vec![u];
                // Collect paths ending at any NGC vertex; keep u <= w to
                // avoid double-listing a path and its reverse.
                dfs_ngc_line(graph, &mut current, &bounds, &mut results)?;
            }
        }
        PathKind::CycleInBulk => {
            let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
            let mut v1 = graph.v1();
            v1.sort_unstable();
            for &root in &v1 {
                let mut current = vec![root];
                dfs_cycles(graph, root, &mut current, &bounds, &mut seen, &mut results)?;
            }
        }
    }
    Ok(results)
}

fn dfs_to_boundary(
    graph: &LabeledGraph,
    current: &mut Vec<u32>,
    bounds: &PathBounds,
    results: &mut Vec<GraphPath>,
) -> Result<(), GraphError> {
    let last = *current.last().unwrap();
    if current.len() > 1 && graph.label(last) == 0 {
        if results.len() >= bounds.max_count {
            return Err(GraphError::BoundsExceeded(bounds.max_count));
        }
        results.push(GraphPath::new(current.clone()));
        return Ok(());
    }
    if current.len() > bounds.max_length {
        return Ok(());
    }
    for n in graph.neighbors(last) {
        if current.contains(&n) {
            continue;
        }
        if graph.label(n) == 1 || graph.label(n) == 0 {
            current.push(n);
            dfs_to_boundary(graph, current, bounds, results)?;
            current.pop();
        }
    }
    Ok(())
}

fn dfs_ngc_line(
    graph: &LabeledGraph,
    current: &mut Vec<u32>,
    bounds: &PathBounds,
    results: &mut Vec<GraphPath>,
) -> Result<(), GraphError> {
    let last = *current.last().unwrap();
    if current.len() > 1 && graph.label(last) == 0 {
        let u = current[0];
        if u <= last {
            if results.len() >= bounds.max_count {
                return Err(GraphError::BoundsExceeded(bounds.max_count));
            }
            results.push(GraphPath::new(current.clone()));
        }
        return Ok(());
    }
    if current.len() > bounds.max_length {
        return Ok(());
    }
    for n in graph.neighbors(last) {
        if current.contains(&n) {
            continue;
        }
        // Interior must be V1; any V0 neighbor terminates the line.
        current.push(n);
        dfs_ngc_line(graph, current, bounds, results)?;
        current.pop();
    }
    Ok(())
}

fn dfs_cycles(
    graph: &LabeledGraph,
    root: u32,
    current: &mut Vec<u32>,
    bounds: &PathBounds,
    seen: &mut BTreeSet<Vec<u32>>,
    results: &mut Vec<GraphPath>,
) -> Result<(), GraphError> {
    let last = *current.last().unwrap();
    for n in graph.neighbors(last) {
        if graph.label(n) != 1 {
            continue;
        }
        if n == root && current.len() >= 3 {
            let mut cycle = current.clone();
            cycle.push(root);
            let canon = canonical_cycle(&cycle);
            if seen.insert(canon) {
                if results.len() >= bounds.max_count {
                    return Err(GraphError::BoundsExceeded(bounds.max_count));
                }
                results.push(GraphPath::new(cycle));
            }
            continue;
        }
        if current.contains(&n) || n < root {
            continue;
        }
        if current.len() >= bounds.max_length {
            continue;
        }
        current.push(n);
        dfs_cycles(graph, root, current, bounds, seen, results)?;
        current.pop();
    }
    Ok(())
}

/// Canonical form of a closed cycle (v1..vn v1): the lexicographically
/// smallest among all rotations and the two directions of the open list.
fn canonical_cycle(cycle: &[u32]) -> Vec<u32> {
    let open = &cycle[..cycle.len() - 1];
    let n = open.len();
    let mut best: Option<Vec<u32>> = None;
    for dir in 0..2 {
        let seq: Vec<u32> = if dir == 0 {
            open.to_vec()
        } else {
            open.iter().rev().copied().collect()
        };
        for s in 0..n {
            let rot: Vec<u32> = (0..n).map(|i| seq[(s + i) % n]).collect();
            if best.is_none() || rot < *best.as_ref().unwrap() {
                best = Some(rot);
            }
        }
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line2() -> LabeledGraph {
        // v0 (NGC) -> v1 (GC)
        LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap()
    }

    #[test]
    fn e0_e1_partition() {
        let g = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 1), (3, 1)],
            &[(0, 1), (1, 2), (2, 3), (3, 1)],
            None,
        )
        .unwrap();
        let e0 = g.e0();
        let e1 = g.e1();
        assert_eq!(e0.len() + e1.len(), g.edges().len());
        for e in &e0 {
            assert!(!e1.contains(e));
        }
        assert_eq!(e0, vec![(0, 1)]);
    }

    #[test]
    fn direction_convention_enforced() {
        let r = LabeledGraph::new(&[(0, 0), (1, 1)], &[(1, 0)], None);
        assert_eq!(r.unwrap_err(), GraphError::DirectionConvention(1, 0));
    }

    #[test]
    fn both_orientations_rejected() {
        let r = LabeledGraph::new(&[(0, 1), (1, 1)], &[(0, 1), (1, 0)], None);
        assert!(matches!(r, Err(GraphError::BothOrientations(_, _))));
    }

    #[test]
    fn connectivity_modes() {
        // Path v0 - v1 - v2 with labels 0,1,1.
        let g = LabeledGraph::new(&[(0, 0), (1, 1), (2, 1)], &[(0, 1), (1, 2)], None).unwrap();
        assert!(connectivity(&g, ConnectivityMode::Full));
        assert!(connectivity(&g, ConnectivityMode::BulkOnly));
        // Two disjoint edges.
        let g2 = LabeledGraph::new(
            &[(0, 1), (1, 1), (2, 1), (3, 1)],
            &[(0, 1), (2, 3)],
            None,
        )
        .unwrap();
        assert!(!connectivity(&g2, ConnectivityMode::Full));
        // Star with NGC center removed leaves a single V1 vertex: connected.
        let g3 = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap();
        assert!(connectivity(&g3, ConnectivityMode::BulkOnly));
        // Bulk-only on a line with two GC vertices separated by an NGC one:
        // v1 - v0 - v1 has a disconnected bulk.
        let g4 = LabeledGraph::new(&[(0, 1), (1, 0), (2, 1)], &[(1, 0), (1, 2)], None).unwrap();
        assert!(!connectivity(&g4, ConnectivityMode::BulkOnly));
    }

    fn star_embedding() -> PlanarEmbedding {
        PlanarEmbedding {
            cyclic_order: BTreeMap::from([
                (3, vec![(0, 3), (1, 3), (2, 3)]),
                (0, vec![(0, 3)]),
                (1, vec![(1, 3)]),
                (2, vec![(2, 3)]),
            ]),
            boundary: BTreeSet::from([0, 1, 2, 3]),
        }
    }

    #[test]
    fn validate_dangling_star_ok() {
        // One GC vertex with 3 dangling edges to NGC vertices, all on the
        // outer face.
        let g = LabeledGraph::new(
            &[(0, 0), (1, 0), (2, 0), (3, 1)],
            &[(0, 3), (1, 3), (2, 3)],
            Some(star_embedding()),
        )
        .unwrap();
        let report = validate_dangling(&g).unwrap();
        assert!(report.is_valid(), "{:?}", report.violations);
    }

    #[test]
    fn validate_dangling_categories() {
        // NGC vertex 0 with two incident edges: category (c).
        let emb = PlanarEmbedding {
            cyclic_order: BTreeMap::new(),
            boundary: BTreeSet::from([0, 1, 2]),
        };
        let g = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 1)],
            &[(0, 1), (0, 2)],
            Some(emb.clone()),
        )
        .unwrap();
        let report = validate_dangling(&g).unwrap();
        assert!(report
            .violations
            .contains(&DanglingViolation::NgcMultipleEdges(0)));

        // Edge between two NGC vertices: category (d).
        let g2 = LabeledGraph::new(&[(0, 0), (1, 0)], &[(0, 1)], Some(PlanarEmbedding {
            cyclic_order: BTreeMap::new(),
            boundary: BTreeSet::from([0, 1]),
        }))
        .unwrap();
        let report2 = validate_dangling(&g2).unwrap();
        assert!(report2
            .violations
            .iter()
            .any(|v| matches!(v, DanglingViolation::NgcToNgcEdge(_, _))));

        // NGC vertex off the outer face: category (a).
        let g3 = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], Some(PlanarEmbedding {
            cyclic_order: BTreeMap::new(),
            boundary: BTreeSet::from([1]),
        }))
        .unwrap();
        let report3 = validate_dangling(&g3).unwrap();
        assert!(report3
            .violations
            .contains(&DanglingViolation::NgcNotOnBoundary(0)));

        // GC partner not on the outer face: category (b).
        let g4 = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], Some(PlanarEmbedding {
            cyclic_order: BTreeMap::new(),
            boundary: BTreeSet::from([0]),
        }))
        .unwrap();
        let report4 = validate_dangling(&g4).unwrap();
        assert!(report4
            .violations
            .contains(&DanglingViolation::NgcWithoutBoundaryPartner(0)));
    }

    #[test]
    fn triangle_has_one_cycle_class() {
        let g = LabeledGraph::new(
            &[(0, 1), (1, 1), (2, 1)],
            &[(0, 1), (1, 2), (0, 2)],
            None,
        )
        .unwrap();
        let cycles =
            enumerate_paths_and_cycles(&g, PathKind::CycleInBulk, PathBounds::default()).unwrap();
        assert_eq!(cycles.len(), 1);
        assert!(cycles[0].is_cycle());
        assert_eq!(cycles[0].len_edges(), 3);
    }

    #[test]
    fn path_graph_has_no_cycles() {
        let g = LabeledGraph::new(&[(0, 1), (1, 1), (2, 1)], &[(0, 1), (1, 2)], None).unwrap();
        let cycles =
            enumerate_paths_and_cycles(&g, PathKind::CycleInBulk, PathBounds::default()).unwrap();
        assert!(cycles.is_empty());
    }

    #[test]
    fn vertex_to_boundary_on_line() {
        // u (GC, id 2) - v1 (GC, id 1) - v0 (NGC, id 0).
        let g = LabeledGraph::new(&[(0, 0), (1, 1), (2, 1)], &[(0, 1), (1, 2)], None).unwrap();
        let paths = enumerate_paths_and_cycles(
            &g,
            PathKind::VertexToBoundary(2),
            PathBounds::default(),
        )
        .unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].vertices, vec![2, 1, 0]);
        // Step orientation flags: 2->1 runs against edge (1,2); 1->0 against (0,1).
        let steps = paths[0].step_edges(&g).unwrap();
        assert_eq!(steps[0], ((1, 2), false));
        assert_eq!(steps[1], ((0, 1), false));
    }

    #[test]
    fn ngc_to_ngc_lines() {
        // v0(0) - v1(1) - v1(2) - v0(3)
        let g = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 1), (3, 0)],
            &[(0, 1), (1, 2), (3, 2)],
            None,
        )
        .unwrap();
        let lines =
            enumerate_paths_and_cycles(&g, PathKind::NgcToNgc, PathBounds::default()).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].vertices, vec![0, 1, 2, 3]);
    }

    /// Independent brute-force path counter: enumerates all vertex sequences
    /// up to the length bound and filters, as an oracle for small graphs.
    fn brute_force_count_vtb(graph: &LabeledGraph, start: u32, max_len: usize) -> usize {
        let verts = graph.vertices().to_vec();
        let mut count = 0;
        // All sequences of distinct vertices starting at `start`.
        fn rec(
            graph: &LabeledGraph,
            verts: &[u32],
            seq: &mut Vec<u32>,
            max_len: usize,
            count: &mut usize,
        ) {
            let last = *seq.last().unwrap();
            if seq.len() > 1 && graph.label(last) == 0 {
                *count += 1;
                return;
            }
            if seq.len() > max_len {
                return;
            }
            for &n in verts {
                if seq.contains(&n) || !graph.has_undirected_edge(last, n) {
                    continue;
                }
                seq.push(n);
                rec(graph, verts, seq, max_len, count);
                seq.pop();
            }
        }
        let mut seq = vec![start];
        rec(graph, &verts, &mut seq, max_len, &mut count);
        count
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // A 6-vertex graph with branching: bulk square + two NGC pendants.
        let g = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 1), (3, 1), (4, 1), (5, 0)],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 4), (5, 3)],
            None,
        )
        .unwrap();
        for &v in &g.v1() {
            let ours = enumerate_paths_and_cycles(
                &g,
                PathKind::VertexToBoundary(v),
                PathBounds {
                    max_length: 8,
                    max_count: 10_000,
                },
            )
            .unwrap()
            .len();
            let brute = brute_force_count_vtb(&g, v, 8);
            assert_eq!(ours, brute, "vertex {v}");
        }
        let cycles =
            enumerate_paths_and_cycles(&g, PathKind::CycleInBulk, PathBounds::default()).unwrap();
        assert_eq!(cycles.len(), 1); // the bulk square
    }

    #[test]
    fn bounds_exceeded() {
        let g = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 1), (3, 1), (4, 0)],
            &[(0, 1), (1, 2), (2, 3), (1, 3), (4, 3)],
            None,
        )
        .unwrap();
        let r = enumerate_paths_and_cycles(
            &g,
            PathKind::NgcToNgc,
            PathBounds {
                max_length: 8,
                max_count: 1,
            },
        );
        assert!(matches!(r, Err(GraphError::BoundsExceeded(1))));
    }

    #[test]
    fn line2_accessors() {
        let g = line2();
        assert_eq!(g.v0(), vec![0]);
        assert_eq!(g.v1(), vec![1]);
        assert_eq!(g.edges_plus(0), vec![(0, 1)]);
        assert_eq!(g.edges_minus(1), vec![(0, 1)]);
    }
}
