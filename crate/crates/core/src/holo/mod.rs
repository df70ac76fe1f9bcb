//! Holographic code assembly: the {5,4} tiling, greedy entanglement wedges
//! and their structural conditions, the HaPPY and LOTE codes on both
//! backends, code gauging/ungauging, induced boundary symmetries, entropy
//! decompositions, and domain-wall removability.

pub mod dense_codes;
pub mod entropy;
pub mod stab_codes;
pub mod tiling;
pub mod transform;
pub mod walls;

use crate::graph::LabeledGraph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HoloError {
    #[error("cutoff {0} exceeds the supported range {1}")]
    CutoffTooLarge(usize, usize),
    #[error("instance exceeds the desk-scale bounds: {0}")]
    ScaleExceeded(String),
    #[error("input code lacks the required duality (deviation {0:e})")]
    DualityAbsent(f64),
    #[error("boundary site lift failed: {0}")]
    NotCorrectable(String),
    #[error("entropy hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error(transparent)]
    Tensor(#[from] crate::tensor::TensorError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Gauging(#[from] crate::gauging::GaugingError),
    #[error(transparent)]
    Stab(#[from] crate::stab::StabError),
    #[error(transparent)]
    Qec(#[from] crate::qec::QecError),
}

/// A bulk region: vertices of V1 plus edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WedgeSet {
    pub vertices: BTreeSet<u32>,
    pub edges: BTreeSet<(u32, u32)>,
}

/// Result of the greedy algorithm for a boundary region.
#[derive(Debug, Clone)]
pub struct Wedge {
    pub region: BTreeSet<u32>,
    pub set: WedgeSet,
    /// Edges of the wedge with an endpoint outside R ∪ wedge vertices.
    pub ext: BTreeSet<(u32, u32)>,
    /// Cut set γ_R: edges with exactly one endpoint in R ∪ wedge vertices.
    pub cut: BTreeSet<(u32, u32)>,
}

impl Wedge {
    /// Interior: wedge vertices plus non-exterior wedge edges.
    pub fn interior_edges(&self) -> BTreeSet<(u32, u32)> {
        self.set
            .edges
            .iter()
            .copied()
            .filter(|e| !self.ext.contains(e))
            .collect()
    }
}

/// Greedy entanglement wedge: start from the dangling edges of R and
/// repeatedly add any bulk vertex with at least half of its incident edges
/// already in the wedge, together with its non-dangling edges.
pub fn greedy_wedge(graph: &LabeledGraph, region: &BTreeSet<u32>) -> Wedge {
    greedy_wedge_ordered(graph, region, &graph.v1())
}

fn greedy_wedge_ordered(graph: &LabeledGraph, region: &BTreeSet<u32>, order: &[u32]) -> Wedge {
    for v in region {
        assert_eq!(graph.label(*v), 0, "region must consist of NGC vertices");
    }
    let mut set = WedgeSet::default();
    for &(a, b) in graph.edges() {
        if region.contains(&a) && graph.label(b) == 1 {
            set.edges.insert((a, b));
        }
    }
    let e1: BTreeSet<(u32, u32)> = graph.e1().into_iter().collect();
    loop {
        let mut changed = false;
        for &v in order {
            if set.vertices.contains(&v) {
                continue;
            }
            let incident = graph.incident(v);
            let inside = incident.iter().filter(|e| set.edges.contains(e)).count();
            if 2 * inside >= incident.len() {
                set.vertices.insert(v);
                for e in incident {
                    if e1.contains(&e) {
                        set.edges.insert(e);
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let in_or_region = |v: u32| region.contains(&v) || set.vertices.contains(&v);
    // Exterior: bulk edges of the wedge reaching a vertex outside R and the
    // wedge. Dangling edges stay interior so that the complement wedge map
    // keeps its dangling edges exactly on its own region.
    let ext: BTreeSet<(u32, u32)> = set
        .edges
        .iter()
        .copied()
        .filter(|&(a, b)| {
            graph.label(a) == 1
                && graph.label(b) == 1
                && (!in_or_region(a) || !in_or_region(b))
        })
        .collect();
    let cut: BTreeSet<(u32, u32)> = graph
        .edges()
        .iter()
        .copied()
        .filter(|&(a, b)| in_or_region(a) != in_or_region(b))
        .collect();
    Wedge {
        region: region.clone(),
        set,
        ext,
        cut,
    }
}

/// Checks that the greedy wedge is independent of the vertex processing
/// order over `permutations` seeded shuffles.
pub fn greedy_order_independent(
    graph: &LabeledGraph,
    region: &BTreeSet<u32>,
    permutations: usize,
    seed: u64,
) -> bool {
    let reference = greedy_wedge(graph, region);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = graph.v1();
    for _ in 0..permutations {
        order.shuffle(&mut rng);
        let w = greedy_wedge_ordered(graph, region, &order);
        if w.set != reference.set {
            return false;
        }
    }
    true
}

/// The three near-boundary-probing conditions for a candidate wedge of R.
/// Returns human-readable violations (empty when all three hold).
pub fn near_boundary_probing_violations(
    graph: &LabeledGraph,
    region: &BTreeSet<u32>,
    set: &WedgeSet,
) -> Vec<String> {
    let mut out = Vec::new();
    // 1. The dangling edges in the wedge are exactly those incident to R.
    for &(a, b) in graph.edges() {
        if graph.label(a) == 0 || graph.label(b) == 0 {
            let expect = region.contains(&a);
            let got = set.edges.contains(&(a, b));
            if expect != got {
                out.push(format!(
                    "dangling edge ({a},{b}) {} the wedge",
                    if got { "wrongly included in" } else { "missing from" }
                ));
            }
        }
    }
    // 2. Every wedge vertex reaches R by a path inside wedge ∪ R.
    let mut reach: BTreeSet<u32> = region.clone();
    let mut stack: Vec<u32> = region.iter().copied().collect();
    while let Some(v) = stack.pop() {
        for &(a, b) in set.edges.iter() {
            let other = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            let in_wedge = set.vertices.contains(&other) || region.contains(&other);
            if in_wedge && !reach.contains(&other) {
                reach.insert(other);
                stack.push(other);
            }
        }
    }
    for &v in &set.vertices {
        if !reach.contains(&v) {
            out.push(format!("wedge vertex {v} unreachable from the region"));
        }
    }
    // 3. A non-dangling edge is in the wedge iff incident on a wedge vertex.
    for &(a, b) in graph.edges() {
        if graph.label(a) == 1 && graph.label(b) == 1 {
            let touches = set.vertices.contains(&a) || set.vertices.contains(&b);
            let inside = set.edges.contains(&(a, b));
            if touches != inside {
                out.push(format!(
                    "bulk edge ({a},{b}) {}",
                    if inside {
                        "included without touching the wedge"
                    } else {
                        "touching the wedge but excluded"
                    }
                ));
            }
        }
    }
    out
}

/// The complement wedge map R ↦ E(R^c)^c ∪ ext E(R^c).
pub fn complement_wedge(graph: &LabeledGraph, region: &BTreeSet<u32>) -> WedgeSet {
    let v0: BTreeSet<u32> = graph.v0().into_iter().collect();
    let comp_region: BTreeSet<u32> = v0.difference(region).copied().collect();
    let w = greedy_wedge(graph, &comp_region);
    let vertices: BTreeSet<u32> = graph
        .v1()
        .into_iter()
        .filter(|v| !w.set.vertices.contains(v))
        .collect();
    let mut edges: BTreeSet<(u32, u32)> = graph
        .edges()
        .iter()
        .copied()
        .filter(|e| !w.set.edges.contains(e))
        .collect();
    for e in &w.ext {
        edges.insert(*e);
    }
    WedgeSet { vertices, edges }
}

/// Enumerates the contiguous boundary regions (in the boundary cyclic order)
/// of sizes 1..=max_size.
pub fn contiguous_boundary_regions(
    boundary_cycle: &[u32],
    max_size: usize,
) -> Vec<BTreeSet<u32>> {
    let n = boundary_cycle.len();
    let mut out = Vec::new();
    for size in 1..=max_size.min(n) {
        for start in 0..n {
            if size == n && start > 0 {
                break;
            }
            let mut r = BTreeSet::new();
            for k in 0..size {
                r.insert(boundary_cycle[(start + k) % n]);
            }
            out.push(r);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BulkConstraint {
    Unconstrained,
    GaugeInvariant,
    FluxFree,
}

#[cfg(test)]
mod tests {
    use super::*;
    use tiling::Tiling;

    #[test]
    fn single_tile_wedges() {
        let g = Tiling::generate(0).dual_graph();
        // |R| = 3 boundary sites: wedge contains the bulk vertex.
        let r: BTreeSet<u32> = [1, 2, 3].into_iter().collect();
        let w = greedy_wedge(&g, &r);
        assert!(w.set.vertices.contains(&0));
        assert_eq!(w.cut.len(), 2);
        // |R| = 2: wedge is the two dangling edges only.
        let r2: BTreeSet<u32> = [1, 2].into_iter().collect();
        let w2 = greedy_wedge(&g, &r2);
        assert!(w2.set.vertices.is_empty());
        assert_eq!(w2.set.edges.len(), 2);
        assert_eq!(w2.cut.len(), 2);
        // R = all: wedge covers everything.
        let rall: BTreeSet<u32> = (1..=5).collect();
        let wall = greedy_wedge(&g, &rall);
        assert!(wall.set.vertices.contains(&0));
        assert_eq!(wall.set.edges.len(), g.edges().len());
        assert!(wall.cut.is_empty());
    }

    #[test]
    fn near_boundary_probing_on_tilings() {
        for l in 0..=1 {
            let t = Tiling::generate(l);
            let g = t.dual_graph();
            let cycle: Vec<u32> = (0..t.boundary_count() as u32)
                .map(|b| t.tile_count() as u32 + b)
                .collect();
            for region in contiguous_boundary_regions(&cycle, 4) {
                let w = greedy_wedge(&g, &region);
                let viol = near_boundary_probing_violations(&g, &region, &w.set);
                assert!(viol.is_empty(), "l = {l}, region {region:?}: {viol:?}");
                let comp = complement_wedge(&g, &region);
                let viol_c = near_boundary_probing_violations(&g, &region, &comp);
                assert!(viol_c.is_empty(), "complement, l = {l}: {viol_c:?}");
            }
        }
    }

    #[test]
    fn greedy_is_order_independent() {
        let t = Tiling::generate(1);
        let g = t.dual_graph();
        let cycle: Vec<u32> = (0..t.boundary_count() as u32)
            .map(|b| t.tile_count() as u32 + b)
            .collect();
        for region in contiguous_boundary_regions(&cycle, 6).into_iter().step_by(7) {
            assert!(greedy_order_independent(&g, &region, 20, 0xfeed));
        }
    }
}
