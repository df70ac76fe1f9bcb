//! Named desk-scale instances: (group, graph) pairs with their vertex
//! representations, spanning lines, stars, cycles and triangles with
//! pendants, over the finite-group catalog.

use gaugecode::gauging::{GaugeStructure, GaugingError, SymmetricSystem};
use gaugecode::graph::LabeledGraph;
use gaugecode::group::{irreps, FiniteGroup, Irrep};
use gaugecode::holo::dense_codes::qubit_rep;
use std::collections::BTreeMap;

/// A gauge-structure instance plus the vertices carrying nontrivial
/// representations (the targets for dressing sweeps).
pub struct GaugeInstance {
    pub name: String,
    pub gs: GaugeStructure,
    pub charged_vertices: Vec<u32>,
}

fn rep_for(group: &FiniteGroup) -> Irrep {
    let set = irreps(group).expect("catalog group irreps");
    qubit_rep(group, &set)
}

fn build(
    name: &str,
    group: FiniteGroup,
    graph: LabeledGraph,
    charged: &[u32],
) -> Result<GaugeInstance, GaugingError> {
    let rep = rep_for(&group);
    let reps: BTreeMap<u32, Irrep> = charged.iter().map(|&v| (v, rep.clone())).collect();
    let sys = SymmetricSystem::new(graph, group, reps)?;
    Ok(GaugeInstance {
        name: name.to_string(),
        gs: GaugeStructure::new(sys)?,
        charged_vertices: charged.to_vec(),
    })
}

/// v0(NGC) → v1(GC); the GC vertex carries a representation.
pub fn line2(group: FiniteGroup) -> Result<GaugeInstance, GaugingError> {
    let name = format!("{}-line", group.name());
    let graph = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap();
    build(&name, group, graph, &[1])
}

/// Three NGC leaves around one GC center.
pub fn star3(group: FiniteGroup, charged_center: bool) -> Result<GaugeInstance, GaugingError> {
    let name = format!("{}-star3", group.name());
    let graph = LabeledGraph::new(
        &[(0, 0), (1, 0), (2, 0), (3, 1)],
        &[(0, 3), (1, 3), (2, 3)],
        None,
    )
    .unwrap();
    let charged: &[u32] = if charged_center { &[3] } else { &[] };
    build(&name, group, graph, charged)
}

/// GC triangle with one NGC pendant; optionally one charged GC vertex.
pub fn triangle_pendant(
    group: FiniteGroup,
    charged_one: bool,
) -> Result<GaugeInstance, GaugingError> {
    let name = format!("{}-triangle-pendant", group.name());
    let graph = LabeledGraph::new(
        &[(0, 0), (1, 1), (2, 1), (3, 1)],
        &[(0, 1), (1, 2), (2, 3), (1, 3)],
        None,
    )
    .unwrap();
    let charged: &[u32] = if charged_one { &[2] } else { &[] };
    build(&name, group, graph, charged)
}

/// NGC — GC — NGC line (two boundary endpoints).
pub fn line3_two_ngc(group: FiniteGroup) -> Result<GaugeInstance, GaugingError> {
    let name = format!("{}-line3", group.name());
    let graph =
        LabeledGraph::new(&[(0, 0), (1, 1), (2, 0)], &[(0, 1), (2, 1)], None).unwrap();
    build(&name, group, graph, &[])
}

/// GC — NGC — GC: the bulk (V1-induced) subgraph is disconnected, the
/// negative control for the flux-free image theorem.
pub fn disconnected_bulk(group: FiniteGroup) -> Result<GaugeInstance, GaugingError> {
    let name = format!("{}-split-bulk", group.name());
    let graph =
        LabeledGraph::new(&[(0, 0), (1, 1), (2, 1)], &[(0, 1), (0, 2)], None).unwrap();
    build(&name, group, graph, &[])
}

/// All-GC cycle with charged vertices (V0 = ∅, symmetric-sector territory).
pub fn cycle_all_charged(group: FiniteGroup, n: u32) -> Result<GaugeInstance, GaugingError> {
    let name = format!("{}-c{n}", group.name());
    let vertices: Vec<(u32, u8)> = (0..n).map(|v| (v, 1)).collect();
    let edges: Vec<(u32, u32)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    // Orientation: (v, v+1) both GC, fine; normalize the wrap edge.
    let edges: Vec<(u32, u32)> = edges
        .into_iter()
        .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
        .collect();
    let graph = LabeledGraph::new(&vertices, &edges, None).unwrap();
    let charged: Vec<u32> = (0..n).collect();
    build(&name, group, graph, &charged)
}

/// The dressing-sweep catalog: instances with at least one charged bulk
/// vertex and a boundary to dress to.
pub fn dressing_catalog() -> Vec<GaugeInstance> {
    vec![
        line2(FiniteGroup::parse("Z2").unwrap()).unwrap(),
        star3(FiniteGroup::parse("Z2").unwrap(), true).unwrap(),
        line2(FiniteGroup::parse("Z3").unwrap()).unwrap(),
        line2(FiniteGroup::parse("S3").unwrap()).unwrap(),
        triangle_pendant(FiniteGroup::parse("Z2").unwrap(), true).unwrap(),
    ]
}

/// The isometry/duality catalog of criterion-level (group, graph) pairs.
pub fn gauging_catalog() -> Vec<GaugeInstance> {
    vec![
        line2(FiniteGroup::parse("Z2").unwrap()).unwrap(),
        star3(FiniteGroup::parse("Z2").unwrap(), true).unwrap(),
        triangle_pendant(FiniteGroup::parse("Z2").unwrap(), false).unwrap(),
        line2(FiniteGroup::parse("Z3").unwrap()).unwrap(),
        triangle_pendant(FiniteGroup::parse("Z3").unwrap(), false).unwrap(),
        star3(FiniteGroup::parse("Z2xZ2").unwrap(), false).unwrap(),
        line2(FiniteGroup::parse("S3").unwrap()).unwrap(),
        triangle_pendant(FiniteGroup::parse("S3").unwrap(), false).unwrap(),
        line2(FiniteGroup::parse("D4").unwrap()).unwrap(),
        star3(FiniteGroup::parse("D4").unwrap(), false).unwrap(),
    ]
}

/// Wilson-algebra instances: graphs with loops and NGC-to-NGC lines.
pub fn wilson_catalog() -> Vec<GaugeInstance> {
    vec![
        triangle_pendant(FiniteGroup::parse("Z2").unwrap(), false).unwrap(),
        triangle_pendant(FiniteGroup::parse("S3").unwrap(), false).unwrap(),
        line3_two_ngc(FiniteGroup::parse("Z2").unwrap()).unwrap(),
        line3_two_ngc(FiniteGroup::parse("S3").unwrap()).unwrap(),
        star3(FiniteGroup::parse("D4").unwrap(), false).unwrap(),
    ]
}
