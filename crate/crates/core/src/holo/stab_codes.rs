//! Symplectic-backend holographic codes: the HaPPY code on the {5,4}
//! tiling and the (gauged) LOTE code built from a six-layer HaPPY stack
//! with copying tensors on interior edges.

use super::tiling::{Slot, TileKind, Tiling};
use super::{BulkConstraint, HoloError};
use crate::graph::LabeledGraph;
use crate::stab::{
    copy_tensor_z2, perfect_tensor, subspace_encoder, z2_gauge_projector_tableau, Leg, Network,
    PauliOperator, StabilizerIsometry,
};
use crate::tensor::Label;
use std::collections::BTreeMap;

/// Holographic code held in stabilizer form.
#[derive(Debug, Clone)]
pub struct StabHoloCode {
    pub graph: LabeledGraph,
    pub tiling: Tiling,
    pub constraint: BulkConstraint,
    /// Unconstrained bulk → boundary isometry.
    pub pre_encoder: StabilizerIsometry,
    /// Full encoder: equals `pre_encoder` for an unconstrained bulk, or the
    /// composition with the bulk subspace encoder when gauge constrained.
    pub encoder: StabilizerIsometry,
    pub bulk_subspace: Option<StabilizerIsometry>,
    /// Gauss-law stabilizers on the bulk qubits (empty when unconstrained).
    pub bulk_stabilizers: Vec<PauliOperator>,
    /// Bulk qubit index per label (vertex qubits first, then edges).
    pub bulk_index: BTreeMap<Label, usize>,
    /// Output qubit indices per boundary vertex id.
    pub site_qubits: BTreeMap<u32, Vec<usize>>,
    /// Boundary vertex ids in cyclic order.
    pub boundary_cycle: Vec<u32>,
}

impl StabHoloCode {
    /// Bulk qubit index for a graph edge (dangling edges carry the bulk
    /// edge degree of freedom).
    pub fn edge_qubit(&self, e: (u32, u32)) -> usize {
        self.bulk_index[&Label::Edge(e.0, e.1)]
    }

    pub fn vertex_qubit(&self, v: u32) -> Option<usize> {
        self.bulk_index.get(&Label::Vertex(v)).copied()
    }

    pub fn n_bulk(&self) -> usize {
        self.bulk_index.len()
    }

    /// Output qubits covering a set of boundary vertices.
    pub fn region_qubits(&self, region: impl IntoIterator<Item = u32>) -> Vec<usize> {
        let mut out = Vec::new();
        for v in region {
            out.extend_from_slice(&self.site_qubits[&v]);
        }
        out.sort_unstable();
        out
    }

    /// Bulk Pauli → its logical action through the (possibly constrained)
    /// encoder, if it preserves the constraint.
    pub fn bulk_logical(&self, bulk: &PauliOperator) -> Option<PauliOperator> {
        match &self.bulk_subspace {
            None => Some(bulk.clone()),
            Some(w) => w.logical_action(bulk),
        }
    }
}

/// The maximal supported cutoff for the symplectic HaPPY construction.
pub const HAPPY_MAX_CUTOFF: usize = 2;
/// LOTE assembly keeps the single-site recovery property only while every
/// edge-child tile at the cutoff has corner-child lateral neighbors, which
/// holds for cutoffs 0 and 1.
pub const LOTE_MAX_CUTOFF: usize = 1;

/// Builds the HaPPY code at the given cutoff: one perfect tensor per tile,
/// contracted along shared tile edges; the bulk is unconstrained with
/// trivial edge spaces.
pub fn build_happy(cutoff: usize) -> Result<StabHoloCode, HoloError> {
    if cutoff > HAPPY_MAX_CUTOFF {
        return Err(HoloError::CutoffTooLarge(cutoff, HAPPY_MAX_CUTOFF));
    }
    let tiling = Tiling::generate(cutoff);
    let graph = tiling.dual_graph();
    let t_count = tiling.tile_count();
    let mut net = Network::new();
    let tensors: Vec<usize> = (0..t_count).map(|_| net.add(perfect_tensor())).collect();
    for (a, sa, b, sb) in tiling.bulk_edges() {
        net.contract((tensors[a], Leg::Out(sa)), (tensors[b], Leg::Out(sb)));
    }
    let input_order: Vec<(usize, Leg)> =
        (0..t_count).map(|t| (tensors[t], Leg::In(0))).collect();
    let output_order: Vec<(usize, Leg)> = tiling
        .boundary
        .iter()
        .map(|&(t, s)| (tensors[t], Leg::Out(s)))
        .collect();
    let encoder = net.finish(&input_order, &output_order)?;
    if !encoder.is_isometry() {
        return Err(HoloError::ScaleExceeded("HaPPY contraction is not isometric".into()));
    }
    let mut bulk_index = BTreeMap::new();
    for t in 0..t_count as u32 {
        bulk_index.insert(Label::Vertex(t), t as usize);
    }
    let mut site_qubits = BTreeMap::new();
    let boundary_cycle: Vec<u32> = (0..tiling.boundary_count() as u32)
        .map(|b| t_count as u32 + b)
        .collect();
    for (bi, &v) in boundary_cycle.iter().enumerate() {
        site_qubits.insert(v, vec![bi]);
    }
    Ok(StabHoloCode {
        graph,
        tiling,
        constraint: BulkConstraint::Unconstrained,
        pre_encoder: encoder.clone(),
        encoder,
        bulk_subspace: None,
        bulk_stabilizers: Vec::new(),
        bulk_index,
        site_qubits,
        boundary_cycle,
    })
}

/// Layer assignment at a tile: which of the six stacked inputs feeds each
/// slot, and which carries the vertex degree of freedom.
///
/// Interior tiles use the cyclic slot order. Cutoff tiles place their
/// dangling-edge legs on layers that keep the single-site recovery sets of
/// neighboring tiles disjoint.
fn layer_assignment(tiling: &Tiling, t: usize) -> ([usize; 5], usize) {
    let tile = &tiling.tiles[t];
    let dangling: Vec<usize> = (0..5)
        .filter(|&s| matches!(tile.slots[s], Slot::Boundary(_)))
        .collect();
    if dangling.is_empty() {
        return ([0, 1, 2, 3, 4], 5);
    }
    match tile.kind {
        TileKind::Center => ([0, 1, 2, 3, 4], 5),
        TileKind::CornerChild => {
            // Slots: 0 lateral, 1..3 dangling, 4 lateral.
            ([0, 3, 4, 5, 1], 2)
        }
        TileKind::EdgeChild => {
            // Slots: 0 parent, 1 left lateral, 2 and 3 dangling, 4 right.
            ([2, 3, 0, 1, 4], 5)
        }
    }
}

/// The set of (boundary position, layer) output pairs forming the recovery
/// region of a dangling edge, per the reshuffling that makes each bulk edge
/// degree of freedom recoverable on its own boundary vertex.
fn recovery_positions(tiling: &Tiling, bi: usize) -> Vec<(usize, usize)> {
    let (t, s) = tiling.boundary[bi];
    let (slot_layers, _) = layer_assignment(tiling, t);
    let layer = slot_layers[s];
    let tile = &tiling.tiles[t];
    let own_positions: Vec<usize> = (0..5)
        .filter_map(|k| match tile.slots[k] {
            Slot::Boundary(b) => Some(b),
            _ => None,
        })
        .collect();
    match tile.kind {
        TileKind::Center => {
            // Single tile: this leg's own position plus the next two
            // clockwise, all in this leg's layer.
            let b = tiling.boundary.len();
            vec![(bi, layer), ((bi + 1) % b, layer), ((bi + 2) % b, layer)]
        }
        TileKind::CornerChild => own_positions.iter().map(|&p| (p, layer)).collect(),
        TileKind::EdgeChild => {
            // Route through the lateral corner-child neighbor: slot 2 goes
            // left (lateral slot 1), slot 3 goes right (lateral slot 4).
            let lateral_slot = if s == 2 { 1 } else { 4 };
            let neighbor = match tile.slots[lateral_slot] {
                Slot::Bulk(u, _) => u,
                _ => panic!("lateral slot must be contracted"),
            };
            assert_eq!(
                tiling.tiles[neighbor].kind,
                TileKind::CornerChild,
                "edge-child lateral must be a corner child at this cutoff"
            );
            let mut out: Vec<(usize, usize)> =
                own_positions.iter().map(|&p| (p, layer)).collect();
            for k in 0..5 {
                if let Slot::Boundary(b) = tiling.tiles[neighbor].slots[k] {
                    out.push((b, layer));
                }
            }
            out
        }
    }
}

/// Builds the (optionally gauged) LOTE code: six stacked HaPPY layers with
/// copying tensors on interior edges, dangling-edge legs assigned directly,
/// and boundary outputs reshuffled so each dangling edge is recoverable on
/// its single boundary vertex.
pub fn build_lote(cutoff: usize, gauged: bool) -> Result<StabHoloCode, HoloError> {
    if cutoff > LOTE_MAX_CUTOFF {
        return Err(HoloError::ScaleExceeded(format!(
            "LOTE assembly supports cutoffs up to {LOTE_MAX_CUTOFF}, requested {cutoff}"
        )));
    }
    let tiling = Tiling::generate(cutoff);
    let graph = tiling.dual_graph();
    let t_count = tiling.tile_count();
    let b_count = tiling.boundary_count();
    let mut net = Network::new();
    // tensors[t][j]: tile t in stack layer j.
    let tensors: Vec<Vec<usize>> = (0..t_count)
        .map(|_| (0..6).map(|_| net.add(perfect_tensor())).collect())
        .collect();
    // Within-layer contractions along shared tile edges.
    for (a, sa, b, sb) in tiling.bulk_edges() {
        for j in 0..6 {
            net.contract(
                (tensors[a][j], Leg::Out(sa)),
                (tensors[b][j], Leg::Out(sb)),
            );
        }
    }
    // Copy tensors on interior edges, consuming the stack inputs chosen by
    // the layer assignment.
    let mut copy_ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (a, sa, b, sb) in tiling.bulk_edges() {
        let c = net.add(copy_tensor_z2());
        copy_ids.insert((a, b), c);
        let (la, _) = layer_assignment(&tiling, a);
        let (lb, _) = layer_assignment(&tiling, b);
        net.contract((c, Leg::Out(0)), (tensors[a][la[sa]], Leg::In(0)));
        net.contract((c, Leg::Out(1)), (tensors[b][lb[sb]], Leg::In(0)));
    }
    // Bulk input ordering: vertex qubits (tiles ascending), then graph
    // edges in their sorted label order.
    let mut bulk_index = BTreeMap::new();
    let mut input_order: Vec<(usize, Leg)> = Vec::new();
    for t in 0..t_count {
        let (_, vertex_layer) = layer_assignment(&tiling, t);
        bulk_index.insert(Label::Vertex(t as u32), input_order.len());
        input_order.push((tensors[t][vertex_layer], Leg::In(0)));
    }
    for &(a, b) in graph.edges() {
        let idx = input_order.len();
        bulk_index.insert(Label::Edge(a, b), idx);
        if graph.label(a) == 1 && graph.label(b) == 1 {
            let key = if (a as usize) < (b as usize) {
                (a as usize, b as usize)
            } else {
                (b as usize, a as usize)
            };
            input_order.push((copy_ids[&key], Leg::In(0)));
        } else {
            // Dangling edge: the stack input of the adjacent tile at the
            // slot of this boundary leg.
            let tile = b as usize;
            let bi = a as usize - t_count;
            let slot = (0..5)
                .find(|&s| tiling.tiles[tile].slots[s] == Slot::Boundary(bi))
                .expect("dangling edge slot");
            let (layers, _) = layer_assignment(&tiling, tile);
            input_order.push((tensors[tile][layers[slot]], Leg::In(0)));
        }
    }
    // Outputs ordered position-major: qubit index = position·6 + layer.
    let mut output_order: Vec<(usize, Leg)> = Vec::new();
    for p in 0..b_count {
        let (t, s) = tiling.boundary[p];
        for j in 0..6 {
            output_order.push((tensors[t][j], Leg::Out(s)));
        }
    }
    let pre_encoder = net.finish(&input_order, &output_order)?;
    if !pre_encoder.is_isometry() {
        return Err(HoloError::ScaleExceeded("LOTE contraction is not isometric".into()));
    }
    // Site assignment: recovery sets claim outputs; leftovers default to the
    // site owning the position.
    let mut owner: Vec<Option<usize>> = vec![None; 6 * b_count];
    for bi in 0..b_count {
        for (p, j) in recovery_positions(&tiling, bi) {
            let q = p * 6 + j;
            assert!(
                owner[q].is_none(),
                "output ({p},{j}) claimed twice (by {:?} and {bi})",
                owner[q]
            );
            owner[q] = Some(bi);
        }
    }
    for p in 0..b_count {
        for j in 0..6 {
            owner[p * 6 + j].get_or_insert(p);
        }
    }
    let mut site_qubits: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    let boundary_cycle: Vec<u32> = (0..b_count as u32)
        .map(|b| t_count as u32 + b)
        .collect();
    for (q, o) in owner.iter().enumerate() {
        let site = boundary_cycle[o.unwrap()];
        site_qubits.entry(site).or_default().push(q);
    }
    for v in &boundary_cycle {
        site_qubits.entry(*v).or_default();
    }
    let (bulk_stabilizers, tableau_index) =
        z2_gauge_projector_tableau(&graph, &graph.v1());
    debug_assert_eq!(tableau_index, bulk_index);
    if !gauged {
        return Ok(StabHoloCode {
            graph,
            tiling,
            constraint: BulkConstraint::Unconstrained,
            pre_encoder: pre_encoder.clone(),
            encoder: pre_encoder,
            bulk_subspace: None,
            bulk_stabilizers: Vec::new(),
            bulk_index,
            site_qubits,
            boundary_cycle,
        });
    }
    let n_bulk = bulk_index.len();
    let w = subspace_encoder(n_bulk, &bulk_stabilizers)?;
    // encoder = pre_encoder ∘ w.
    let mut net2 = Network::new();
    let wi = net2.add(w.clone());
    let pi = net2.add(pre_encoder.clone());
    for q in 0..n_bulk {
        net2.contract((wi, Leg::Out(q)), (pi, Leg::In(q)));
    }
    let encoder = net2.finish(
        &(0..w.n_in).map(|i| (wi, Leg::In(i))).collect::<Vec<_>>(),
        &(0..pre_encoder.n_out)
            .map(|o| (pi, Leg::Out(o)))
            .collect::<Vec<_>>(),
    )?;
    if !encoder.is_isometry() {
        return Err(HoloError::ScaleExceeded("gauged LOTE encoder is not isometric".into()));
    }
    Ok(StabHoloCode {
        graph,
        tiling,
        constraint: BulkConstraint::GaugeInvariant,
        pre_encoder,
        encoder,
        bulk_subspace: Some(w),
        bulk_stabilizers,
        bulk_index,
        site_qubits,
        boundary_cycle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn happy_l0_is_five_qubit_code() {
        let code = build_happy(0).unwrap();
        assert_eq!(code.encoder.n_in, 1);
        assert_eq!(code.encoder.n_out, 5);
        // Global X duality: X on all boundary legs implements X on the bulk.
        let xall = PauliOperator::from_str("XXXXX");
        let l = code.encoder.logical_action(&xall).unwrap();
        assert_eq!(l, PauliOperator::from_str("X"));
    }

    #[test]
    fn happy_counts_and_duality() {
        for l in 0..=2 {
            let code = build_happy(l).unwrap();
            assert_eq!(code.encoder.n_in, code.tiling.tile_count());
            assert_eq!(code.encoder.n_out, code.tiling.boundary_count());
            assert!(code.encoder.is_isometry());
            // X on every boundary leg implements X on every bulk leg.
            let mut xall = PauliOperator::identity(code.encoder.n_out);
            for q in 0..code.encoder.n_out {
                xall.x[q] = true;
            }
            let act = code.encoder.logical_action(&xall).unwrap();
            let mut xbulk = PauliOperator::identity(code.encoder.n_in);
            for q in 0..code.encoder.n_in {
                xbulk.x[q] = true;
            }
            assert_eq!(act, xbulk, "l = {l}");
        }
    }

    #[test]
    fn happy_cutoff_too_large() {
        assert!(matches!(
            build_happy(3),
            Err(HoloError::CutoffTooLarge(3, _))
        ));
    }

    #[test]
    fn lote_ungauged_structure() {
        let code = build_lote(0, false).unwrap();
        // Bulk: 1 vertex qubit + 5 edge qubits; boundary: 30 qubits.
        assert_eq!(code.encoder.n_in, 6);
        assert_eq!(code.encoder.n_out, 30);
        assert!(code.encoder.is_isometry());
        // Site decomposition covers all outputs exactly once.
        let mut seen = vec![false; 30];
        for (_, qs) in code.site_qubits.iter() {
            for &q in qs {
                assert!(!seen[q]);
                seen[q] = true;
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn lote_single_tile_edge_recovery_on_single_site() {
        let code = build_lote(0, false).unwrap();
        for b in 0..5u32 {
            let site = 1 + b;
            let e = (site, 0u32);
            let qe = code.edge_qubit(e);
            let region = code.region_qubits([site]);
            for word in ["X", "Z"] {
                let mut logical = PauliOperator::identity(code.n_bulk());
                match word {
                    "X" => logical.x[qe] = true,
                    _ => logical.z[qe] = true,
                }
                let found = code.encoder.pauli_reconstruct(&logical, &region);
                assert!(found.is_some(), "site {site} word {word}");
                assert!(found.unwrap().is_supported_on(&region));
            }
        }
    }

    #[test]
    fn gauged_lote_single_tile() {
        let code = build_lote(0, true).unwrap();
        // 6 bulk qubits, 1 Gauss constraint, so 5 logical qubits.
        assert_eq!(code.encoder.n_in, 5);
        assert_eq!(code.encoder.n_out, 30);
        assert!(code.encoder.is_isometry());
        // A_v(1) acts trivially on the gauged code.
        let mut av = PauliOperator::identity(code.n_bulk());
        av.x[code.vertex_qubit(0).unwrap()] = true;
        for b in 0..5u32 {
            av.x[code.edge_qubit((1 + b, 0))] = true;
        }
        let l = code.bulk_logical(&av).unwrap();
        assert!(l.is_identity_word());
        assert_eq!(l.phase, 0);
    }

    #[test]
    fn lote_l1_builds_and_recovers() {
        let code = build_lote(1, false).unwrap();
        assert_eq!(code.encoder.n_in, 11 + 40);
        assert_eq!(code.encoder.n_out, 150);
        assert!(code.encoder.is_isometry());
        // Every dangling edge recoverable on its own site.
        let t_count = code.tiling.tile_count() as u32;
        for bi in 0..code.tiling.boundary_count() as u32 {
            let site = t_count + bi;
            let tile = code.tiling.boundary[bi as usize].0 as u32;
            let qe = code.edge_qubit((site, tile));
            let region = code.region_qubits([site]);
            let mut logical = PauliOperator::identity(code.n_bulk());
            logical.x[qe] = true;
            assert!(
                code.encoder.pauli_reconstruct(&logical, &region).is_some(),
                "X on edge at site {site}"
            );
            let mut logical_z = PauliOperator::identity(code.n_bulk());
            logical_z.z[qe] = true;
            assert!(
                code.encoder.pauli_reconstruct(&logical_z, &region).is_some(),
                "Z on edge at site {site}"
            );
        }
    }

    #[test]
    fn lote_l2_rejected() {
        assert!(matches!(build_lote(2, false), Err(HoloError::ScaleExceeded(_))));
    }
}
