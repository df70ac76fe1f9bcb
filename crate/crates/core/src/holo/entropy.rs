//! Entanglement-entropy decompositions: the gauged-state perimeter law for
//! abelian groups without NGC vertices, and the holographic cut formula on
//! complementary-wedge regions.

use super::dense_codes::DenseHoloCode;
use super::{greedy_wedge, HoloError};
use crate::gauging::{symmetric_sector_map, GaugeStructure};
use crate::linalg::CMat;
use crate::tensor::{embed, entropy_matrix, Label, StateVector};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy)]
pub struct EntropyCheck {
    /// Entropy of the gauged (or boundary) reduced state.
    pub lhs: f64,
    /// The decomposition that should match it.
    pub rhs: f64,
    /// Number of cut edges entering the formula.
    pub cut: usize,
}

impl EntropyCheck {
    pub fn deviation(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// S(ρ^G_A) against (|∂A| − 1)·ln|G| + S(ρ_A) for a symmetric input state on
/// a fully gauge-constrained abelian system.
///
/// Region convention: A consists of the chosen vertices plus the edges with
/// both endpoints inside; ∂A is the set of crossing edges, assigned to the
/// complement.
pub fn gauged_state_entropy_check(
    gs: &GaugeStructure,
    psi: &StateVector,
    region: &BTreeSet<u32>,
) -> Result<EntropyCheck, HoloError> {
    if !gs.sys().graph.v0().is_empty() {
        return Err(HoloError::HypothesisViolated("V0 must be empty".into()));
    }
    if !gs.group().is_abelian() {
        return Err(HoloError::HypothesisViolated("group must be abelian".into()));
    }
    // Symmetric input: U_V(g)|ψ⟩ = |ψ⟩ for every g.
    let vfact = gs.sys().vertex_fact();
    for g in 0..gs.group().order() {
        let u = gs.sys().global_symmetry(g);
        let moved = crate::tensor::apply_to_state(&embed(&u, &vfact)?, psi)?;
        let diff: f64 = moved
            .amplitudes
            .iter()
            .zip(psi.amplitudes.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if diff > 1e-9 {
            return Err(HoloError::HypothesisViolated(format!(
                "input state is not symmetric (deviation {diff:e} at element {g})"
            )));
        }
    }
    let gauged = symmetric_sector_map(gs, psi)?;
    let mut a_labels: BTreeSet<Label> = region.iter().map(|&v| Label::Vertex(v)).collect();
    let mut cut = 0usize;
    for &(x, y) in gs.sys().graph.edges() {
        let inside = (region.contains(&x) as usize) + (region.contains(&y) as usize);
        match inside {
            2 => {
                a_labels.insert(Label::Edge(x, y));
            }
            1 => cut += 1,
            _ => {}
        }
    }
    let rho_gauged = gauged.reduced_density(&a_labels)?;
    let lhs = entropy_matrix(&rho_gauged.matrix)?;
    let vertex_labels: BTreeSet<Label> = region.iter().map(|&v| Label::Vertex(v)).collect();
    let rho_plain = psi.reduced_density(&vertex_labels)?;
    let s_plain = entropy_matrix(&rho_plain.matrix)?;
    let rhs = (cut as f64 - 1.0) * (gs.group().order() as f64).ln() + s_plain;
    Ok(EntropyCheck { lhs, rhs, cut })
}

/// Boundary entropy of a region against S(ρ_{E(R)}) + |γ_R|·ln χ for a code
/// with an unconstrained bulk (χ is the uniform boundary leg dimension).
pub fn holo_rt_check(
    code: &DenseHoloCode,
    rho_bulk: &CMat,
    region: &BTreeSet<u32>,
    chi: usize,
) -> Result<EntropyCheck, HoloError> {
    let boundary_rho = code.encoder.push(rho_bulk);
    let region_labels = code.site_labels(region.iter().copied());
    let rho_r = crate::tensor::partial_trace_op(
        &crate::tensor::LabeledOperator::full(boundary_rho, code.boundary_fact.clone()),
        &region_labels,
    )?;
    let lhs = entropy_matrix(&rho_r.matrix)?;
    let wedge = greedy_wedge(&code.graph, region);
    let keep: BTreeSet<Label> = wedge
        .set
        .vertices
        .iter()
        .map(|&v| Label::Vertex(v))
        .collect();
    let s_wedge = if keep.is_empty() {
        0.0
    } else {
        let rho_op = crate::tensor::LabeledOperator::full(
            rho_bulk.clone(),
            code.sys.vertex_fact(),
        );
        let reduced = crate::tensor::partial_trace_op(&rho_op, &keep)?;
        entropy_matrix(&reduced.matrix)?
    };
    let cut = wedge.cut.len();
    let rhs = s_wedge + cut as f64 * (chi as f64).ln();
    Ok(EntropyCheck { lhs, rhs, cut })
}
