//! Dense-backend holographic codes at desk scale: the single-tile HaPPY
//! code, the grand-orthogonality tensor, and mini LOTE codes on single-tile
//! and two-tile graphs for groups beyond Z2.

use super::tiling::Tiling;
use super::{BulkConstraint, HoloError};
use crate::gauging::{GaugeStructure, SymmetricSystem};
use crate::graph::{LabeledGraph, PlanarEmbedding};
use crate::group::{FiniteGroup, Irrep, IrrepSet};
use crate::linalg::{self, eigh, matmul, CMat, C64};
use crate::qec::{five_qubit_code, CodeIsometry};
use crate::tensor::{Factorization, Label, StateVector, Subsystem};
use std::collections::{BTreeMap, BTreeSet};

/// The grand-orthogonality tensor W: L²(G) → (⊕_r H_r) ⊗ (⊕_r H_r̄),
/// |g⟩ ↦ Σ_r √(n_r/|G|) Σ_ij π^r_ij(g)* |i⟩_r |j⟩_r̄.
///
/// The left regular action is implemented on the left factor alone
/// (⊕_r π̄^r(h)) and the right regular action on the right factor
/// (⊕_r π^r(h)).
pub fn grand_orthogonality_tensor(
    group: &FiniteGroup,
    set: &IrrepSet,
    input_label: Label,
    left_label: Label,
    right_label: Label,
) -> CodeIsometry {
    let dim_sum = set.dim_sum();
    let order = group.order();
    let logical = Factorization::new(vec![Subsystem::new(input_label, order)]).unwrap();
    let physical = Factorization::new(vec![
        Subsystem::new(left_label, dim_sum),
        Subsystem::new(right_label, dim_sum),
    ])
    .unwrap();
    // Canonical factor order may place right before left; use strides.
    let strides = physical.strides();
    let l_pos = physical.position(left_label).unwrap();
    let r_pos = physical.position(right_label).unwrap();
    let mut m = CMat::zeros((dim_sum * dim_sum, order));
    let mut offset = 0;
    for r in &set.irreps {
        let scale = ((r.dim as f64) / order as f64).sqrt();
        for g in 0..order {
            for i in 0..r.dim {
                for j in 0..r.dim {
                    let row = (offset + i) * strides[l_pos] + (offset + j) * strides[r_pos];
                    m[(row, g)] = r.matrices[g][(i, j)].conj() * C64::new(scale, 0.0);
                }
            }
        }
        offset += r.dim;
    }
    CodeIsometry::new(m, logical, physical)
}

/// ⊕_r π̄^r(h): the left-factor implementation of U^L(h).
pub fn got_left_action(set: &IrrepSet, h: usize) -> CMat {
    direct_sum(set, |r| {
        let mut m = r.matrices[h].clone();
        m.mapv_inplace(|z| z.conj());
        m
    })
}

/// ⊕_r π^r(h): the right-factor implementation of U^R(h).
pub fn got_right_action(set: &IrrepSet, h: usize) -> CMat {
    direct_sum(set, |r| r.matrices[h].clone())
}

fn direct_sum(set: &IrrepSet, f: impl Fn(&Irrep) -> CMat) -> CMat {
    let dim = set.dim_sum();
    let mut out = CMat::zeros((dim, dim));
    let mut off = 0;
    for r in &set.irreps {
        let block = f(r);
        for i in 0..r.dim {
            for j in 0..r.dim {
                out[(off + i, off + j)] = block[(i, j)];
            }
        }
        off += r.dim;
    }
    out
}

/// Dense holographic code: a bulk symmetric system over a dangling-edge
/// graph, an optional gauge constraint, and an encoding isometry onto
/// labeled boundary site factors.
#[derive(Debug, Clone)]
pub struct DenseHoloCode {
    pub graph: LabeledGraph,
    pub constraint: BulkConstraint,
    pub sys: SymmetricSystem,
    pub gauge: Option<GaugeStructure>,
    /// Orthonormal basis (columns) of the constrained bulk subspace inside
    /// the pre-gauged factorization; None when the bulk is the vertex
    /// factorization.
    pub bulk_basis: Option<CMat>,
    /// Unconstrained bulk → boundary map (on the pre-gauged factorization
    /// when the code has edge degrees of freedom, else the vertex one).
    pub pre_encoder: CodeIsometry,
    /// Constrained encoder: pre_encoder restricted to the bulk basis.
    pub encoder: CodeIsometry,
    pub boundary_fact: Factorization,
    pub site_factors: BTreeMap<u32, Vec<Label>>,
    pub boundary_cycle: Vec<u32>,
    /// Per-site boundary symmetry, when known (HaPPY) or induced (Thm 4.2).
    pub boundary_reps: BTreeMap<u32, Irrep>,
}

impl DenseHoloCode {
    pub fn site_labels(&self, region: impl IntoIterator<Item = u32>) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        for v in region {
            out.extend(self.site_factors[&v].iter().copied());
        }
        out
    }

    /// Logical matrix (in the constrained basis) of a bulk operator given on
    /// the pre-encoder's logical factorization.
    pub fn bulk_logical(&self, op: &CMat) -> CMat {
        match &self.bulk_basis {
            Some(b) => matmul(&linalg::matmul_hc_left(b, op), b),
            None => op.clone(),
        }
    }

    /// The boundary global symmetry ∏ site reps, when boundary_reps is set.
    pub fn boundary_symmetry(&self, g: usize) -> CMat {
        let mut acc = linalg::identity(self.boundary_fact.total_dim());
        for (&site, rep) in &self.boundary_reps {
            let labels = &self.site_factors[&site];
            let fact = self
                .boundary_fact
                .restrict(&labels.iter().copied().collect())
                .unwrap();
            let op = crate::tensor::LabeledOperator::full(rep.matrices[g].clone(), fact);
            acc = crate::tensor::apply_to_matrix_left(&op, &acc, &self.boundary_fact).unwrap();
        }
        acc
    }
}

/// A 2-dimensional unitary representation used for bulk vertex spaces: the
/// first 2-dimensional irrep when one exists, else diag(1, χ(g)) with χ the
/// first nontrivial character.
pub fn qubit_rep(group: &FiniteGroup, set: &IrrepSet) -> Irrep {
    if let Some(r) = set.irreps.iter().find(|r| r.dim == 2) {
        return r.clone();
    }
    if group.order() == 1 {
        return Irrep {
            dim: 2,
            matrices: vec![linalg::identity(2)],
        };
    }
    let trivial = set.trivial_index();
    let chi = set
        .irreps
        .iter()
        .enumerate()
        .find(|(k, r)| *k != trivial && r.dim == 1)
        .map(|(_, r)| r)
        .expect("nontrivial character");
    let matrices: Vec<CMat> = (0..group.order())
        .map(|g| {
            let mut m = linalg::identity(2);
            m[(1, 1)] = chi.matrices[g][(0, 0)];
            m
        })
        .collect();
    Irrep { dim: 2, matrices }
}

/// The dense HaPPY code at cutoff 0: one bulk qubit encoded by the
/// five-qubit code, with the X-generated Z2 global/global duality.
pub fn build_happy_dense() -> DenseHoloCode {
    let graph = Tiling::generate(0).dual_graph();
    let group = FiniteGroup::cyclic(2).unwrap();
    let set = crate::group::irreps(&group).unwrap();
    let rep = qubit_rep(&group, &set);
    let sys =
        SymmetricSystem::new(graph.clone(), group, BTreeMap::from([(0u32, rep.clone())])).unwrap();
    let five = five_qubit_code();
    // Boundary: one qubit per site, labels Site(16·s).
    let boundary_fact = Factorization::new(
        (1..=5u32)
            .map(|s| Subsystem::new(Label::Site(16 * s), 2))
            .collect(),
    )
    .unwrap();
    let logical_fact = sys.vertex_fact();
    let encoder = CodeIsometry::new(five.matrix.clone(), logical_fact, boundary_fact.clone());
    let mut site_factors = BTreeMap::new();
    let mut boundary_reps = BTreeMap::new();
    for s in 1..=5u32 {
        site_factors.insert(s, vec![Label::Site(16 * s)]);
        boundary_reps.insert(s, rep.clone());
    }
    DenseHoloCode {
        graph,
        constraint: BulkConstraint::Unconstrained,
        sys,
        gauge: None,
        bulk_basis: None,
        pre_encoder: encoder.clone(),
        encoder,
        boundary_fact,
        site_factors,
        boundary_cycle: (1..=5).collect(),
        boundary_reps,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiniGraph {
    /// The cutoff-0 pentagon: one bulk vertex, five dangling edges.
    SingleTile,
    /// Two adjacent bulk vertices with two dangling edges each.
    TwoTile,
}

fn two_tile_graph() -> LabeledGraph {
    let cyclic_order = BTreeMap::from([
        (0u32, vec![(2u32, 0u32), (3, 0), (0, 1)]),
        (1u32, vec![(0, 1), (4, 1), (5, 1)]),
    ]);
    let boundary: BTreeSet<u32> = (0..=5).collect();
    LabeledGraph::new(
        &[(0, 1), (1, 1), (2, 0), (3, 0), (4, 0), (5, 0)],
        &[(0, 1), (2, 0), (3, 0), (4, 1), (5, 1)],
        Some(PlanarEmbedding {
            cyclic_order,
            boundary,
        }),
    )
    .unwrap()
}

/// Builds the desk-scale dense LOTE code.
///
/// Single tile: each dangling edge's L²(G) space sits directly on its
/// boundary site, and the bulk vertex qubit is spread over the sites by the
/// five-qubit code. Two tiles: the interior edge passes through the
/// grand-orthogonality tensor with its left (right) factor placed on a site
/// adjacent to e⁻ (e⁺), and vertex spaces sit on one site each.
pub fn build_lote_dense(
    kind: MiniGraph,
    group: FiniteGroup,
    constraint: BulkConstraint,
) -> Result<DenseHoloCode, HoloError> {
    let set = crate::group::irreps(&group).map_err(crate::gauging::GaugingError::Group)?;
    match kind {
        MiniGraph::SingleTile => {
            if group.order() > 3 {
                return Err(HoloError::ScaleExceeded(format!(
                    "single-tile dense LOTE supports |G| <= 3, got {}",
                    group.order()
                )));
            }
            build_single_tile(group, set, constraint)
        }
        MiniGraph::TwoTile => {
            if group.order() > 4 || set.dim_sum() > group.order() {
                return Err(HoloError::ScaleExceeded(format!(
                    "two-tile dense LOTE supports abelian groups up to order 4, got {} (leg dimension {})",
                    group.name(),
                    set.dim_sum()
                )));
            }
            build_two_tile(group, set, constraint)
        }
    }
}

fn build_single_tile(
    group: FiniteGroup,
    set: IrrepSet,
    constraint: BulkConstraint,
) -> Result<DenseHoloCode, HoloError> {
    let graph = Tiling::generate(0).dual_graph();
    let order = group.order();
    let rep = qubit_rep(&group, &set);
    let sys = SymmetricSystem::new(graph.clone(), group, BTreeMap::from([(0u32, rep)]))?;
    // Boundary: per site s (1..=5): carrier Site(16s) of dim |G| and a code
    // qubit Site(16s + 1).
    let mut subs = Vec::new();
    let mut site_factors = BTreeMap::new();
    for s in 1..=5u32 {
        subs.push(Subsystem::new(Label::Site(16 * s), order));
        subs.push(Subsystem::new(Label::Site(16 * s + 1), 2));
        site_factors.insert(s, vec![Label::Site(16 * s), Label::Site(16 * s + 1)]);
    }
    let boundary_fact = Factorization::new(subs)?;
    let code_fact = Factorization::new(
        (1..=5u32)
            .map(|s| Subsystem::new(Label::Site(16 * s + 1), 2))
            .collect(),
    )?;
    let carrier_fact = Factorization::new(
        (1..=5u32)
            .map(|s| Subsystem::new(Label::Site(16 * s), order))
            .collect(),
    )?;
    let five = five_qubit_code();
    let lambda = sys.lambda_fact();
    let dv = lambda.total_dim();
    let mut pre = CMat::zeros((boundary_fact.total_dim(), dv));
    let lambda_dims: Vec<usize> = lambda.subsystems().iter().map(|s| s.dim).collect();
    let pos = |l: Label| lambda.position(l).expect("lambda label");
    for col in 0..dv {
        let mut rem = col;
        let mut digits = vec![0usize; lambda_dims.len()];
        for k in (0..lambda_dims.len()).rev() {
            digits[k] = rem % lambda_dims[k];
            rem /= lambda_dims[k];
        }
        let k_vertex = digits[pos(Label::Vertex(0))];
        let code_col = five.matrix.column(k_vertex).to_owned();
        let code_state = StateVector::new(code_col, code_fact.clone());
        let mut carrier_index = 0usize;
        for s in 1..=5u32 {
            carrier_index = carrier_index * order + digits[pos(Label::Edge(s, 0))];
        }
        let carrier_state = StateVector::basis(&carrier_fact, carrier_index);
        let full = code_state.tensor(&carrier_state)?;
        for r in 0..full.amplitudes.len() {
            pre[(r, col)] = full.amplitudes[r];
        }
    }
    let pre_encoder = CodeIsometry::new(pre, lambda.clone(), boundary_fact.clone());
    finish_dense_lote(
        graph,
        sys,
        constraint,
        pre_encoder,
        boundary_fact,
        site_factors,
        (1..=5).collect(),
    )
}

fn build_two_tile(
    group: FiniteGroup,
    set: IrrepSet,
    constraint: BulkConstraint,
) -> Result<DenseHoloCode, HoloError> {
    let graph = two_tile_graph();
    let order = group.order();
    let dim_sum = set.dim_sum();
    let rep = qubit_rep(&group, &set);
    let sys = SymmetricSystem::new(
        graph.clone(),
        group.clone(),
        BTreeMap::from([(0u32, rep.clone()), (1u32, rep)]),
    )?;
    // Sites: 2 {carrier, vertex-carrier(v0)}, 3 {carrier, W-right},
    //        4 {carrier, vertex-carrier(v1)}, 5 {carrier, W-left}.
    let carrier = |s: u32| Label::Site(16 * s);
    let extra = |s: u32| Label::Site(16 * s + 1);
    let mut subs = vec![
        Subsystem::new(carrier(2), order),
        Subsystem::new(extra(2), 2),
        Subsystem::new(carrier(3), order),
        Subsystem::new(extra(3), dim_sum),
        Subsystem::new(carrier(4), order),
        Subsystem::new(extra(4), 2),
        Subsystem::new(carrier(5), order),
        Subsystem::new(extra(5), dim_sum),
    ];
    subs.sort_by_key(|s| s.label);
    let boundary_fact = Factorization::new(subs)?;
    let site_factors: BTreeMap<u32, Vec<Label>> = (2..=5u32)
        .map(|s| (s, vec![carrier(s), extra(s)]))
        .collect();
    // Interior edge (0,1): e⁺ = 0, e⁻ = 1. Left multiplication acts at e⁻,
    // so the left factor goes to site 5 (adjacent to vertex 1) and the
    // right factor to site 3 (adjacent to vertex 0).
    let got = grand_orthogonality_tensor(&group, &set, Label::Aux(0), extra(5), extra(3));
    let got_fact = Factorization::new(vec![
        Subsystem::new(extra(3), dim_sum),
        Subsystem::new(extra(5), dim_sum),
    ])?;
    let lambda = sys.lambda_fact();
    let dv = lambda.total_dim();
    let lambda_dims: Vec<usize> = lambda.subsystems().iter().map(|s| s.dim).collect();
    let pos = |l: Label| lambda.position(l).expect("lambda label");
    let vx_fact = |s: u32| Factorization::new(vec![Subsystem::new(extra(s), 2)]).unwrap();
    let carrier_fact =
        |s: u32| Factorization::new(vec![Subsystem::new(carrier(s), order)]).unwrap();
    // Dangling edge of each site: sites 2 and 3 hang off vertex 0, sites 4
    // and 5 off vertex 1.
    let dangling_edge = |s: u32| -> Label {
        if s <= 3 {
            Label::Edge(s, 0)
        } else {
            Label::Edge(s, 1)
        }
    };
    let mut pre = CMat::zeros((boundary_fact.total_dim(), dv));
    for col in 0..dv {
        let mut rem = col;
        let mut digits = vec![0usize; lambda_dims.len()];
        for k in (0..lambda_dims.len()).rev() {
            digits[k] = rem % lambda_dims[k];
            rem /= lambda_dims[k];
        }
        let k0 = digits[pos(Label::Vertex(0))];
        let k1 = digits[pos(Label::Vertex(1))];
        let g_int = digits[pos(Label::Edge(0, 1))];
        let mut state = StateVector::basis(&vx_fact(2), k0)
            .tensor(&StateVector::basis(&vx_fact(4), k1))?;
        let got_col = StateVector::new(got.matrix.column(g_int).to_owned(), got_fact.clone());
        state = state.tensor(&got_col)?;
        for s in 2..=5u32 {
            let d = digits[pos(dangling_edge(s))];
            state = state.tensor(&StateVector::basis(&carrier_fact(s), d))?;
        }
        for r in 0..state.amplitudes.len() {
            pre[(r, col)] = state.amplitudes[r];
        }
    }
    let pre_encoder = CodeIsometry::new(pre, lambda.clone(), boundary_fact.clone());
    finish_dense_lote(
        graph,
        sys,
        constraint,
        pre_encoder,
        boundary_fact,
        site_factors,
        (2..=5).collect(),
    )
}

fn finish_dense_lote(
    graph: LabeledGraph,
    sys: SymmetricSystem,
    constraint: BulkConstraint,
    pre_encoder: CodeIsometry,
    boundary_fact: Factorization,
    site_factors: BTreeMap<u32, Vec<Label>>,
    boundary_cycle: Vec<u32>,
) -> Result<DenseHoloCode, HoloError> {
    let (gauge, bulk_basis, encoder) = match constraint {
        BulkConstraint::Unconstrained => (None, None, pre_encoder.clone()),
        BulkConstraint::GaugeInvariant => {
            let gs = GaugeStructure::new(sys.clone())?;
            let basis = projector_basis(&gs.pi_gi);
            let enc = restrict_encoder(&pre_encoder, &basis, boundary_fact.clone());
            (Some(gs), Some(basis), enc)
        }
        BulkConstraint::FluxFree => {
            let gs = GaugeStructure::new(sys.clone())?;
            let gmap = crate::gauging::gauging_map(&gs, true)?;
            let basis = gmap.matrix.clone();
            let enc = restrict_encoder(&pre_encoder, &basis, boundary_fact.clone());
            (Some(gs), Some(basis), enc)
        }
    };
    Ok(DenseHoloCode {
        graph,
        constraint,
        sys,
        gauge,
        bulk_basis,
        pre_encoder,
        encoder,
        boundary_fact,
        site_factors,
        boundary_cycle,
        boundary_reps: BTreeMap::new(),
    })
}

/// Orthonormal basis of a projector's image (eigenvectors at eigenvalue 1).
pub fn projector_basis(p: &CMat) -> CMat {
    let (vals, vecs) = eigh(p);
    let cols: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > 0.5).collect();
    let mut b = CMat::zeros((p.nrows(), cols.len()));
    for (j, &k) in cols.iter().enumerate() {
        for i in 0..p.nrows() {
            b[(i, j)] = vecs[(i, k)];
        }
    }
    b
}

fn restrict_encoder(
    pre: &CodeIsometry,
    basis: &CMat,
    boundary_fact: Factorization,
) -> CodeIsometry {
    let m = matmul(&pre.matrix, basis);
    let logical =
        Factorization::new(vec![Subsystem::new(Label::Logical(0), basis.ncols())]).unwrap();
    CodeIsometry::new(m, logical, boundary_fact)
}
