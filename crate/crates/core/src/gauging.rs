//! Gauge transformations, gauge projectors, the gauging isometry and its
//! twisted variants, Wilson operators, flux sectors, and operator dressing
//! and undressing.
//!
//! Conventions: an edge e = (e⁺, e⁻) carries an L²(G) space; the gauge
//! transformation at v is A_v(g) = U_v(g) ∏_{e⁺=v} U^R_e(g) ∏_{e⁻=v} U^L_e(g),
//! and the gauging map sends |ψ⟩ to Π_GI (|ψ⟩ ⊗ ⊗_e |I⟩_e) with
//! normalization κ² = |G|^(−|V₁|).

use crate::graph::{connectivity, ConnectivityMode, GraphPath, LabeledGraph};
use crate::group::{haar_average, irreps, Elem, FiniteGroup, Irrep, IrrepSet, Side};
use crate::linalg::{self, matmul, CMat, C64};
use crate::qec::CodeIsometry;
use crate::tensor::{
    apply_to_matrix_left, apply_to_state, commutator_norm, embed, Factorization, Label,
    LabeledOperator, StateVector, Subsystem, TensorError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaugingError {
    #[error("vertex representation at {0} is not a unitary representation")]
    BadVertexRep(u32),
    #[error("the gauging map is not an isometry here: {0}")]
    NotIsometric(String),
    #[error("state is annihilated by the symmetric-sector map")]
    NullState,
    #[error("element {0} is not central")]
    NotCentral(Elem),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("operator does not preserve the image (commutator norm {0:e})")]
    NotImagePreserving(f64),
    #[error("undressed operator leaks outside the path vertices (deviation {0:e}); the path-avoidance hypothesis may be violated")]
    SupportLeak(f64),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// An unconstrained system transforming under a global symmetry: a labeled
/// graph, a finite group, and a unitary representation on each vertex space
/// (dimension-1 trivial representations are allowed, and are the default).
#[derive(Debug, Clone)]
pub struct SymmetricSystem {
    pub graph: LabeledGraph,
    pub group: FiniteGroup,
    vertex_reps: BTreeMap<u32, Irrep>,
}

impl SymmetricSystem {
    pub fn new(
        graph: LabeledGraph,
        group: FiniteGroup,
        vertex_reps: BTreeMap<u32, Irrep>,
    ) -> Result<Self, GaugingError> {
        for (&v, rep) in &vertex_reps {
            if rep.matrices.len() != group.order() || !rep.is_representation(&group, 1e-9) {
                return Err(GaugingError::BadVertexRep(v));
            }
        }
        Ok(SymmetricSystem {
            graph,
            group,
            vertex_reps,
        })
    }

    pub fn vertex_dim(&self, v: u32) -> usize {
        self.vertex_reps.get(&v).map(|r| r.dim).unwrap_or(1)
    }

    /// U_v(g) as a matrix on the vertex space.
    pub fn vertex_rep(&self, v: u32, g: Elem) -> CMat {
        match self.vertex_reps.get(&v) {
            Some(r) => r.matrices[g].clone(),
            None => linalg::identity(1),
        }
    }

    /// Factorization of the ungauged system H_V.
    pub fn vertex_fact(&self) -> Factorization {
        Factorization::new(
            self.graph
                .vertices()
                .iter()
                .map(|&v| Subsystem::new(Label::Vertex(v), self.vertex_dim(v)))
                .collect(),
        )
        .expect("vertex factorization")
    }

    /// Factorization of the pre-gauged system H_Λ (vertices plus edges).
    pub fn lambda_fact(&self) -> Factorization {
        let mut subs: Vec<Subsystem> = self
            .graph
            .vertices()
            .iter()
            .map(|&v| Subsystem::new(Label::Vertex(v), self.vertex_dim(v)))
            .collect();
        for &(a, b) in self.graph.edges() {
            subs.push(Subsystem::new(Label::Edge(a, b), self.group.order()));
        }
        Factorization::new(subs).expect("pre-gauged factorization")
    }

    pub fn edge_fact(&self) -> Factorization {
        Factorization::new(
            self.graph
                .edges()
                .iter()
                .map(|&(a, b)| Subsystem::new(Label::Edge(a, b), self.group.order()))
                .collect(),
        )
        .expect("edge factorization")
    }

    /// Global symmetry transformation U_V(g) = ∏_v U_v(g) on the vertex
    /// factorization.
    pub fn global_symmetry(&self, g: Elem) -> LabeledOperator {
        let fact = self.vertex_fact();
        let mut acc = LabeledOperator::identity(&fact);
        for (&v, rep) in &self.vertex_reps {
            let local = LabeledOperator::full(
                rep.matrices[g].clone(),
                Factorization::new(vec![Subsystem::new(Label::Vertex(v), rep.dim)]).unwrap(),
            );
            acc.matrix = apply_to_matrix_left(&local, &acc.matrix, &fact).unwrap();
            acc.support.insert(Label::Vertex(v));
        }
        acc
    }
}

/// The pre-gauging system: the ungauged system plus one L²(G) space per edge.
#[derive(Debug, Clone)]
pub struct PreGaugedSystem {
    pub sys: SymmetricSystem,
}

impl PreGaugedSystem {
    pub fn new(sys: SymmetricSystem) -> Self {
        PreGaugedSystem { sys }
    }
}

/// An assignment of a group element to every edge, used by twisted gauging
/// maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FluxAssignment {
    pub by_edge: BTreeMap<(u32, u32), Elem>,
}

impl FluxAssignment {
    pub fn trivial(graph: &LabeledGraph) -> Self {
        FluxAssignment {
            by_edge: graph.edges().iter().map(|&e| (e, 0)).collect(),
        }
    }

    pub fn get(&self, e: (u32, u32)) -> Elem {
        self.by_edge[&e]
    }

    /// The conjugated assignment ʰφ with ʰφ_e = h⁻¹ φ_e h.
    pub fn conjugated(&self, group: &FiniteGroup, h: Elem) -> Self {
        let hinv = group.inv(h);
        FluxAssignment {
            by_edge: self
                .by_edge
                .iter()
                .map(|(&e, &phi)| (e, group.mul(group.mul(hinv, phi), h)))
                .collect(),
        }
    }
}

/// Gauge transformation A_v(g) on its local support {v} ∪ E(v).
pub fn gauge_transformation(pre: &PreGaugedSystem, v: u32, g: Elem) -> LabeledOperator {
    let sys = &pre.sys;
    let mut subs = vec![Subsystem::new(Label::Vertex(v), sys.vertex_dim(v))];
    for &(a, b) in &sys.graph.incident(v) {
        subs.push(Subsystem::new(Label::Edge(a, b), sys.group.order()));
    }
    let fact = Factorization::new(subs).expect("local factorization");
    let mut acc = LabeledOperator::identity(&fact);
    let vop = LabeledOperator::full(
        sys.vertex_rep(v, g),
        Factorization::new(vec![Subsystem::new(Label::Vertex(v), sys.vertex_dim(v))]).unwrap(),
    );
    acc.matrix = apply_to_matrix_left(&vop, &acc.matrix, &fact).unwrap();
    for &(a, b) in &sys.graph.edges_plus(v) {
        let eop = LabeledOperator::full(
            sys.group.right_regular(g),
            Factorization::new(vec![Subsystem::new(Label::Edge(a, b), sys.group.order())])
                .unwrap(),
        );
        acc.matrix = apply_to_matrix_left(&eop, &acc.matrix, &fact).unwrap();
    }
    for &(a, b) in &sys.graph.edges_minus(v) {
        let eop = LabeledOperator::full(
            sys.group.left_regular(g),
            Factorization::new(vec![Subsystem::new(Label::Edge(a, b), sys.group.order())])
                .unwrap(),
        );
        acc.matrix = apply_to_matrix_left(&eop, &acc.matrix, &fact).unwrap();
    }
    let mut support: BTreeSet<Label> = fact.label_set();
    if sys.vertex_dim(v) == 1 {
        support.remove(&Label::Vertex(v));
    }
    LabeledOperator::new(acc.matrix, fact, support)
}

/// Gauge structure: the pre-gauged system with its local gauge projectors,
/// the gauge-invariance projector Π_GI, the normalization κ, and the
/// designated faithful representation for Wilson operators.
#[derive(Debug, Clone)]
pub struct GaugeStructure {
    pub pre: PreGaugedSystem,
    pub pi_v: BTreeMap<u32, LabeledOperator>,
    /// Π_GI as a dense matrix on the pre-gauged factorization.
    pub pi_gi: CMat,
    pub lambda_fact: Factorization,
    /// κ² as an exact rational 1 / |G|^{|V₁|}.
    pub kappa_sq_denominator: u128,
    pub irrep_set: IrrepSet,
}

impl GaugeStructure {
    pub fn new(sys: SymmetricSystem) -> Result<Self, GaugingError> {
        let pre = PreGaugedSystem::new(sys);
        let lambda_fact = pre.sys.lambda_fact();
        let d = lambda_fact.total_dim();
        let mut pi_v = BTreeMap::new();
        let mut pi_gi = linalg::identity(d);
        for v in pre.sys.graph.v1() {
            let avg = local_gauge_projector(&pre, v);
            // Π_GI built as the ordered product over ascending V1 ids.
            pi_gi = apply_to_matrix_left(&avg, &pi_gi, &lambda_fact)?;
            pi_v.insert(v, avg);
        }
        let irrep_set = irreps(&pre.sys.group)?;
        let kappa_sq_denominator =
            (pre.sys.group.order() as u128).pow(pre.sys.graph.v1().len() as u32);
        Ok(GaugeStructure {
            pre,
            pi_v,
            pi_gi,
            lambda_fact,
            kappa_sq_denominator,
            irrep_set,
        })
    }

    pub fn sys(&self) -> &SymmetricSystem {
        &self.pre.sys
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.pre.sys.group
    }

    pub fn kappa(&self) -> f64 {
        1.0 / (self.kappa_sq_denominator as f64).sqrt()
    }

    /// Applies Π_GI to a state.
    pub fn project_gi(&self, state: &StateVector) -> StateVector {
        let mut cur = state.clone();
        for pv in self.pi_v.values() {
            cur = apply_to_state(pv, &cur).expect("projector application");
        }
        cur
    }

    /// The trivial edge configuration index within the edge part (all |I⟩).
    pub fn edge_config_index(&self, assignment: &FluxAssignment) -> usize {
        let strides = self.lambda_fact.strides();
        let mut idx = 0;
        for &(a, b) in self.sys().graph.edges() {
            let pos = self.lambda_fact.position(Label::Edge(a, b)).unwrap();
            idx += assignment.get((a, b)) * strides[pos];
        }
        idx
    }
}

/// Π_v = ∫dg A_v(g) on the local support of A_v.
pub fn local_gauge_projector(pre: &PreGaugedSystem, v: u32) -> LabeledOperator {
    let a0 = gauge_transformation(pre, v, 0);
    let fact = a0.fact.clone();
    let support = a0.support.clone();
    let avg = haar_average(&pre.sys.group, |g| gauge_transformation(pre, v, g).matrix);
    LabeledOperator::new(avg, fact, support)
}

/// All local gauge projectors plus Π_GI; the returned pairs are (v, Π_v) in
/// ascending vertex order.
pub fn gauge_projectors(gs: &GaugeStructure) -> (Vec<(u32, LabeledOperator)>, LabeledOperator) {
    let pairs: Vec<(u32, LabeledOperator)> =
        gs.pi_v.iter().map(|(&v, op)| (v, op.clone())).collect();
    let pi = LabeledOperator::full(gs.pi_gi.clone(), gs.lambda_fact.clone());
    (pairs, pi)
}

/// The NGC (asymptotic) symmetry transformation restricted to W ⊆ V0:
/// ∏_{v∈W} A_v(g), returned on the union of the local supports.
pub fn ngc_symmetry(gs: &GaugeStructure, g: Elem, restrict_to: &BTreeSet<u32>) -> LabeledOperator {
    let v0: BTreeSet<u32> = gs.sys().graph.v0().into_iter().collect();
    assert!(restrict_to.is_subset(&v0), "restriction must lie in V0");
    let mut subs: BTreeMap<Label, usize> = BTreeMap::new();
    for &v in restrict_to {
        subs.insert(Label::Vertex(v), gs.sys().vertex_dim(v));
        for &(a, b) in &gs.sys().graph.incident(v) {
            subs.insert(Label::Edge(a, b), gs.group().order());
        }
    }
    let fact = Factorization::new(
        subs.iter()
            .map(|(&l, &d)| Subsystem::new(l, d))
            .collect(),
    )
    .expect("ngc factorization");
    let mut acc = LabeledOperator::identity(&fact);
    for &v in restrict_to {
        let av = gauge_transformation(&gs.pre, v, g);
        acc.matrix = apply_to_matrix_left(&av, &acc.matrix, &fact).unwrap();
        acc.support.extend(av.support.iter().copied());
    }
    acc
}

/// The gauging map as an isometry (after κ normalization).
///
/// Requires V0 ≠ ∅ and a connected graph when `normalize` is set; a system
/// with V0 = ∅ only supports the state-wise symmetric-sector map.
pub fn gauging_map(gs: &GaugeStructure, normalize: bool) -> Result<CodeIsometry, GaugingError> {
    twisted_gauging_map(gs, &FluxAssignment::trivial(&gs.sys().graph), normalize)
}

/// The twisted gauging map |ψ⟩ ↦ Π_GI (|ψ⟩ ⊗ ⊗_e |φ_e⟩), normalized by the
/// same κ as the plain map.
pub fn twisted_gauging_map(
    gs: &GaugeStructure,
    phi: &FluxAssignment,
    normalize: bool,
) -> Result<CodeIsometry, GaugingError> {
    if normalize {
        if gs.sys().graph.v0().is_empty() {
            return Err(GaugingError::NotIsometric(
                "V0 is empty; the map projects onto the trivial representation — use symmetric_sector_map".into(),
            ));
        }
        if !connectivity(&gs.sys().graph, ConnectivityMode::Full) {
            return Err(GaugingError::NotIsometric("graph is not connected".into()));
        }
    }
    let vertex_fact = gs.sys().vertex_fact();
    let dv = vertex_fact.total_dim();
    let d = gs.lambda_fact.total_dim();
    let edge_offset = gs.edge_config_index(phi);
    // Columns: Π_GI (|i⟩_V ⊗ |φ⟩_E). Vertex labels come first in canonical
    // order only when all vertex ids sort below edge labels, which holds by
    // construction of Label ordering; the vertex flat index must still be
    // mapped through strides.
    let strides = gs.lambda_fact.strides();
    let vdims: Vec<usize> = vertex_fact.subsystems().iter().map(|s| s.dim).collect();
    let vstrides: Vec<usize> = vertex_fact
        .labels()
        .map(|l| strides[gs.lambda_fact.position(l).unwrap()])
        .collect();
    let mut matrix = CMat::zeros((d, dv));
    for i in 0..dv {
        let mut rem = i;
        let mut off = 0;
        for k in (0..vdims.len()).rev() {
            off += (rem % vdims[k]) * vstrides[k];
            rem /= vdims[k];
        }
        let col = StateVector::basis(&gs.lambda_fact, off + edge_offset);
        let projected = gs.project_gi(&col);
        for r in 0..d {
            matrix[(r, i)] = projected.amplitudes[r];
        }
    }
    if normalize {
        let scale = C64::new(1.0 / gs.kappa(), 0.0);
        matrix = matrix * scale;
    }
    Ok(CodeIsometry::new(matrix, vertex_fact, gs.lambda_fact.clone()))
}

/// An NGC flux gauging map ∏_{v∈V0} A_v(h_v) · G, together with the flux
/// assignment it realizes (φ_e = h_{e⁻} h_{e⁺}⁻¹ with h = I off V0).
pub fn ngc_flux_map(
    gs: &GaugeStructure,
    h_by_v0: &BTreeMap<u32, Elem>,
    normalize: bool,
) -> Result<(CodeIsometry, FluxAssignment), GaugingError> {
    let v0: BTreeSet<u32> = gs.sys().graph.v0().into_iter().collect();
    for v in h_by_v0.keys() {
        assert!(v0.contains(v), "flux elements must sit on V0 vertices");
    }
    let g = gs.group();
    let h = |v: u32| -> Elem { h_by_v0.get(&v).copied().unwrap_or(0) };
    let phi = FluxAssignment {
        by_edge: gs
            .sys()
            .graph
            .edges()
            .iter()
            .map(|&(a, b)| ((a, b), g.mul(h(b), g.inv(h(a)))))
            .collect(),
    };
    let iso = twisted_gauging_map(gs, &phi, normalize)?;
    Ok((iso, phi))
}

/// State-wise normalized gauged state for systems with V0 = ∅:
/// Π_GI (|ψ⟩ ⊗ |I⟩_E) / ‖·‖.
pub fn symmetric_sector_map(
    gs: &GaugeStructure,
    psi: &StateVector,
) -> Result<StateVector, GaugingError> {
    let raw = gauged_state_unnormalized(gs, psi)?;
    raw.normalized().map_err(|_| GaugingError::NullState)
}

/// Π_GI (|ψ⟩ ⊗ |I⟩_E) without normalization.
pub fn gauged_state_unnormalized(
    gs: &GaugeStructure,
    psi: &StateVector,
) -> Result<StateVector, GaugingError> {
    assert_eq!(psi.fact, gs.sys().vertex_fact(), "state must live on H_V");
    let mut edge_amp = StateVector::basis(&gs.sys().edge_fact(), 0);
    if gs.sys().graph.edges().is_empty() {
        edge_amp = StateVector::new(ndarray::Array1::ones(1), Factorization::scalar());
    }
    let full = psi.tensor(&edge_amp)?;
    Ok(gs.project_gi(&full))
}

#[derive(Debug, Clone)]
pub enum WilsonKind {
    /// W^e_ij |g⟩ = r_ij(g) |g⟩ on a single edge.
    Link { edge: (u32, u32), reversed: bool },
    /// Traced holonomy around a cycle with all vertices in V1.
    Loop { cycle: GraphPath },
    /// Matrix entry of the holonomy along an NGC-to-NGC path.
    Line { path: GraphPath },
}

#[derive(Debug, Clone, Copy)]
pub enum WilsonRep {
    Faithful,
    IrrepIndex(usize),
}

fn wilson_rep<'a>(gs: &'a GaugeStructure, rep: WilsonRep) -> &'a Irrep {
    match rep {
        WilsonRep::Faithful => &gs.irrep_set.faithful,
        WilsonRep::IrrepIndex(k) => &gs.irrep_set.irreps[k],
    }
}

/// Holonomy of an edge configuration along a walk: the ordered product of
/// g_e^{σ} with σ = −1 when the step runs with the edge orientation and
/// σ = +1 against it.
pub fn walk_holonomy(
    group: &FiniteGroup,
    steps: &[((u32, u32), bool)],
    config: &dyn Fn((u32, u32)) -> Elem,
) -> Elem {
    let mut acc = 0usize;
    for &(e, forward) in steps {
        let ge = config(e);
        let factor = if forward { group.inv(ge) } else { ge };
        acc = group.mul(acc, factor);
    }
    acc
}

/// Wilson operator: an edge-diagonal operator on the edges of the given
/// link, loop or line.
pub fn wilson_operator(
    gs: &GaugeStructure,
    kind: &WilsonKind,
    rep: WilsonRep,
    indices: (usize, usize),
) -> Result<LabeledOperator, GaugingError> {
    let r = wilson_rep(gs, rep).clone();
    let group = gs.group();
    let (i, j) = indices;
    match kind {
        WilsonKind::Link { edge, reversed } => {
            if gs.sys().graph.edge_between(edge.0, edge.1) != Some(*edge) {
                return Err(GaugingError::InvalidPath(format!(
                    "edge ({},{}) absent",
                    edge.0, edge.1
                )));
            }
            let fact = Factorization::new(vec![Subsystem::new(
                Label::Edge(edge.0, edge.1),
                group.order(),
            )])
            .unwrap();
            let mut m = CMat::zeros((group.order(), group.order()));
            for g in 0..group.order() {
                let e = if *reversed { group.inv(g) } else { g };
                m[(g, g)] = r.matrices[e][(i, j)];
            }
            Ok(LabeledOperator::full(m, fact))
        }
        WilsonKind::Loop { cycle } => {
            if !cycle.is_cycle() {
                return Err(GaugingError::InvalidPath("not a closed cycle".into()));
            }
            for &v in &cycle.vertices {
                if gs.sys().graph.label(v) != 1 {
                    return Err(GaugingError::InvalidPath(format!(
                        "loop vertex {v} is not in V1"
                    )));
                }
            }
            diagonal_walk_operator(gs, cycle, &r, None)
        }
        WilsonKind::Line { path } => {
            let vs = &path.vertices;
            if vs.len() < 2 {
                return Err(GaugingError::InvalidPath("path too short".into()));
            }
            if gs.sys().graph.label(vs[0]) != 0 || gs.sys().graph.label(*vs.last().unwrap()) != 0
            {
                return Err(GaugingError::InvalidPath(
                    "line endpoints must be NGC vertices".into(),
                ));
            }
            for &v in &vs[1..vs.len() - 1] {
                if gs.sys().graph.label(v) != 1 {
                    return Err(GaugingError::InvalidPath(format!(
                        "line interior vertex {v} is not in V1"
                    )));
                }
            }
            diagonal_walk_operator(gs, path, &r, Some((i, j)))
        }
    }
}

/// Builds the diagonal operator on the walk's edges whose value at an edge
/// configuration is Tr r(holonomy) (loops) or r_ij(holonomy) (lines).
fn diagonal_walk_operator(
    gs: &GaugeStructure,
    walk: &GraphPath,
    r: &Irrep,
    entry: Option<(usize, usize)>,
) -> Result<LabeledOperator, GaugingError> {
    let steps = walk
        .step_edges(&gs.sys().graph)
        .ok_or_else(|| GaugingError::InvalidPath("missing edge along the walk".into()))?;
    let group = gs.group();
    let mut edge_labels: Vec<(u32, u32)> = steps.iter().map(|s| s.0).collect();
    edge_labels.sort_unstable();
    edge_labels.dedup();
    let fact = Factorization::new(
        edge_labels
            .iter()
            .map(|&(a, b)| Subsystem::new(Label::Edge(a, b), group.order()))
            .collect(),
    )?;
    let d = fact.total_dim();
    let dims: Vec<usize> = fact.subsystems().iter().map(|s| s.dim).collect();
    let labels: Vec<Label> = fact.labels().collect();
    let mut m = CMat::zeros((d, d));
    for flat in 0..d {
        // Decode the configuration of each edge in canonical order.
        let mut cfg: BTreeMap<(u32, u32), Elem> = BTreeMap::new();
        let mut rem = flat;
        for k in (0..dims.len()).rev() {
            let g = rem % dims[k];
            rem /= dims[k];
            if let Label::Edge(a, b) = labels[k] {
                cfg.insert((a, b), g);
            }
        }
        let hol = walk_holonomy(group, &steps, &|e| cfg[&e]);
        m[(flat, flat)] = match entry {
            Some((i, j)) => r.matrices[hol][(i, j)],
            None => r.character(hol),
        };
    }
    Ok(LabeledOperator::full(m, fact))
}

/// Central flux operator U^L_e(g) for g in the center of G. It is gauge
/// invariant; for involutions it moreover equals U^R_e(g).
pub fn central_flux_operator(
    gs: &GaugeStructure,
    edge: (u32, u32),
    g: Elem,
) -> Result<LabeledOperator, GaugingError> {
    if !gs.irrep_set.center.contains(&g) {
        return Err(GaugingError::NotCentral(g));
    }
    let fact = Factorization::new(vec![Subsystem::new(
        Label::Edge(edge.0, edge.1),
        gs.group().order(),
    )])?;
    Ok(LabeledOperator::full(gs.group().left_regular(g), fact))
}

/// Classifies every edge configuration as flux-free or not: flux-free means
/// all cycle holonomies are trivial and all NGC-to-NGC line holonomies are
/// trivial, checked through spanning-forest potentials.
pub fn flux_free_edge_mask(gs: &GaugeStructure) -> Vec<bool> {
    let graph = &gs.sys().graph;
    let group = gs.group();
    let edge_fact = gs.sys().edge_fact();
    let dims: Vec<usize> = edge_fact.subsystems().iter().map(|s| s.dim).collect();
    let labels: Vec<Label> = edge_fact.labels().collect();
    let de = edge_fact.total_dim();
    let mut mask = vec![false; de];
    for flat in 0..de {
        let mut cfg: BTreeMap<(u32, u32), Elem> = BTreeMap::new();
        let mut rem = flat;
        for k in (0..dims.len()).rev() {
            let g = rem % dims[k];
            rem /= dims[k];
            if let Label::Edge(a, b) = labels[k] {
                cfg.insert((a, b), g);
            }
        }
        mask[flat] = config_is_flux_free(graph, group, &cfg);
    }
    mask
}

/// A configuration is flux-free iff it can be written as g_e = φ(e⁻) φ(e⁺)⁻¹
/// with a potential φ constant (equal to some h) on each component's V0
/// vertices; equivalently all loops and NGC-to-NGC lines carry trivial
/// holonomy.
fn config_is_flux_free(
    graph: &LabeledGraph,
    group: &FiniteGroup,
    cfg: &BTreeMap<(u32, u32), Elem>,
) -> bool {
    let mut potential: BTreeMap<u32, Elem> = BTreeMap::new();
    for &root in graph.vertices() {
        if potential.contains_key(&root) {
            continue;
        }
        potential.insert(root, 0);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let pv = potential[&v];
            for n in graph.neighbors(v) {
                // φ(e⁻) = g_e φ(e⁺)
                let e = graph.edge_between(v, n).unwrap();
                let pn = if e.0 == v {
                    // v = e⁺, n = e⁻: φ(n) = g_e φ(v)
                    group.mul(cfg[&e], pv)
                } else {
                    // v = e⁻, n = e⁺: φ(n) = g_e⁻¹ φ(v)
                    group.mul(group.inv(cfg[&e]), pv)
                };
                match potential.get(&n) {
                    Some(&existing) => {
                        if existing != pn {
                            return false; // nontrivial cycle holonomy
                        }
                    }
                    None => {
                        potential.insert(n, pn);
                        stack.push(n);
                    }
                }
            }
        }
        // All V0 potentials within this component must agree (trivial lines).
        let mut v0_potential: Option<Elem> = None;
        for &v in graph.vertices() {
            if graph.label(v) == 0 && potential.contains_key(&v) {
                let p = potential[&v];
                match v0_potential {
                    None => v0_potential = Some(p),
                    Some(q) => {
                        if p != q {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Projector onto the flux-free sector inside Π_GI H_Λ.
pub fn flux_free_projector(gs: &GaugeStructure) -> LabeledOperator {
    let mask = flux_free_edge_mask(gs);
    sector_projector_from_mask(gs, &mask)
}

/// (P^E_mask ⊗ 1_V) Π_GI; the mask projector commutes with Π_GI because the
/// masked family is gauge invariant.
fn sector_projector_from_mask(gs: &GaugeStructure, mask: &[bool]) -> LabeledOperator {
    let lambda = &gs.lambda_fact;
    let d = lambda.total_dim();
    let edge_fact = gs.sys().edge_fact();
    let strides = lambda.strides();
    // Offsets of edge configurations inside the full index.
    let mut m = gs.pi_gi.clone();
    if gs.sys().graph.edges().is_empty() {
        return LabeledOperator::full(m, lambda.clone());
    }
    let edims: Vec<usize> = edge_fact.subsystems().iter().map(|s| s.dim).collect();
    let estrides: Vec<usize> = edge_fact
        .labels()
        .map(|l| strides[lambda.position(l).unwrap()])
        .collect();
    // Row r is kept iff its edge part is in the mask.
    let mut keep = vec![false; d];
    let de: usize = edims.iter().product();
    let dv = d / de;
    let vert_fact = gs.sys().vertex_fact();
    let vdims: Vec<usize> = vert_fact.subsystems().iter().map(|s| s.dim).collect();
    let vstrides: Vec<usize> = vert_fact
        .labels()
        .map(|l| strides[lambda.position(l).unwrap()])
        .collect();
    for ei in 0..de {
        if !mask[ei] {
            continue;
        }
        let mut rem = ei;
        let mut eoff = 0;
        for k in (0..edims.len()).rev() {
            eoff += (rem % edims[k]) * estrides[k];
            rem /= edims[k];
        }
        for vi in 0..dv {
            let mut remv = vi;
            let mut voff = 0;
            for k in (0..vdims.len()).rev() {
                voff += (remv % vdims[k]) * vstrides[k];
                remv /= vdims[k];
            }
            keep[eoff + voff] = true;
        }
    }
    for r in 0..d {
        if !keep[r] {
            for c in 0..d {
                m[(r, c)] = C64::new(0.0, 0.0);
            }
        }
    }
    LabeledOperator::full(m, lambda.clone())
}

/// Decomposes Π_GI H_Λ into fixed-flux sectors.
///
/// The commuting Wilson family (all simple loops and NGC-to-NGC lines over
/// all irreps) is edge-diagonal; a seeded random Hermitian combination is
/// sampled and configurations are clustered by its value at 1e−8, following
/// the set-theoretic sector definition.
pub fn flux_sector_decomposition(gs: &GaugeStructure) -> Result<Vec<LabeledOperator>, GaugingError> {
    let graph = &gs.sys().graph;
    let group = gs.group();
    let edge_fact = gs.sys().edge_fact();
    let de = edge_fact.total_dim();
    let bounds = crate::graph::PathBounds {
        max_length: 12,
        max_count: 4096,
    };
    let loops =
        crate::graph::enumerate_paths_and_cycles(graph, crate::graph::PathKind::CycleInBulk, bounds)?;
    let lines =
        crate::graph::enumerate_paths_and_cycles(graph, crate::graph::PathKind::NgcToNgc, bounds)?;
    let dims: Vec<usize> = edge_fact.subsystems().iter().map(|s| s.dim).collect();
    let labels: Vec<Label> = edge_fact.labels().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ec7_0e5);
    let mut values = vec![0.0f64; de];
    let add_diagonal = |vals: &mut Vec<f64>, diag: &dyn Fn(usize) -> C64, rng: &mut ChaCha8Rng| {
        let c = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        for (flat, slot) in vals.iter_mut().enumerate() {
            let z = diag(flat);
            *slot += (c * z + (c * z).conj()).re;
        }
    };
    let decode = |flat: usize| -> BTreeMap<(u32, u32), Elem> {
        let mut cfg = BTreeMap::new();
        let mut rem = flat;
        for k in (0..dims.len()).rev() {
            let g = rem % dims[k];
            rem /= dims[k];
            if let Label::Edge(a, b) = labels[k] {
                cfg.insert((a, b), g);
            }
        }
        cfg
    };
    for walk in loops.iter() {
        let steps = walk.step_edges(graph).unwrap();
        for r in &gs.irrep_set.irreps {
            add_diagonal(
                &mut values,
                &|flat| {
                    let cfg = decode(flat);
                    let hol = walk_holonomy(group, &steps, &|e| cfg[&e]);
                    r.character(hol)
                },
                &mut rng,
            );
        }
    }
    for walk in lines.iter() {
        let steps = walk.step_edges(graph).unwrap();
        let r = &gs.irrep_set.faithful;
        for i in 0..r.dim {
            for j in 0..r.dim {
                add_diagonal(
                    &mut values,
                    &|flat| {
                        let cfg = decode(flat);
                        let hol = walk_holonomy(group, &steps, &|e| cfg[&e]);
                        r.matrices[hol][(i, j)]
                    },
                    &mut rng,
                );
            }
        }
    }
    // Cluster configurations by value.
    let mut order: Vec<usize> = (0..de).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut sectors: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        match sectors.last_mut() {
            Some(cur) if (values[idx] - values[*cur.last().unwrap()]).abs() < 1e-8 => {
                cur.push(idx)
            }
            _ => sectors.push(vec![idx]),
        }
    }
    let mut out = Vec::new();
    for cls in sectors {
        let mut mask = vec![false; de];
        for idx in cls {
            mask[idx] = true;
        }
        let proj = sector_projector_from_mask(gs, &mask);
        let tr = proj.trace().re;
        if tr > 1e-9 {
            out.push(proj);
        }
    }
    Ok(out)
}

/// The Haar average of Lemma-style subgraph conjugations:
/// ∫ ∏_{v∈V_Γ} dg_v (∏ A^Γ_v(g_v)) Q (∏ A^Γ_v(g_v))†, where A^Γ_v uses only
/// the edges of E_Γ. Everything is computed on the subgraph factorization.
pub fn subgraph_average(
    gs: &GaugeStructure,
    q: &LabeledOperator,
    gamma_vertices: &[u32],
    gamma_edges: &[(u32, u32)],
) -> Result<LabeledOperator, GaugingError> {
    let sys = gs.sys();
    let group = gs.group();
    let mut subs: Vec<Subsystem> = gamma_vertices
        .iter()
        .map(|&v| Subsystem::new(Label::Vertex(v), sys.vertex_dim(v)))
        .collect();
    for &(a, b) in gamma_edges {
        subs.push(Subsystem::new(Label::Edge(a, b), group.order()));
    }
    let fact = Factorization::new(subs)?;
    let q_embedded = embed(q, &fact)?;
    // A^Γ_v(g) on the subgraph factorization.
    let a_gamma = |v: u32, g: Elem| -> LabeledOperator {
        let mut op = LabeledOperator::identity(&fact);
        let vop = LabeledOperator::full(
            sys.vertex_rep(v, g),
            Factorization::new(vec![Subsystem::new(Label::Vertex(v), sys.vertex_dim(v))])
                .unwrap(),
        );
        op.matrix = apply_to_matrix_left(&vop, &op.matrix, &fact).unwrap();
        for &(a, b) in gamma_edges {
            let side = if a == v {
                Some(Side::Right)
            } else if b == v {
                Some(Side::Left)
            } else {
                None
            };
            if let Some(side) = side {
                let m = crate::group::regular_action(group, side, g);
                let eop = LabeledOperator::full(
                    m,
                    Factorization::new(vec![Subsystem::new(Label::Edge(a, b), group.order())])
                        .unwrap(),
                );
                op.matrix = apply_to_matrix_left(&eop, &op.matrix, &fact).unwrap();
            }
        }
        op
    };
    let n = gamma_vertices.len();
    let d = fact.total_dim();
    let mut acc = CMat::zeros((d, d));
    let total = group.order().pow(n as u32);
    for assign in 0..total {
        let mut rem = assign;
        let mut conj = linalg::identity(d);
        for &v in gamma_vertices {
            let g = rem % group.order();
            rem /= group.order();
            conj = matmul(&a_gamma(v, g).matrix, &conj);
        }
        let term = matmul(&matmul(&conj, &q_embedded.matrix), &linalg::dagger(&conj));
        acc = acc + term;
    }
    acc = acc / C64::new(total as f64, 0.0);
    Ok(LabeledOperator::full(acc, fact))
}

/// Dressed operator implementing a vertex operator O_u along a path Γ ending
/// at an NGC vertex: supported on Γ's vertices and edges (not on the
/// terminal NGC vertex), rescaled by |G|^{|V_Γ|}, satisfying G O_u = O_Γ G
/// and [O_Γ, G G†] = 0.
pub fn dressed_operator(
    gs: &GaugeStructure,
    o_u: &LabeledOperator,
    path: &GraphPath,
) -> Result<LabeledOperator, GaugingError> {
    let graph = &gs.sys().graph;
    let vs = &path.vertices;
    if vs.len() < 2 {
        return Err(GaugingError::InvalidPath("path too short".into()));
    }
    let last = *vs.last().unwrap();
    if graph.label(last) != 0 {
        return Err(GaugingError::InvalidPath(
            "path must end at an NGC vertex".into(),
        ));
    }
    for &v in &vs[..vs.len() - 1] {
        if graph.label(v) != 1 {
            return Err(GaugingError::InvalidPath(format!(
                "path vertex {v} must be gauge constrained"
            )));
        }
    }
    let steps = path
        .step_edges(graph)
        .ok_or_else(|| GaugingError::InvalidPath("missing edge".into()))?;
    let gamma_vertices: Vec<u32> = vs[..vs.len() - 1].to_vec();
    let gamma_edges: Vec<(u32, u32)> = steps.iter().map(|s| s.0).collect();
    // Q = O_u ⊗ ⊗_{e∈E_Γ} |I⟩⟨I|_e
    let group_order = gs.group().order();
    let mut q = o_u.clone();
    for &(a, b) in &gamma_edges {
        let mut proj = CMat::zeros((group_order, group_order));
        proj[(0, 0)] = C64::new(1.0, 0.0);
        let e_op = LabeledOperator::full(
            proj,
            Factorization::new(vec![Subsystem::new(Label::Edge(a, b), group_order)]).unwrap(),
        );
        let joint = q.fact.tensor(&e_op.fact)?;
        let qe = embed(&q, &joint)?;
        let ee = embed(&e_op, &joint)?;
        q = qe.mul(&ee)?;
    }
    let averaged = subgraph_average(gs, &q, &gamma_vertices, &gamma_edges)?;
    let rescale = C64::new((group_order as f64).powi(gamma_vertices.len() as i32), 0.0);
    Ok(averaged.scale(rescale))
}

/// Undresses an image-preserving operator supported on a subgraph down to an
/// operator on the subgraph's vertices: O = G† O_Γ G with support verified.
pub fn undress_operator(
    gs: &GaugeStructure,
    o_gamma: &LabeledOperator,
    gamma_vertices: &[u32],
) -> Result<LabeledOperator, GaugingError> {
    let gmap = gauging_map(gs, true)?;
    let p_img = gmap.codespace_projector();
    let o_full = embed(o_gamma, &gs.lambda_fact)?;
    let comm = linalg::dist(
        &matmul(&o_full.matrix, &p_img),
        &matmul(&p_img, &o_full.matrix),
    );
    if comm > 1e-8 {
        return Err(GaugingError::NotImagePreserving(comm));
    }
    let o = gmap.pull(&o_full.matrix);
    let vertex_fact = gs.sys().vertex_fact();
    let o_op = LabeledOperator::full(o, vertex_fact.clone());
    // Verify the support is contained in the path vertices.
    let keep: BTreeSet<Label> = gamma_vertices.iter().map(|&v| Label::Vertex(v)).collect();
    let reduced = crate::tensor::partial_trace_op(&o_op, &keep)?;
    let comp_dim: usize = vertex_fact
        .complement_labels(&keep)
        .iter()
        .map(|l| vertex_fact.dim_of(*l).unwrap())
        .product();
    let small = LabeledOperator::full(
        reduced.matrix / C64::new(comp_dim as f64, 0.0),
        reduced.fact,
    );
    let back = embed(&small, &vertex_fact)?;
    let leak = linalg::dist(&back.matrix, &o_op.matrix);
    if leak > 1e-8 {
        return Err(GaugingError::SupportLeak(leak));
    }
    Ok(small)
}

/// Checks whether every bulk vertex outside the subgraph still reaches V0
/// through a path avoiding the subgraph (the undressing hypothesis).
pub fn undressing_hypothesis_holds(
    graph: &LabeledGraph,
    gamma_vertices: &[u32],
    gamma_edges: &[(u32, u32)],
) -> bool {
    let blocked_v: BTreeSet<u32> = gamma_vertices.iter().copied().collect();
    let blocked_e: BTreeSet<(u32, u32)> = gamma_edges.iter().copied().collect();
    for &v in graph.vertices() {
        if graph.label(v) != 1 || blocked_v.contains(&v) {
            continue;
        }
        // BFS avoiding Γ.
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        let mut reached = false;
        while let Some(u) = stack.pop() {
            if !seen.insert(u) {
                continue;
            }
            if graph.label(u) == 0 {
                reached = true;
                break;
            }
            for n in graph.neighbors(u) {
                let e = graph.edge_between(u, n).unwrap();
                if blocked_e.contains(&e) || blocked_v.contains(&n) && graph.label(n) == 1 {
                    continue;
                }
                if !seen.contains(&n) {
                    stack.push(n);
                }
            }
        }
        if !reached {
            return false;
        }
    }
    true
}

/// Max deviation of the duality map·left(g) = right(g)·map over all group
/// elements, plus the worst image-preservation deviation ‖[right(g), PP†]‖.
pub struct DualityReport {
    pub max_deviation: f64,
    pub max_image_deviation: f64,
}

pub fn duality_check(
    group: &FiniteGroup,
    map: &CMat,
    left: &dyn Fn(Elem) -> CMat,
    right: &dyn Fn(Elem) -> CMat,
) -> DualityReport {
    let proj = matmul(map, &linalg::dagger(map));
    let mut max_deviation: f64 = 0.0;
    let mut max_image_deviation: f64 = 0.0;
    for g in 0..group.order() {
        let l = left(g);
        let r = right(g);
        let lhs = matmul(map, &l);
        let rhs = matmul(&r, map);
        max_deviation = max_deviation.max(linalg::dist(&lhs, &rhs));
        max_image_deviation = max_image_deviation.max(commutator_norm(&r, &proj));
    }
    DualityReport {
        max_deviation,
        max_image_deviation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dist, frobenius_norm, identity, kron};
    use crate::tensor::{pauli_x, pauli_z};

    fn qubit_rep_x(group: &FiniteGroup) -> Irrep {
        // Z2 representation 0 ↦ 1, 1 ↦ X.
        assert_eq!(group.order(), 2);
        Irrep {
            dim: 2,
            matrices: vec![identity(2), pauli_x()],
        }
    }

    /// v0 (NGC, trivial) → v1 (GC, qubit with U = X), single edge.
    fn z2_line() -> GaugeStructure {
        let graph = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let reps = BTreeMap::from([(1, qubit_rep_x(&group))]);
        GaugeStructure::new(SymmetricSystem::new(graph, group, reps).unwrap()).unwrap()
    }

    #[test]
    fn gauge_transformation_z2_products() {
        // Vertex with one outgoing and one incoming edge: A_v(1) = X_v X_e X_e'.
        let graph =
            LabeledGraph::new(&[(0, 1), (1, 1), (2, 1)], &[(1, 2), (0, 1)], None).unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let reps = BTreeMap::from([(1, qubit_rep_x(&group))]);
        let sys = SymmetricSystem::new(graph, group, reps).unwrap();
        let pre = PreGaugedSystem::new(sys);
        let a = gauge_transformation(&pre, 1, 1);
        // Local factorization canonical order: Vertex(1), Edge(0,1), Edge(1,2).
        let oracle = kron(&pauli_x(), &kron(&pauli_x(), &pauli_x()));
        assert!(dist(&a.matrix, &oracle) < 1e-12);
        let id = gauge_transformation(&pre, 1, 0);
        assert!(dist(&id.matrix, &identity(8)) < 1e-12);
    }

    #[test]
    fn gauge_transformation_is_representation_s3() {
        // S3 star vertex: center with three outgoing edges to NGC leaves.
        let graph = LabeledGraph::new(
            &[(0, 0), (1, 0), (2, 0), (3, 1)],
            &[(0, 3), (1, 3), (2, 3)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::symmetric3().unwrap();
        let set = irreps(&group).unwrap();
        let std2 = set.irreps.iter().find(|r| r.dim == 2).unwrap().clone();
        let sys = SymmetricSystem::new(graph, group.clone(), BTreeMap::from([(3, std2)])).unwrap();
        let pre = PreGaugedSystem::new(sys);
        for g in 0..6 {
            for h in 0..6 {
                let prod = gauge_transformation(&pre, 3, g)
                    .mul(&gauge_transformation(&pre, 3, h))
                    .unwrap();
                let direct = gauge_transformation(&pre, 3, group.mul(g, h));
                assert!(dist(&prod.matrix, &direct.matrix) < 1e-10, "{g},{h}");
            }
        }
    }

    #[test]
    fn gauge_projectors_basic() {
        // Trivial group: all projectors are the identity.
        let graph = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap();
        let group = FiniteGroup::cyclic(1).unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        assert!(dist(&gs.pi_gi, &identity(1)) < 1e-12);

        // Z2 single GC vertex with one dangling edge: Π_v = (1 + X_v X_e)/2.
        let gs2 = z2_line();
        let pv = &gs2.pi_v[&1];
        let oracle = (&kron(&identity(2), &identity(2)) + &kron(&pauli_x(), &pauli_x()))
            * C64::new(0.5, 0.0);
        assert!(dist(&pv.matrix, &oracle) < 1e-12);
        let rank: f64 = (0..4).map(|i| gs2.pi_gi[(i, i)].re).sum();
        assert!((rank - 2.0).abs() < 1e-10);
        // Local projectors commute pairwise by construction on this graph.
        let (pairs, pi) = gauge_projectors(&gs2);
        assert_eq!(pairs.len(), 1);
        assert!(dist(&matmul(&pi.matrix, &pi.matrix), &pi.matrix) < 1e-10);
    }

    #[test]
    fn pi_gi_commuting_and_hermitian_on_triangle() {
        // Z2 triangle, all GC, trivial vertex spaces: rank Π_GI = 2 over the
        // 8-dimensional edge space.
        let graph = LabeledGraph::new(
            &[(0, 1), (1, 1), (2, 1)],
            &[(0, 1), (1, 2), (0, 2)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        let rank: f64 = (0..8).map(|i| gs.pi_gi[(i, i)].re).sum();
        assert!((rank - 2.0).abs() < 1e-10);
        assert!(linalg::is_hermitian(&gs.pi_gi, 1e-10));
        assert!(dist(&matmul(&gs.pi_gi, &gs.pi_gi), &gs.pi_gi) < 1e-10);
        // Pairwise commutation of embedded local projectors.
        let vs = gs.sys().graph.v1();
        for &u in &vs {
            for &v in &vs {
                let pu = embed(&gs.pi_v[&u], &gs.lambda_fact).unwrap();
                let pv = embed(&gs.pi_v[&v], &gs.lambda_fact).unwrap();
                assert!(commutator_norm(&pu.matrix, &pv.matrix) < 1e-10);
            }
        }
    }

    #[test]
    fn gauging_map_z2_line_bell() {
        let gs = z2_line();
        let iso = gauging_map(&gs, true).unwrap();
        assert!(iso.isometry_deviation() < 1e-12);
        // G|0⟩ = (|0⟩_v|0⟩_e + |1⟩_v|1⟩_e)/√2 in canonical (vertex, edge) order.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((iso.matrix[(0, 0)].re - s).abs() < 1e-12);
        assert!((iso.matrix[(3, 0)].re - s).abs() < 1e-12);
        assert!(iso.matrix[(1, 0)].norm() < 1e-12);
        assert!(iso.matrix[(2, 0)].norm() < 1e-12);
    }

    #[test]
    fn gauging_map_trivial_group_identity() {
        let graph = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap();
        let group = FiniteGroup::cyclic(1).unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        assert_eq!(gs.kappa_sq_denominator, 1);
        let iso = gauging_map(&gs, true).unwrap();
        assert!(dist(&iso.matrix, &identity(1)) < 1e-12);
    }

    #[test]
    fn kappa_s3_single_bulk_vertex() {
        let graph = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap();
        let group = FiniteGroup::symmetric3().unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        assert_eq!(gs.kappa_sq_denominator, 6);
        let iso = gauging_map(&gs, true).unwrap();
        assert!(iso.isometry_deviation() < 1e-10);
    }

    #[test]
    fn gauging_map_errors_when_v0_empty() {
        let graph = LabeledGraph::new(
            &[(0, 1), (1, 1), (2, 1)],
            &[(0, 1), (1, 2), (0, 2)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        assert!(matches!(
            gauging_map(&gs, true),
            Err(GaugingError::NotIsometric(_))
        ));
        // Un-normalized map is still produced.
        assert!(gauging_map(&gs, false).is_ok());
    }

    #[test]
    fn symmetric_sector_map_cases() {
        // Z2 on C4 with |+⟩^4 input survives.
        let graph = LabeledGraph::new(
            &[(0, 1), (1, 1), (2, 1), (3, 1)],
            &[(0, 1), (1, 2), (2, 3), (0, 3)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let reps: BTreeMap<u32, Irrep> =
            (0..4).map(|v| (v, qubit_rep_x(&group))).collect();
        let sys = SymmetricSystem::new(graph, group.clone(), reps).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        let vfact = gs.sys().vertex_fact();
        let n = vfact.total_dim();
        let plus = StateVector::new(
            ndarray::Array1::from_elem(n, C64::new(1.0 / (n as f64).sqrt(), 0.0)),
            vfact,
        );
        let gauged = symmetric_sector_map(&gs, &plus).unwrap();
        assert!((gauged.norm() - 1.0).abs() < 1e-10);

        // Single GC vertex, no edges, U = X, |−⟩ is annihilated.
        let g2 = LabeledGraph::new(&[(0, 1)], &[], None).unwrap();
        let sys2 = SymmetricSystem::new(
            g2,
            group.clone(),
            BTreeMap::from([(0, qubit_rep_x(&group))]),
        )
        .unwrap();
        let gs2 = GaugeStructure::new(sys2).unwrap();
        let minus = StateVector::new(
            ndarray::Array1::from_vec(vec![
                C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                C64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
            ]),
            gs2.sys().vertex_fact(),
        );
        assert!(matches!(
            symmetric_sector_map(&gs2, &minus),
            Err(GaugingError::NullState)
        ));
    }

    #[test]
    fn ngc_symmetry_cases() {
        let gs = z2_line();
        let empty = ngc_symmetry(&gs, 1, &BTreeSet::new());
        assert!(dist(&empty.matrix, &identity(1)) < 1e-12);
        // W = V0 on the line graph: equals X on the dangling edge.
        let w: BTreeSet<u32> = [0].into_iter().collect();
        let a = ngc_symmetry(&gs, 1, &w);
        // Local fact: Vertex(0) dim 1, Edge(0,1) dim 2 → matrix is X.
        assert!(dist(&a.matrix, &pauli_x()) < 1e-12);
        // Gauge invariance of the full NGC transformation.
        let a_full = embed(&a, &gs.lambda_fact).unwrap();
        assert!(commutator_norm(&a_full.matrix, &gs.pi_gi) < 1e-10);
    }

    #[test]
    fn duality_gauge_global_z2_line() {
        let gs = z2_line();
        let iso = gauging_map(&gs, true).unwrap();
        let vfact = gs.sys().vertex_fact();
        let report = duality_check(
            gs.group(),
            &iso.matrix,
            &|g| {
                let op = gs.sys().global_symmetry(g);
                let e = embed(&op, &vfact).unwrap();
                e.matrix
            },
            &|g| {
                let w: BTreeSet<u32> = gs.sys().graph.v0().into_iter().collect();
                let a = ngc_symmetry(&gs, g, &w);
                embed(&a, &gs.lambda_fact).unwrap().matrix
            },
        );
        assert!(report.max_deviation < 1e-10);
        assert!(report.max_image_deviation < 1e-10);
        // Negative control: a wrong right operator gives a positive deviation.
        let bad = duality_check(
            gs.group(),
            &iso.matrix,
            &|g| {
                embed(&gs.sys().global_symmetry(g), &vfact).unwrap().matrix
            },
            &|_| identity(gs.lambda_fact.total_dim()),
        );
        assert!(bad.max_deviation > 1e-3);
    }

    #[test]
    fn wilson_link_and_line() {
        let gs = z2_line();
        // Sign irrep link: eigenvalue −1 on |1⟩_e.
        let sign_idx = gs
            .irrep_set
            .irreps
            .iter()
            .position(|r| r.dim == 1 && (r.matrices[1][(0, 0)].re + 1.0).abs() < 1e-12)
            .unwrap();
        let w = wilson_operator(
            &gs,
            &WilsonKind::Link {
                edge: (0, 1),
                reversed: false,
            },
            WilsonRep::IrrepIndex(sign_idx),
            (0, 0),
        )
        .unwrap();
        assert!((w.matrix[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!((w.matrix[(1, 1)].re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn wilson_loop_flux_free_eigenvalue() {
        // Z2 triangle + pendant NGC vertex.
        let graph = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 1), (3, 1)],
            &[(0, 1), (1, 2), (2, 3), (1, 3)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        let iso = gauging_map(&gs, true).unwrap();
        let loops = crate::graph::enumerate_paths_and_cycles(
            &gs.sys().graph,
            crate::graph::PathKind::CycleInBulk,
            crate::graph::PathBounds::default(),
        )
        .unwrap();
        assert_eq!(loops.len(), 1);
        let w = wilson_operator(&gs, &WilsonKind::Loop { cycle: loops[0].clone() },
            WilsonRep::Faithful, (0, 0)).unwrap();
        let w_full = embed(&w, &gs.lambda_fact).unwrap();
        // On the image: eigenvalue Tr r(I) = dim of the faithful rep.
        let lhs = matmul(&w_full.matrix, &iso.matrix);
        let expect = &iso.matrix * C64::new(gs.irrep_set.faithful.dim as f64, 0.0);
        assert!(dist(&lhs, &expect) < 1e-10);
        // Gauge invariance and commutation with Π_GI.
        assert!(commutator_norm(&w_full.matrix, &gs.pi_gi) < 1e-10);
    }

    #[test]
    fn wilson_line_identity_on_trivial_config() {
        // Line v0 - v1 - v0': all edges at |I⟩ gives r_ij(I) = δ_ij.
        let graph = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 0)],
            &[(0, 1), (2, 1)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::symmetric3().unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        let path = GraphPath::new(vec![0, 1, 2]);
        let dim = gs.irrep_set.faithful.dim;
        for i in 0..dim {
            for j in 0..dim {
                let w = wilson_operator(&gs, &WilsonKind::Line { path: path.clone() },
                    WilsonRep::Faithful, (i, j)).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((w.matrix[(0, 0)].re - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn central_flux_cases() {
        let gs = z2_line();
        let cf = central_flux_operator(&gs, (0, 1), 1).unwrap();
        assert!(dist(&cf.matrix, &pauli_x()) < 1e-12);
        let cf_full = embed(&cf, &gs.lambda_fact).unwrap();
        assert!(commutator_norm(&cf_full.matrix, &gs.pi_gi) < 1e-10);
        let id = central_flux_operator(&gs, (0, 1), 0).unwrap();
        assert!(dist(&id.matrix, &identity(2)) < 1e-12);

        let graph = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap();
        let group = FiniteGroup::symmetric3().unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs3 = GaugeStructure::new(sys).unwrap();
        assert!(matches!(
            central_flux_operator(&gs3, (0, 1), 3),
            Err(GaugingError::NotCentral(3))
        ));
    }

    #[test]
    fn flux_free_image_z2_triangle_pendant() {
        let graph = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 1), (3, 1)],
            &[(0, 1), (1, 2), (2, 3), (1, 3)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        let iso = gauging_map(&gs, true).unwrap();
        let pff = flux_free_projector(&gs);
        let p_img = iso.codespace_projector();
        assert!(dist(&pff.matrix, &p_img) < 1e-10);
        let tr_ff = pff.trace().re;
        let tr_img = (0..p_img.nrows()).map(|i| p_img[(i, i)].re).sum::<f64>();
        assert!((tr_ff - tr_img).abs() < 1e-9);
    }

    #[test]
    fn flux_free_equals_pi_gi_without_cycles_or_lines() {
        let gs = z2_line();
        let pff = flux_free_projector(&gs);
        assert!(dist(&pff.matrix, &gs.pi_gi) < 1e-12);
    }

    #[test]
    fn flux_sectors_z2_triangle() {
        // Z2 cycle C3 all GC: two sectors; Π_GI has rank 2 and each sector
        // carries rank 1; the underlying edge classes have sizes 4 + 4.
        let graph = LabeledGraph::new(
            &[(0, 1), (1, 1), (2, 1)],
            &[(0, 1), (1, 2), (0, 2)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        let sectors = flux_sector_decomposition(&gs).unwrap();
        assert_eq!(sectors.len(), 2);
        let mask = flux_free_edge_mask(&gs);
        assert_eq!(mask.iter().filter(|&&b| b).count(), 4);
        let total: f64 = sectors.iter().map(|s| s.trace().re).sum();
        let gi_rank: f64 = (0..8).map(|i| gs.pi_gi[(i, i)].re).sum();
        assert!((total - gi_rank).abs() < 1e-9);
        for (a, sa) in sectors.iter().enumerate() {
            assert!(dist(&matmul(&sa.matrix, &sa.matrix), &sa.matrix) < 1e-10);
            for (b, sb) in sectors.iter().enumerate() {
                if a != b {
                    assert!(frobenius_norm(&matmul(&sa.matrix, &sb.matrix)) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn flux_sectors_line_two_ngc() {
        // Z2 line with 2 NGC endpoints: sectors labeled by the line
        // eigenvalue ±1 of the sign irrep.
        let graph = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 0)],
            &[(0, 1), (2, 1)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        let sectors = flux_sector_decomposition(&gs).unwrap();
        assert_eq!(sectors.len(), 2);
        // Trivial-group comparison: a single sector.
        let graph1 = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap();
        let group1 = FiniteGroup::cyclic(1).unwrap();
        let sys1 = SymmetricSystem::new(graph1, group1, BTreeMap::new()).unwrap();
        let gs1 = GaugeStructure::new(sys1).unwrap();
        assert_eq!(flux_sector_decomposition(&gs1).unwrap().len(), 1);
    }

    #[test]
    fn dressed_operator_z2_z_becomes_zz() {
        let gs = z2_line();
        let o_u = LabeledOperator::full(
            pauli_z(),
            Factorization::new(vec![Subsystem::new(Label::Vertex(1), 2)]).unwrap(),
        );
        let path = GraphPath::new(vec![1, 0]);
        let dressed = dressed_operator(&gs, &o_u, &path).unwrap();
        // O_Γ = Z_v ⊗ Z_e on (Vertex(1), Edge(0,1)).
        let oracle = kron(&pauli_z(), &pauli_z());
        assert!(dist(&dressed.matrix, &oracle) < 1e-12);
        // Implementation property G O_u = O_Γ G and image preservation.
        let iso = gauging_map(&gs, true).unwrap();
        let o_full = embed(&o_u, &gs.sys().vertex_fact()).unwrap();
        let d_full = embed(&dressed, &gs.lambda_fact).unwrap();
        assert!(
            dist(
                &matmul(&iso.matrix, &o_full.matrix),
                &matmul(&d_full.matrix, &iso.matrix)
            ) < 1e-10
        );
        let p = iso.codespace_projector();
        assert!(commutator_norm(&d_full.matrix, &p) < 1e-10);
    }

    #[test]
    fn dressed_identity_is_trivial_on_image() {
        let gs = z2_line();
        let o_u = LabeledOperator::identity(
            &Factorization::new(vec![Subsystem::new(Label::Vertex(1), 2)]).unwrap(),
        );
        let path = GraphPath::new(vec![1, 0]);
        let dressed = dressed_operator(&gs, &o_u, &path).unwrap();
        let iso = gauging_map(&gs, true).unwrap();
        let d_full = embed(&dressed, &gs.lambda_fact).unwrap();
        assert!(dist(&matmul(&d_full.matrix, &iso.matrix), &iso.matrix) < 1e-10);
    }

    #[test]
    fn undress_roundtrip() {
        let gs = z2_line();
        let o_u = LabeledOperator::full(
            pauli_z(),
            Factorization::new(vec![Subsystem::new(Label::Vertex(1), 2)]).unwrap(),
        );
        let path = GraphPath::new(vec![1, 0]);
        let dressed = dressed_operator(&gs, &o_u, &path).unwrap();
        assert!(undressing_hypothesis_holds(
            &gs.sys().graph,
            &[1],
            &[(0, 1)]
        ));
        let undressed = undress_operator(&gs, &dressed, &[1]).unwrap();
        assert!(dist(&undressed.matrix, &pauli_z()) < 1e-10);
        // Identity undresses to identity.
        let id = LabeledOperator::identity(&gs.lambda_fact);
        let u_id = undress_operator(&gs, &id, &[1]).unwrap();
        assert!(dist(&u_id.matrix, &identity(2)) < 1e-10);
    }

    #[test]
    fn undress_wilson_loop_gives_scalar() {
        // A Wilson loop inside Γ undresses to Tr r(I) = n_r times identity.
        let graph = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 1), (3, 1)],
            &[(0, 1), (1, 2), (2, 3), (1, 3)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        let loops = crate::graph::enumerate_paths_and_cycles(
            &gs.sys().graph,
            crate::graph::PathKind::CycleInBulk,
            crate::graph::PathBounds::default(),
        )
        .unwrap();
        let w = wilson_operator(&gs, &WilsonKind::Loop { cycle: loops[0].clone() },
            WilsonRep::Faithful, (0, 0)).unwrap();
        let und = undress_operator(&gs, &w, &[1, 2, 3]).unwrap();
        let nr = gs.irrep_set.faithful.dim as f64;
        assert!(dist(&und.matrix, &(identity(und.matrix.nrows()) * C64::new(nr, 0.0))) < 1e-9);
    }

    #[test]
    fn undress_rejects_non_preserving() {
        let gs = z2_line();
        // Z on the edge alone does not commute with the image projector.
        let bad = LabeledOperator::full(
            pauli_z(),
            Factorization::new(vec![Subsystem::new(Label::Edge(0, 1), 2)]).unwrap(),
        );
        assert!(matches!(
            undress_operator(&gs, &bad, &[1]),
            Err(GaugingError::NotImagePreserving(_))
        ));
    }

    #[test]
    fn twisted_map_properties() {
        // φ ≡ I is the ordinary map.
        let gs = z2_line();
        let plain = gauging_map(&gs, true).unwrap();
        let phi = FluxAssignment::trivial(&gs.sys().graph);
        let twisted = twisted_gauging_map(&gs, &phi, true).unwrap();
        assert!(dist(&plain.matrix, &twisted.matrix) < 1e-12);

        // Abelian case: ʰφ = φ, so the duality holds for every h.
        let mut by_edge = BTreeMap::new();
        by_edge.insert((0, 1), 1usize);
        let phi1 = FluxAssignment { by_edge };
        assert_eq!(phi1.conjugated(gs.group(), 1), phi1);
        let tw = twisted_gauging_map(&gs, &phi1, true).unwrap();
        assert!(tw.isometry_deviation() < 1e-10);
        let vfact = gs.sys().vertex_fact();
        let report = duality_check(
            gs.group(),
            &tw.matrix,
            &|g| embed(&gs.sys().global_symmetry(g), &vfact).unwrap().matrix,
            &|g| {
                let w: BTreeSet<u32> = gs.sys().graph.v0().into_iter().collect();
                embed(&ngc_symmetry(&gs, g, &w), &gs.lambda_fact).unwrap().matrix
            },
        );
        assert!(report.max_deviation < 1e-10);
    }

    #[test]
    fn twisted_duality_nonabelian_s3() {
        // G_φ U_V(h) = A_{V0}(h) G_{ʰφ} with ʰφ ≠ φ on S3.
        let graph = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap();
        let group = FiniteGroup::symmetric3().unwrap();
        let set = irreps(&group).unwrap();
        let std2 = set.irreps.iter().find(|r| r.dim == 2).unwrap().clone();
        let sys = SymmetricSystem::new(graph, group.clone(), BTreeMap::from([(1, std2)])).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        let vfact = gs.sys().vertex_fact();
        // φ assigns a transposition to the edge.
        let transposition = 1usize; // [0,2,1]
        let mut by_edge = BTreeMap::new();
        by_edge.insert((0, 1), transposition);
        let phi = FluxAssignment { by_edge };
        for h in 0..6 {
            let phi_h = phi.conjugated(&group, h);
            let g_phi = twisted_gauging_map(&gs, &phi, true).unwrap();
            let g_phi_h = twisted_gauging_map(&gs, &phi_h, true).unwrap();
            let u = embed(&gs.sys().global_symmetry(h), &vfact).unwrap();
            let w: BTreeSet<u32> = gs.sys().graph.v0().into_iter().collect();
            let a = embed(&ngc_symmetry(&gs, h, &w), &gs.lambda_fact).unwrap();
            let lhs = matmul(&g_phi.matrix, &u.matrix);
            let rhs = matmul(&a.matrix, &g_phi_h.matrix);
            assert!(dist(&lhs, &rhs) < 1e-10, "h = {h}");
        }
        // The conjugation is genuinely nontrivial for some h.
        assert!((0..6).any(|h| phi.conjugated(&group, h) != phi));
    }

    #[test]
    fn ngc_flux_map_image_orthogonal_to_flux_free() {
        // Z2 NGC flux map with h = 1 at one endpoint of the 2-NGC line:
        // image orthogonal to the flux-free image.
        let graph = LabeledGraph::new(
            &[(0, 0), (1, 1), (2, 0)],
            &[(0, 1), (2, 1)],
            None,
        )
        .unwrap();
        let group = FiniteGroup::cyclic(2).unwrap();
        let sys = SymmetricSystem::new(graph, group, BTreeMap::new()).unwrap();
        let gs = GaugeStructure::new(sys).unwrap();
        let plain = gauging_map(&gs, true).unwrap();
        let (flux, phi) = ngc_flux_map(&gs, &BTreeMap::from([(0, 1usize)]), true).unwrap();
        assert!(flux.isometry_deviation() < 1e-10);
        assert_eq!(phi.get((0, 1)), 1);
        assert_eq!(phi.get((2, 1)), 0);
        let overlap = matmul(&linalg::dagger(&plain.matrix), &flux.matrix);
        assert!(frobenius_norm(&overlap) < 1e-10);
    }
}
