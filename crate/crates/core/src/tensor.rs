//! Exact dense operator algebra over labeled tensor factorizations.
//!
//! A [`Factorization`] is an ordered list of labeled subsystems; the order is
//! canonical (vertices ascending, then edges, then boundary sites, then
//! logical and auxiliary labels) so that matrix representations are
//! deterministic across modules. A [`LabeledOperator`] is a dense complex
//! matrix over such a factorization together with an explicit support set.

use crate::linalg::{self, eigh, matmul, CMat, CVec, C64};
use crate::{DENSE_CAP, EIG_FLOOR, TOL_EQ};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("duplicate label in factorization: {0:?}")]
    DuplicateLabel(Label),
    #[error("total dimension {0} exceeds the dense cap {1}")]
    DimensionCap(usize, usize),
    #[error("factorization mismatch: {0}")]
    FactorizationMismatch(String),
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("unitary eigenvalue within {0:e} of the log branch cut at angle pi")]
    BranchAmbiguity(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("null state after projection")]
    NullState,
}

/// Subsystem label. The derived ordering (vertices, then edges, then
/// boundary sites, then logical/auxiliary labels, each ascending) is the
/// canonical subsystem order used for all Kronecker products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Vertex(u32),
    /// Edge identified by its (tail, head) vertex pair.
    Edge(u32, u32),
    Site(u32),
    Logical(u32),
    Aux(u32),
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Vertex(v) => write!(f, "v{v}"),
            Label::Edge(a, b) => write!(f, "e{a}-{b}"),
            Label::Site(s) => write!(f, "s{s}"),
            Label::Logical(l) => write!(f, "L{l}"),
            Label::Aux(a) => write!(f, "x{a}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subsystem {
    pub label: Label,
    pub dim: usize,
}

impl Subsystem {
    pub fn new(label: Label, dim: usize) -> Self {
        assert!(dim >= 1, "subsystem dimension must be >= 1");
        Subsystem { label, dim }
    }
}

/// Ordered tensor factorization with unique labels in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    subsystems: Vec<Subsystem>,
}

impl Factorization {
    pub fn new(mut subsystems: Vec<Subsystem>) -> Result<Self, TensorError> {
        subsystems.sort_by_key(|s| s.label);
        for w in subsystems.windows(2) {
            if w[0].label == w[1].label {
                return Err(TensorError::DuplicateLabel(w[0].label));
            }
        }
        let total: usize = subsystems.iter().map(|s| s.dim).product();
        if total > DENSE_CAP {
            return Err(TensorError::DimensionCap(total, DENSE_CAP));
        }
        Ok(Factorization { subsystems })
    }

    /// Scalar factorization (no subsystems, total dimension 1).
    pub fn scalar() -> Self {
        Factorization { subsystems: vec![] }
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.subsystems.iter().map(|s| s.label)
    }

    pub fn label_set(&self) -> BTreeSet<Label> {
        self.labels().collect()
    }

    pub fn total_dim(&self) -> usize {
        self.subsystems.iter().map(|s| s.dim).product()
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn position(&self, label: Label) -> Option<usize> {
        self.subsystems.iter().position(|s| s.label == label)
    }

    pub fn dim_of(&self, label: Label) -> Option<usize> {
        self.position(label).map(|i| self.subsystems[i].dim)
    }

    pub fn contains(&self, label: Label) -> bool {
        self.position(label).is_some()
    }

    /// Row-major strides in canonical order.
    pub fn strides(&self) -> Vec<usize> {
        let n = self.subsystems.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.subsystems[i + 1].dim;
        }
        strides
    }

    /// Union of two label-disjoint factorizations.
    pub fn tensor(&self, other: &Factorization) -> Result<Factorization, TensorError> {
        let mut subs = self.subsystems.clone();
        subs.extend_from_slice(&other.subsystems);
        Factorization::new(subs)
    }

    /// Sub-factorization on the given labels (must all be present).
    pub fn restrict(&self, labels: &BTreeSet<Label>) -> Result<Factorization, TensorError> {
        let mut subs = Vec::new();
        for &l in labels {
            match self.position(l) {
                Some(i) => subs.push(self.subsystems[i]),
                None => return Err(TensorError::LabelMismatch(format!("missing {l}"))),
            }
        }
        Factorization::new(subs)
    }

    pub fn complement_labels(&self, labels: &BTreeSet<Label>) -> BTreeSet<Label> {
        self.labels().filter(|l| !labels.contains(l)).collect()
    }
}

/// Dense complex operator over a factorization with an explicit support set.
#[derive(Debug, Clone)]
pub struct LabeledOperator {
    pub matrix: CMat,
    pub fact: Factorization,
    pub support: BTreeSet<Label>,
}

impl LabeledOperator {
    pub fn new(matrix: CMat, fact: Factorization, support: BTreeSet<Label>) -> Self {
        let d = fact.total_dim();
        assert_eq!(matrix.nrows(), d, "operator matrix does not match factorization");
        assert_eq!(matrix.ncols(), d, "operator matrix must be square");
        debug_assert!(support.iter().all(|l| fact.contains(*l)));
        LabeledOperator { matrix, fact, support }
    }

    /// Operator whose support is its whole factorization.
    pub fn full(matrix: CMat, fact: Factorization) -> Self {
        let support = fact.labels().collect();
        Self::new(matrix, fact, support)
    }

    pub fn identity(fact: &Factorization) -> Self {
        LabeledOperator {
            matrix: linalg::identity(fact.total_dim()),
            fact: fact.clone(),
            support: BTreeSet::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.fact.total_dim()
    }

    pub fn dagger(&self) -> Self {
        LabeledOperator {
            matrix: linalg::dagger(&self.matrix),
            fact: self.fact.clone(),
            support: self.support.clone(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        LabeledOperator {
            matrix: &self.matrix * z,
            fact: self.fact.clone(),
            support: self.support.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        if self.fact != other.fact {
            return Err(TensorError::FactorizationMismatch("add".into()));
        }
        Ok(LabeledOperator {
            matrix: &self.matrix + &other.matrix,
            fact: self.fact.clone(),
            support: self.support.union(&other.support).cloned().collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, TensorError> {
        if self.fact != other.fact {
            return Err(TensorError::FactorizationMismatch("mul".into()));
        }
        Ok(LabeledOperator {
            matrix: matmul(&self.matrix, &other.matrix),
            fact: self.fact.clone(),
            support: self.support.union(&other.support).cloned().collect(),
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)]).sum()
    }

    /// Verifies the identity-outside-support invariant:
    /// ‖O − (Tr_{S^c} O / dim(S^c)) ⊗ 1‖ ≤ tol.
    pub fn support_is_tight(&self, tol: f64) -> bool {
        let keep = self.support.clone();
        let reduced = match partial_trace_op(self, &keep) {
            Ok(r) => r,
            Err(_) => return false,
        };
        let comp_dim: usize = self
            .fact
            .complement_labels(&keep)
            .iter()
            .map(|l| self.fact.dim_of(*l).unwrap())
            .product();
        let small = LabeledOperator::full(
            reduced.matrix / C64::new(comp_dim as f64, 0.0),
            reduced.fact,
        );
        match embed(&small, &self.fact) {
            Ok(e) => linalg::dist(&e.matrix, &self.matrix) <= tol,
            Err(_) => false,
        }
    }
}

/// State vector over a factorization.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub amplitudes: CVec,
    pub fact: Factorization,
}

impl StateVector {
    pub fn new(amplitudes: CVec, fact: Factorization) -> Self {
        assert_eq!(amplitudes.len(), fact.total_dim());
        StateVector { amplitudes, fact }
    }

    /// Computational basis state |index⟩.
    pub fn basis(fact: &Factorization, index: usize) -> Self {
        let mut amp = CVec::zeros(fact.total_dim());
        amp[index] = C64::new(1.0, 0.0);
        StateVector::new(amp, fact.clone())
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self, TensorError> {
        let n = self.norm();
        if n < 1e-12 {
            return Err(TensorError::NullState);
        }
        Ok(StateVector::new(&self.amplitudes / C64::new(n, 0.0), self.fact.clone()))
    }

    pub fn dot(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Tensor product of two states on label-disjoint factorizations,
    /// reordered into canonical order.
    pub fn tensor(&self, other: &Self) -> Result<Self, TensorError> {
        let fact = self.fact.tensor(&other.fact)?;
        let mut amp = CVec::zeros(fact.total_dim());
        let strides = fact.strides();
        let offs_self = label_offsets(&fact, &self.fact, &strides);
        let offs_other = label_offsets(&fact, &other.fact, &strides);
        for (ia, &oa) in offs_self.iter().enumerate() {
            let za = self.amplitudes[ia];
            if za == C64::new(0.0, 0.0) {
                continue;
            }
            for (ib, &ob) in offs_other.iter().enumerate() {
                amp[oa + ob] = za * other.amplitudes[ib];
            }
        }
        Ok(StateVector::new(amp, fact))
    }

    /// Reduced density matrix on `keep` from a pure state.
    pub fn reduced_density(&self, keep: &BTreeSet<Label>) -> Result<LabeledOperator, TensorError> {
        let keep_fact = self.fact.restrict(keep)?;
        let rest: BTreeSet<Label> = self.fact.complement_labels(keep);
        let rest_fact = self.fact.restrict(&rest)?;
        let strides = self.fact.strides();
        let keep_offs = label_offsets(&self.fact, &keep_fact, &strides);
        let rest_offs = label_offsets(&self.fact, &rest_fact, &strides);
        let dk = keep_fact.total_dim();
        let mut rho = CMat::zeros((dk, dk));
        for (a, &oa) in keep_offs.iter().enumerate() {
            for (b, &ob) in keep_offs.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &or in &rest_offs {
                    acc += self.amplitudes[oa + or] * self.amplitudes[ob + or].conj();
                }
                rho[(a, b)] = acc;
            }
        }
        Ok(LabeledOperator::full(rho, keep_fact))
    }
}

/// Flat offsets of every multi-index of a subsystem list, given host strides
/// at the positions of its labels.
fn offsets_table(dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let mut offs = vec![0usize; total];
    for (flat, off) in offs.iter_mut().enumerate() {
        let mut rem = flat;
        let mut acc = 0usize;
        for k in (0..dims.len()).rev() {
            let idx = rem % dims[k];
            rem /= dims[k];
            acc += idx * strides[k];
        }
        *off = acc;
    }
    offs
}

fn label_offsets(host: &Factorization, sub: &Factorization, host_strides: &[usize]) -> Vec<usize> {
    let dims: Vec<usize> = sub.subsystems().iter().map(|s| s.dim).collect();
    let strides: Vec<usize> = sub
        .labels()
        .map(|l| host_strides[host.position(l).expect("sub label in host")])
        .collect();
    offsets_table(&dims, &strides)
}

/// Embeds an operator into a larger factorization, acting as identity on the
/// added subsystems.
pub fn embed(op: &LabeledOperator, target: &Factorization) -> Result<LabeledOperator, TensorError> {
    for s in op.fact.subsystems() {
        match target.dim_of(s.label) {
            Some(d) if d == s.dim => {}
            Some(d) => {
                return Err(TensorError::LabelMismatch(format!(
                    "label {} has dimension {} in target, {} in operator",
                    s.label, d, s.dim
                )))
            }
            None => {
                return Err(TensorError::LabelMismatch(format!(
                    "label {} absent from target",
                    s.label
                )))
            }
        }
    }
    let rest: BTreeSet<Label> = target.labels().filter(|l| !op.fact.contains(*l)).collect();
    let rest_fact = target.restrict(&rest)?;
    let strides = target.strides();
    let op_offs = label_offsets(target, &op.fact, &strides);
    let rest_offs = label_offsets(target, &rest_fact, &strides);
    let d = target.total_dim();
    let mut out = CMat::zeros((d, d));
    for (i, &oi) in op_offs.iter().enumerate() {
        for (j, &oj) in op_offs.iter().enumerate() {
            let m = op.matrix[(i, j)];
            if m == C64::new(0.0, 0.0) {
                continue;
            }
            for &or in &rest_offs {
                out[(oi + or, oj + or)] = m;
            }
        }
    }
    Ok(LabeledOperator::new(out, target.clone(), op.support.clone()))
}

/// Applies `op` (acting on a sub-factorization) to a state without forming
/// the embedded matrix.
pub fn apply_to_state(op: &LabeledOperator, state: &StateVector) -> Result<StateVector, TensorError> {
    for s in op.fact.subsystems() {
        if state.fact.dim_of(s.label) != Some(s.dim) {
            return Err(TensorError::LabelMismatch(format!("label {}", s.label)));
        }
    }
    let rest: BTreeSet<Label> = state
        .fact
        .labels()
        .filter(|l| !op.fact.contains(*l))
        .collect();
    let rest_fact = state.fact.restrict(&rest)?;
    let strides = state.fact.strides();
    let op_offs = label_offsets(&state.fact, &op.fact, &strides);
    let rest_offs = label_offsets(&state.fact, &rest_fact, &strides);
    let mut out = CVec::zeros(state.amplitudes.len());
    let ds = op_offs.len();
    for &or in &rest_offs {
        for i in 0..ds {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..ds {
                let m = op.matrix[(i, j)];
                if m != C64::new(0.0, 0.0) {
                    acc += m * state.amplitudes[op_offs[j] + or];
                }
            }
            out[op_offs[i] + or] = acc;
        }
    }
    Ok(StateVector::new(out, state.fact.clone()))
}

/// Left-multiplies a dense matrix over `fact` by `op` embedded into `fact`,
/// without forming the embedding: result = embed(op) · m.
pub fn apply_to_matrix_left(
    op: &LabeledOperator,
    m: &CMat,
    fact: &Factorization,
) -> Result<CMat, TensorError> {
    let rest: BTreeSet<Label> = fact.labels().filter(|l| !op.fact.contains(*l)).collect();
    let rest_fact = fact.restrict(&rest)?;
    let strides = fact.strides();
    let op_offs = label_offsets(fact, &op.fact, &strides);
    let rest_offs = label_offsets(fact, &rest_fact, &strides);
    let d = fact.total_dim();
    assert_eq!(m.nrows(), d);
    let cols = m.ncols();
    let mut out = CMat::zeros((d, cols));
    let ds = op_offs.len();
    for &or in &rest_offs {
        for i in 0..ds {
            let row_out = op_offs[i] + or;
            for j in 0..ds {
                let z = op.matrix[(i, j)];
                if z == C64::new(0.0, 0.0) {
                    continue;
                }
                let row_in = op_offs[j] + or;
                for c in 0..cols {
                    out[(row_out, c)] += z * m[(row_in, c)];
                }
            }
        }
    }
    Ok(out)
}

/// Partial trace of an operator down to the `keep` labels.
pub fn partial_trace_op(
    op: &LabeledOperator,
    keep: &BTreeSet<Label>,
) -> Result<LabeledOperator, TensorError> {
    let keep_fact = op.fact.restrict(keep)?;
    let rest: BTreeSet<Label> = op.fact.complement_labels(keep);
    let rest_fact = op.fact.restrict(&rest)?;
    let strides = op.fact.strides();
    let keep_offs = label_offsets(&op.fact, &keep_fact, &strides);
    let rest_offs = label_offsets(&op.fact, &rest_fact, &strides);
    let dk = keep_fact.total_dim();
    let mut out = CMat::zeros((dk, dk));
    for (a, &oa) in keep_offs.iter().enumerate() {
        for (b, &ob) in keep_offs.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &or in &rest_offs {
                acc += op.matrix[(oa + or, ob + or)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(LabeledOperator::full(out, keep_fact))
}

/// Von Neumann entropy in nats of a density matrix.
pub fn entropy(rho: &LabeledOperator) -> Result<f64, TensorError> {
    entropy_matrix(&rho.matrix)
}

pub fn entropy_matrix(rho: &CMat) -> Result<f64, TensorError> {
    if !linalg::is_hermitian(rho, 1e-8) {
        return Err(TensorError::NotDensityMatrix("not Hermitian".into()));
    }
    let tr: C64 = (0..rho.nrows()).map(|i| rho[(i, i)]).sum();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(TensorError::NotDensityMatrix(format!("trace {tr}")));
    }
    let (vals, _) = eigh(rho);
    if let Some(min) = vals.first() {
        if *min < -1e-8 {
            return Err(TensorError::NotDensityMatrix(format!("eigenvalue {min}")));
        }
    }
    Ok(vals
        .iter()
        .filter(|&&l| l > EIG_FLOOR)
        .map(|&l| -l * l.ln())
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFn {
    Log,
    Exp,
    Sqrt,
    Pinv,
}

/// Matrix function by eigendecomposition.
///
/// `Log` takes the principal branch with the cut at angle pi and requires a
/// unitary input; `Sqrt` requires a PSD input; `Pinv` and `Exp` require a
/// Hermitian input. `Pinv` zeroes eigenvalues below the floor.
pub fn matrix_function(op: &LabeledOperator, f: MatrixFn) -> Result<LabeledOperator, TensorError> {
    let m = &op.matrix;
    let out = match f {
        MatrixFn::Log => {
            let h = log_unitary_hermitian(m)?;
            h * C64::i()
        }
        MatrixFn::Exp => {
            if !linalg::is_hermitian(m, 1e-8) {
                return Err(TensorError::NotHermitian);
            }
            let (vals, vecs) = eigh(m);
            let cvals: Vec<C64> = vals.iter().map(|&v| C64::new(v, 0.0)).collect();
            linalg::rebuild(&cvals, &vecs, |z| C64::new(z.re.exp(), 0.0))
        }
        MatrixFn::Sqrt => {
            if !linalg::is_hermitian(m, 1e-8) {
                return Err(TensorError::NotHermitian);
            }
            let (vals, vecs) = eigh(m);
            if let Some(min) = vals.first() {
                if *min < -1e-8 {
                    return Err(TensorError::NotPsd(*min));
                }
            }
            let cvals: Vec<C64> = vals.iter().map(|&v| C64::new(v.max(0.0), 0.0)).collect();
            linalg::rebuild(&cvals, &vecs, |z| C64::new(z.re.sqrt(), 0.0))
        }
        MatrixFn::Pinv => {
            if !linalg::is_hermitian(m, 1e-8) {
                return Err(TensorError::NotHermitian);
            }
            let (vals, vecs) = eigh(m);
            let cvals: Vec<C64> = vals.iter().map(|&v| C64::new(v, 0.0)).collect();
            linalg::rebuild(&cvals, &vecs, |z| {
                if z.re.abs() > EIG_FLOOR {
                    C64::new(1.0 / z.re, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        }
    };
    Ok(LabeledOperator::new(out, op.fact.clone(), op.support.clone()))
}

/// Hermitian H = −i log U on the principal branch (cut at angle pi).
/// Errors with `BranchAmbiguity` if an eigenvalue sits within 1e−8 of the cut.
pub fn log_unitary_hermitian(m: &CMat) -> Result<CMat, TensorError> {
    if !linalg::is_unitary(m, 1e-8) {
        return Err(TensorError::NotUnitary);
    }
    let (vals, vecs) = linalg::eig_unitary(m);
    for v in &vals {
        if v.re < 0.0 && v.im.abs() < 1e-8 {
            return Err(TensorError::BranchAmbiguity(1e-8));
        }
    }
    Ok(linalg::rebuild(&vals, &vecs, |z| C64::new(z.arg(), 0.0)))
}

/// ‖[a, b]‖_F with a fast path when either matrix is exactly diagonal.
pub fn commutator_norm(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim(), b.dim());
    let n = a.nrows();
    let diag_a = is_exactly_diagonal(a);
    let diag_b = is_exactly_diagonal(b);
    if diag_a && diag_b {
        return 0.0;
    }
    if diag_a || diag_b {
        let (d, m) = if diag_a { (a, b) } else { (b, a) };
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let c = (d[(i, i)] - d[(j, j)]) * m[(i, j)];
                acc += c.norm_sqr();
            }
        }
        return acc.sqrt();
    }
    linalg::dist(&matmul(a, b), &matmul(b, a))
}

fn is_exactly_diagonal(m: &CMat) -> bool {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j && m[(i, j)] != C64::new(0.0, 0.0) {
                return false;
            }
        }
    }
    true
}

pub fn pauli_x() -> CMat {
    ndarray::array![
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    ]
}

pub fn pauli_y() -> CMat {
    ndarray::array![
        [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        [C64::new(0.0, 1.0), C64::new(0.0, 0.0)]
    ]
}

pub fn pauli_z() -> CMat {
    ndarray::array![
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)]
    ]
}

/// Generalized Pauli (clock and shift) operator basis on a d-dimensional
/// space: X^a Z^b for a, b in 0..d, with X|k⟩ = |k+1 mod d⟩ and Z|k⟩ = ω^k|k⟩.
pub fn generalized_pauli_basis(d: usize) -> Vec<CMat> {
    let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut m = CMat::zeros((d, d));
            for k in 0..d {
                m[((k + a) % d, k)] = omega.powu(((b * k) % d) as u32);
            }
            out.push(m);
        }
    }
    out
}

pub fn tol_check(dev: f64) -> bool {
    dev <= TOL_EQ
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dist, identity, kron};

    fn qubit_fact(labels: &[Label]) -> Factorization {
        Factorization::new(labels.iter().map(|&l| Subsystem::new(l, 2)).collect()).unwrap()
    }

    #[test]
    fn embed_x_identity_padding() {
        let a = Label::Vertex(0);
        let b = Label::Vertex(1);
        let small = qubit_fact(&[a]);
        let target = qubit_fact(&[a, b]);
        let op = LabeledOperator::full(pauli_x(), small);
        let e = embed(&op, &target).unwrap();
        assert!(dist(&e.matrix, &kron(&pauli_x(), &identity(2))) < 1e-14);
        assert_eq!(e.support.len(), 1);
    }

    #[test]
    fn embed_empty_support_gives_identity() {
        let fact = qubit_fact(&[Label::Vertex(0), Label::Vertex(1)]);
        let op = LabeledOperator::full(identity(1), Factorization::scalar());
        let e = embed(&op, &fact).unwrap();
        assert!(dist(&e.matrix, &identity(4)) < 1e-14);
    }

    #[test]
    fn embed_zz_skipping_middle() {
        // Z⊗Z on {a,c} into {a,b,c}: oracle is the explicit 8x8 Kronecker.
        let a = Label::Vertex(0);
        let b = Label::Vertex(1);
        let c = Label::Vertex(2);
        let small = qubit_fact(&[a, c]);
        let target = qubit_fact(&[a, b, c]);
        let op = LabeledOperator::full(kron(&pauli_z(), &pauli_z()), small);
        let e = embed(&op, &target).unwrap();
        let oracle = kron(&pauli_z(), &kron(&identity(2), &pauli_z()));
        assert!(dist(&e.matrix, &oracle) < 1e-14);
    }

    #[test]
    fn embed_label_mismatch() {
        let small = qubit_fact(&[Label::Vertex(7)]);
        let target = qubit_fact(&[Label::Vertex(0), Label::Vertex(1)]);
        let op = LabeledOperator::full(pauli_x(), small);
        assert!(matches!(embed(&op, &target), Err(TensorError::LabelMismatch(_))));
    }

    #[test]
    fn embed_is_algebra_homomorphism() {
        let a = Label::Vertex(0);
        let c = Label::Vertex(2);
        let small = qubit_fact(&[a, c]);
        let target = qubit_fact(&[a, Label::Vertex(1), c]);
        let p = LabeledOperator::full(kron(&pauli_x(), &pauli_y()), small.clone());
        let q = LabeledOperator::full(kron(&pauli_z(), &pauli_x()), small);
        let lhs = embed(&p.mul(&q).unwrap(), &target).unwrap();
        let rhs = embed(&p, &target).unwrap().mul(&embed(&q, &target).unwrap()).unwrap();
        assert!(dist(&lhs.matrix, &rhs.matrix) < 1e-12);
    }

    #[test]
    fn partial_trace_bell() {
        let fact = qubit_fact(&[Label::Vertex(0), Label::Vertex(1)]);
        let mut amp = CVec::zeros(4);
        amp[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amp[3] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let bell = StateVector::new(amp, fact);
        let keep: BTreeSet<Label> = [Label::Vertex(0)].into_iter().collect();
        let rho = bell.reduced_density(&keep).unwrap();
        assert!(dist(&rho.matrix, &(identity(2) * C64::new(0.5, 0.0))) < 1e-14);
    }

    #[test]
    fn partial_trace_product_state() {
        let fact = qubit_fact(&[Label::Vertex(0), Label::Vertex(1)]);
        let mut amp = CVec::zeros(4);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        amp[0] = C64::new(s, 0.0); // |0⟩⊗|+⟩
        amp[1] = C64::new(s, 0.0);
        let psi = StateVector::new(amp, fact);
        let keep: BTreeSet<Label> = [Label::Vertex(0)].into_iter().collect();
        let rho = psi.reduced_density(&keep).unwrap();
        let mut oracle = CMat::zeros((2, 2));
        oracle[(0, 0)] = C64::new(1.0, 0.0);
        assert!(dist(&rho.matrix, &oracle) < 1e-14);
    }

    /// Independent brute-force partial trace used as an oracle.
    fn brute_force_reduced(psi: &[C64], n_qubits: usize, keep: &[usize]) -> CMat {
        let dk = 1usize << keep.len();
        let rest: Vec<usize> = (0..n_qubits).filter(|q| !keep.contains(q)).collect();
        let dr = 1usize << rest.len();
        let mut rho = CMat::zeros((dk, dk));
        let compose = |k_idx: usize, r_idx: usize| -> usize {
            let mut full = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                let bit = (k_idx >> (keep.len() - 1 - pos)) & 1;
                full |= bit << (n_qubits - 1 - q);
            }
            for (pos, &q) in rest.iter().enumerate() {
                let bit = (r_idx >> (rest.len() - 1 - pos)) & 1;
                full |= bit << (n_qubits - 1 - q);
            }
            full
        };
        for a in 0..dk {
            for b in 0..dk {
                for r in 0..dr {
                    rho[(a, b)] += psi[compose(a, r)] * psi[compose(b, r)].conj();
                }
            }
        }
        rho
    }

    /// Logical |0⟩ of the five-qubit code by projecting |00000⟩ onto the
    /// stabilizer group's +1 eigenspace.
    fn five_qubit_logical_zero() -> Vec<C64> {
        let x = pauli_x();
        let z = pauli_z();
        let i2 = identity(2);
        let word = |s: &str| -> CMat {
            let mut m = identity(1);
            for ch in s.chars() {
                let f = match ch {
                    'X' => &x,
                    'Z' => &z,
                    _ => &i2,
                };
                m = kron(&m, f);
            }
            m
        };
        let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"];
        let mut proj = identity(32);
        for g in gens {
            proj = matmul(&proj, &((&word(g) + &identity(32)) * C64::new(0.5, 0.0)));
        }
        let mut v: Vec<C64> = (0..32).map(|i| proj[(i, 0)]).collect();
        let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= n;
        }
        v
    }

    #[test]
    fn partial_trace_five_qubit_perfectness() {
        // Any 2 qubits of the logical zero state are maximally mixed; the
        // expectation is checked against the brute-force oracle.
        let psi = five_qubit_logical_zero();
        let labels: Vec<Label> = (0..5).map(Label::Vertex).collect();
        let fact = qubit_fact(&labels);
        let sv = StateVector::new(CVec::from_vec(psi.clone()), fact);
        for a in 0..5 {
            for b in (a + 1)..5 {
                let keep: BTreeSet<Label> = [labels[a], labels[b]].into_iter().collect();
                let rho = sv.reduced_density(&keep).unwrap();
                let oracle = brute_force_reduced(&psi, 5, &[a, b]);
                assert!(dist(&rho.matrix, &oracle) < 1e-12);
                assert!(dist(&rho.matrix, &(identity(4) * C64::new(0.25, 0.0))) < 1e-10);
            }
        }
    }

    #[test]
    fn entropy_values() {
        let fact = qubit_fact(&[Label::Vertex(0)]);
        let pure = LabeledOperator::full(
            ndarray::array![
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(0.0, 0.0)]
            ],
            fact.clone(),
        );
        assert!(entropy(&pure).unwrap().abs() < 1e-12);
        let mixed = LabeledOperator::full(identity(2) * C64::new(0.5, 0.0), fact);
        assert!((entropy(&mixed).unwrap() - 2f64.ln()).abs() < 1e-12);
        let two = qubit_fact(&[Label::Vertex(0), Label::Vertex(1)]);
        let mixed4 = LabeledOperator::full(identity(4) * C64::new(0.25, 0.0), two);
        assert!((entropy(&mixed4).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_additive_on_products() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut rand_density = |d: usize| -> CMat {
            let mut a = CMat::zeros((d, d));
            for i in 0..d {
                for j in 0..d {
                    a[(i, j)] = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                }
            }
            let m = matmul(&a, &linalg::dagger(&a));
            let tr: f64 = (0..d).map(|i| m[(i, i)].re).sum();
            m / C64::new(tr, 0.0)
        };
        let r1 = rand_density(3);
        let r2 = rand_density(4);
        let s1 = entropy_matrix(&r1).unwrap();
        let s2 = entropy_matrix(&r2).unwrap();
        let s12 = entropy_matrix(&kron(&r1, &r2)).unwrap();
        assert!((s12 - s1 - s2).abs() < 1e-9);
    }

    #[test]
    fn entropy_rejects_non_density() {
        let fact = qubit_fact(&[Label::Vertex(0)]);
        let bad = LabeledOperator::full(identity(2), fact);
        assert!(matches!(entropy(&bad), Err(TensorError::NotDensityMatrix(_))));
    }

    #[test]
    fn matrix_functions() {
        let fact = qubit_fact(&[Label::Vertex(0)]);
        let id = LabeledOperator::identity(&fact);
        let log_id = matrix_function(&id, MatrixFn::Log).unwrap();
        assert!(linalg::frobenius_norm(&log_id.matrix) < 1e-12);

        let d49 = LabeledOperator::full(
            ndarray::array![
                [C64::new(4.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(9.0, 0.0)]
            ],
            fact.clone(),
        );
        let s = matrix_function(&d49, MatrixFn::Sqrt).unwrap();
        assert!((s.matrix[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!((s.matrix[(1, 1)].re - 3.0).abs() < 1e-12);

        let d20 = LabeledOperator::full(
            ndarray::array![
                [C64::new(2.0, 0.0), C64::new(0.0, 0.0)],
                [C64::new(0.0, 0.0), C64::new(0.0, 0.0)]
            ],
            fact,
        );
        let p = matrix_function(&d20, MatrixFn::Pinv).unwrap();
        assert!((p.matrix[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!(p.matrix[(1, 1)].norm() < 1e-12);
    }

    #[test]
    fn log_branch_ambiguity_at_minus_one() {
        let fact = qubit_fact(&[Label::Vertex(0)]);
        let z = LabeledOperator::full(pauli_z(), fact);
        assert!(matches!(
            matrix_function(&z, MatrixFn::Log),
            Err(TensorError::BranchAmbiguity(_))
        ));
    }

    #[test]
    fn exp_log_roundtrip_away_from_cut() {
        let u = ndarray::array![
            [C64::from_polar(1.0, 0.7), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::from_polar(1.0, -0.3)]
        ];
        let h = log_unitary_hermitian(&u).unwrap();
        let (vals, vecs) = eigh(&h);
        let back = linalg::rebuild(
            &vals.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(),
            &vecs,
            |z| (C64::i() * z.re).exp(),
        );
        assert!(dist(&back, &u) < 1e-10);
    }

    #[test]
    fn support_tightness() {
        let a = Label::Vertex(0);
        let b = Label::Vertex(1);
        let target = qubit_fact(&[a, b]);
        let op = LabeledOperator::full(pauli_x(), qubit_fact(&[a]));
        let e = embed(&op, &target).unwrap();
        assert!(e.support_is_tight(1e-10));
        let mut loose = e.clone();
        loose.matrix = kron(&pauli_x(), &pauli_z());
        assert!(!loose.support_is_tight(1e-10));
    }

    #[test]
    fn apply_to_state_matches_embed() {
        let a = Label::Vertex(0);
        let b = Label::Vertex(1);
        let c = Label::Vertex(2);
        let target = qubit_fact(&[a, b, c]);
        let op = LabeledOperator::full(kron(&pauli_x(), &pauli_y()), qubit_fact(&[a, c]));
        let mut amp = CVec::zeros(8);
        for (i, z) in amp.iter_mut().enumerate() {
            *z = C64::new(i as f64 * 0.1, -(i as f64) * 0.05);
        }
        let psi = StateVector::new(amp, target.clone());
        let via_apply = apply_to_state(&op, &psi).unwrap();
        let e = embed(&op, &target).unwrap();
        let dense = matmul(
            &e.matrix,
            &psi.amplitudes.clone().insert_axis(ndarray::Axis(1)),
        );
        for i in 0..8 {
            assert!((via_apply.amplitudes[i] - dense[(i, 0)]).norm() < 1e-13);
        }
    }

    #[test]
    fn partial_trace_locality_of_support() {
        // Tr over the complement of O's support intertwines with O.
        let a = Label::Vertex(0);
        let b = Label::Vertex(1);
        let fact = qubit_fact(&[a, b]);
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut rho = CMat::zeros((4, 4));
        for i in 0..4 {
            for j in 0..4 {
                rho[(i, j)] = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        let rho = matmul(&rho, &linalg::dagger(&rho));
        let tr: f64 = (0..4).map(|i| rho[(i, i)].re).sum();
        let rho = LabeledOperator::full(rho / C64::new(tr, 0.0), fact.clone());
        let op_small = LabeledOperator::full(pauli_y(), qubit_fact(&[a]));
        let op = embed(&op_small, &fact).unwrap();
        let keep: BTreeSet<Label> = [a].into_iter().collect();
        let lhs = partial_trace_op(&op.mul(&rho).unwrap(), &keep).unwrap();
        let rhs = matmul(&op_small.matrix, &partial_trace_op(&rho, &keep).unwrap().matrix);
        assert!(dist(&lhs.matrix, &rhs) < 1e-10);
    }
}
