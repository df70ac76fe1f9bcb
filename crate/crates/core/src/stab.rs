//! GF(2) symplectic backend for Z2-valued constructions.
//!
//! A Pauli word is stored as X/Z bit vectors with an exact phase (an
//! exponent of i mod 4). Stabilizer isometries are represented through the
//! stabilizer group of their Choi state, with qubits ordered inputs first;
//! tensor-network contraction is a Bell-pair postselection on the Choi
//! state followed by qubit removal.

use crate::graph::LabeledGraph;
use crate::linalg::{kron, CMat, CVec, C64};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StabError {
    #[error("contraction produced the zero map (postselected a −1 outcome)")]
    ZeroContraction,
    #[error("composition bookkeeping error: {0}")]
    BadPlan(String),
    #[error("map is not an isometry after contraction: a nontrivial stabilizer acts on inputs only")]
    NotIsometryAfterContraction,
    #[error("generators are not independent or do not commute")]
    BadGenerators,
}

/// Pauli word i^phase · ∏_q X_q^{x_q} Z_q^{z_q}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliOperator {
    pub n: usize,
    pub x: Vec<bool>,
    pub z: Vec<bool>,
    /// Exponent of i, mod 4.
    pub phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            n,
            x: vec![false; n],
            z: vec![false; n],
            phase: 0,
        }
    }

    /// Builds from a string over {I, X, Y, Z}; Y stands for the Hermitian
    /// Pauli Y = i·XZ.
    pub fn from_str(s: &str) -> Self {
        let n = s.len();
        let mut p = PauliOperator::identity(n);
        for (q, ch) in s.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => p.x[q] = true,
                'Z' => p.z[q] = true,
                'Y' => {
                    p.x[q] = true;
                    p.z[q] = true;
                    p.phase = (p.phase + 1) % 4;
                }
                _ => panic!("bad Pauli character {ch}"),
            }
        }
        p
    }

    pub fn is_identity_word(&self) -> bool {
        self.x.iter().all(|&b| !b) && self.z.iter().all(|&b| !b)
    }

    pub fn weight(&self) -> usize {
        (0..self.n).filter(|&q| self.x[q] || self.z[q]).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.x[q] || self.z[q]).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = PauliOperator::identity(self.n);
        let mut extra = 0u8;
        for q in 0..self.n {
            // Z^z1 X^x2 = (−1)^{z1 x2} X^x2 Z^z1.
            if self.z[q] && other.x[q] {
                extra = (extra + 2) % 4;
            }
            out.x[q] = self.x[q] ^ other.x[q];
            out.z[q] = self.z[q] ^ other.z[q];
        }
        out.phase = (self.phase + other.phase + extra) % 4;
        out
    }

    /// Count of qubits with both X and Z set.
    fn y_count(&self) -> u8 {
        let mut c = 0u32;
        for q in 0..self.n {
            if self.x[q] && self.z[q] {
                c += 1;
            }
        }
        (2 * (c % 2)) as u8
    }

    /// Inverse: (i^a W)⁻¹ = i^{−a} (−1)^{y} W.
    pub fn inverse(&self) -> Self {
        let mut out = self.clone();
        out.phase = ((4 - self.phase) % 4 + self.y_count()) % 4;
        out
    }

    /// Transpose: (i^a W)^T = i^a (−1)^y W.
    pub fn transpose(&self) -> Self {
        let mut out = self.clone();
        out.phase = (self.phase + self.y_count()) % 4;
        out
    }

    pub fn commutes(&self, other: &Self) -> bool {
        let mut sym = false;
        for q in 0..self.n {
            sym ^= (self.x[q] && other.z[q]) ^ (self.z[q] && other.x[q]);
        }
        !sym
    }

    /// Restriction of the word to a qubit subset, keeping the phase.
    pub fn restricted(&self, qubits: &[usize]) -> PauliOperator {
        let mut out = PauliOperator::identity(qubits.len());
        for (pos, &q) in qubits.iter().enumerate() {
            out.x[pos] = self.x[q];
            out.z[pos] = self.z[q];
        }
        out.phase = self.phase;
        out
    }

    pub fn is_supported_on(&self, qubits: &[usize]) -> bool {
        (0..self.n).all(|q| qubits.contains(&q) || (!self.x[q] && !self.z[q]))
    }

    /// Dense matrix; qubit 0 is the leftmost Kronecker factor.
    pub fn to_dense(&self) -> CMat {
        let x = crate::tensor::pauli_x();
        let z = crate::tensor::pauli_z();
        let mut m = crate::linalg::identity(1);
        for q in 0..self.n {
            let f = match (self.x[q], self.z[q]) {
                (false, false) => crate::linalg::identity(2),
                (true, false) => x.clone(),
                (false, true) => z.clone(),
                (true, true) => crate::linalg::matmul(&x, &z),
            };
            m = kron(&m, &f);
        }
        m * C64::i().powu(self.phase as u32)
    }
}

/// The stabilizer group of a full stabilizer state on `n` qubits, given by
/// `n` independent commuting generators.
#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    pub n: usize,
    pub gens: Vec<PauliOperator>,
}

impl StabilizerGroup {
    pub fn new(n: usize, gens: Vec<PauliOperator>) -> Result<Self, StabError> {
        for g in &gens {
            assert_eq!(g.n, n);
        }
        for a in 0..gens.len() {
            for b in (a + 1)..gens.len() {
                if !gens[a].commutes(&gens[b]) {
                    return Err(StabError::BadGenerators);
                }
            }
        }
        let grp = StabilizerGroup { n, gens };
        if grp.rank() != grp.gens.len() {
            return Err(StabError::BadGenerators);
        }
        Ok(grp)
    }

    fn bit(&self, gen: usize, col: usize) -> bool {
        if col < self.n {
            self.gens[gen].x[col]
        } else {
            self.gens[gen].z[col - self.n]
        }
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<bool>> = self
            .gens
            .iter()
            .map(|g| {
                let mut r = g.x.clone();
                r.extend_from_slice(&g.z);
                r
            })
            .collect();
        gf2_rank(&mut rows)
    }

    /// Row-reduced echelon form over GF(2) with fixed column order
    /// (x-bits then z-bits), with exact phase bookkeeping.
    pub fn canonicalize(&mut self) {
        let cols = 2 * self.n;
        let mut row = 0;
        for col in 0..cols {
            let mut pivot = None;
            for r in row..self.gens.len() {
                if self.bit(r, col) {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            self.gens.swap(row, p);
            for r in 0..self.gens.len() {
                if r != row && self.bit(r, col) {
                    self.gens[r] = self.gens[r].mul(&self.gens[row].clone());
                }
            }
            row += 1;
            if row == self.gens.len() {
                break;
            }
        }
        // Drop identity words (allowing the group to shrink after cleaning).
        self.gens.retain(|g| !g.is_identity_word() || g.phase != 0);
    }

    /// Membership with sign: reduces `target` by the canonical generators.
    /// Returns Some(phase) with the phase of target⁻¹·(group element of the
    /// same word), i.e. Some(0) when target itself is in the group; None if
    /// the word is not in the group's span.
    pub fn member_phase(&self, target: &PauliOperator) -> Option<u8> {
        let mut grp = self.clone();
        grp.canonicalize();
        let mut acc = PauliOperator::identity(self.n);
        let is_set = |p: &PauliOperator, col: usize| {
            if col < p.n {
                p.x[col]
            } else {
                p.z[col - p.n]
            }
        };
        for g in &grp.gens {
            // Leading column of g.
            let lead = (0..2 * self.n).find(|&c| {
                if c < self.n {
                    g.x[c]
                } else {
                    g.z[c - self.n]
                }
            });
            let Some(lead) = lead else { continue };
            let want = is_set(target, lead) ^ is_set(&acc, lead);
            if want {
                acc = acc.mul(g);
            }
        }
        if acc.x == target.x && acc.z == target.z {
            Some((acc.phase + 4 - target.phase) % 4)
        } else {
            None
        }
    }

    /// Finds a group element whose bits satisfy the given constraints:
    /// equality of the (x, z) bits at the listed qubits with the target word,
    /// and zero bits at the `forbidden` qubits. Returns None when
    /// unsatisfiable.
    pub fn solve_with_constraints(
        &self,
        pinned: &[(usize, bool, bool)],
        forbidden: &[usize],
    ) -> Option<PauliOperator> {
        // Build the linear system over gen coefficients.
        let m = self.gens.len();
        let mut constraint_cols: Vec<usize> = Vec::new();
        let mut targets: Vec<bool> = Vec::new();
        for &(q, xv, zv) in pinned {
            constraint_cols.push(q);
            targets.push(xv);
            constraint_cols.push(self.n + q);
            targets.push(zv);
        }
        for &q in forbidden {
            constraint_cols.push(q);
            targets.push(false);
            constraint_cols.push(self.n + q);
            targets.push(false);
        }
        let rows = constraint_cols.len();
        // System: for each constraint row i: Σ_j coeff_j * G[j][col_i] = t_i.
        let mut aug: Vec<Vec<bool>> = Vec::with_capacity(rows);
        for (i, &col) in constraint_cols.iter().enumerate() {
            let mut r: Vec<bool> = (0..m).map(|j| self.bit(j, col)).collect();
            r.push(targets[i]);
            aug.push(r);
        }
        let coeffs = gf2_solve(&mut aug, m)?;
        let mut out = PauliOperator::identity(self.n);
        for (j, &c) in coeffs.iter().enumerate() {
            if c {
                out = out.mul(&self.gens[j]);
            }
        }
        Some(out)
    }

    /// All group elements supported inside the qubit subset span a subgroup;
    /// returns its GF(2) dimension (used for reduced-state entropies).
    pub fn supported_subgroup_dim(&self, qubits: &[usize]) -> usize {
        let m = self.gens.len();
        let outside: Vec<usize> = (0..self.n).filter(|q| !qubits.contains(q)).collect();
        // Coefficient vectors with zero bits outside the subset.
        let mut rows: Vec<Vec<bool>> = Vec::new();
        for &q in &outside {
            for col in [q, self.n + q] {
                rows.push((0..m).map(|j| self.bit(j, col)).collect());
            }
        }
        let kernel_dim = m - gf2_rank(&mut rows);
        kernel_dim
    }
}

fn gf2_rank(rows: &mut [Vec<bool>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let mut pivot = None;
        for r in rank..rows.len() {
            if rows[r][col] {
                pivot = Some(r);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] {
                let (a, b) = if r < rank {
                    let (lo, hi) = rows.split_at_mut(rank);
                    (&mut lo[r], &hi[0])
                } else {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&mut hi[0], &lo[rank])
                };
                for c in 0..cols {
                    a[c] ^= b[c];
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Solves the augmented system (rows over unknowns 0..m, last column = rhs).
/// Returns one solution or None.
fn gf2_solve(aug: &mut Vec<Vec<bool>>, m: usize) -> Option<Vec<bool>> {
    let rows = aug.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..m {
        let mut pivot = None;
        for r in rank..rows {
            if aug[r][col] {
                pivot = Some(r);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        aug.swap(rank, p);
        for r in 0..rows {
            if r != rank && aug[r][col] {
                let (a, b) = if r < rank {
                    let (lo, hi) = aug.split_at_mut(rank);
                    (&mut lo[r], &hi[0])
                } else {
                    let (lo, hi) = aug.split_at_mut(r);
                    (&mut hi[0], &lo[rank])
                };
                for c in 0..=m {
                    a[c] ^= b[c];
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
        if rank == rows {
            break;
        }
    }
    // Inconsistency: zero row with rhs 1.
    for r in rank..rows {
        if aug[r][m] && aug[r][..m].iter().all(|&b| !b) {
            return None;
        }
    }
    let mut sol = vec![false; m];
    for &(r, c) in &pivots {
        sol[c] = aug[r][m];
    }
    Some(sol)
}

/// Stabilizer isometry from k input to n output qubits, held as the
/// stabilizer group of its Choi state with qubits ordered inputs first.
#[derive(Debug, Clone)]
pub struct StabilizerIsometry {
    pub n_in: usize,
    pub n_out: usize,
    pub choi: StabilizerGroup,
}

impl StabilizerIsometry {
    /// Builds from output stabilizers and logical X̄/Z̄ representatives with
    /// +1 signs: the Choi group is {1⊗S}, {X_i ⊗ X̄_i}, {Z_i ⊗ Z̄_i}.
    pub fn from_parts(
        n_in: usize,
        n_out: usize,
        stabilizers: &[PauliOperator],
        logical_x: &[PauliOperator],
        logical_z: &[PauliOperator],
    ) -> Result<Self, StabError> {
        assert_eq!(stabilizers.len(), n_out - n_in);
        assert_eq!(logical_x.len(), n_in);
        assert_eq!(logical_z.len(), n_in);
        let n = n_in + n_out;
        let mut gens = Vec::new();
        let lift_out = |p: &PauliOperator| -> PauliOperator {
            let mut q = PauliOperator::identity(n);
            for j in 0..n_out {
                q.x[n_in + j] = p.x[j];
                q.z[n_in + j] = p.z[j];
            }
            q.phase = p.phase;
            q
        };
        for s in stabilizers {
            gens.push(lift_out(s));
        }
        for (i, lx) in logical_x.iter().enumerate() {
            let mut g = lift_out(lx);
            g.x[i] = true;
            gens.push(g);
        }
        for (i, lz) in logical_z.iter().enumerate() {
            let mut g = lift_out(lz);
            g.z[i] = true;
            gens.push(g);
        }
        Ok(StabilizerIsometry {
            n_in,
            n_out,
            choi: StabilizerGroup::new(n, gens)?,
        })
    }

    pub fn input_qubits(&self) -> Vec<usize> {
        (0..self.n_in).collect()
    }

    pub fn output_qubits(&self) -> Vec<usize> {
        (self.n_in..self.n_in + self.n_out).collect()
    }

    /// A nontrivial Choi element supported on inputs alone certifies the map
    /// is projective rather than isometric.
    pub fn is_isometry(&self) -> bool {
        let dim = self
            .choi
            .supported_subgroup_dim(&self.input_qubits());
        dim == 0
    }

    /// Output stabilizers (Choi elements with identity input part),
    /// restricted to the output qubits.
    pub fn code_stabilizers(&self) -> Vec<PauliOperator> {
        let mut grp = self.choi.clone();
        grp.canonicalize();
        // Canonical form with x-then-z columns puts input-only rows last;
        // extract the subgroup with trivial input part by solving.
        let mut out = Vec::new();
        let m = grp.gens.len();
        // Coefficient-space kernel of the input-bit map.
        let mut rows: Vec<Vec<bool>> = Vec::new();
        for q in 0..self.n_in {
            for col in [q, grp.n + q] {
                rows.push((0..m).map(|j| {
                    if col < grp.n {
                        grp.gens[j].x[col]
                    } else {
                        grp.gens[j].z[col - grp.n]
                    }
                }).collect());
            }
        }
        let kernel = gf2_kernel_basis(&mut rows, m);
        for coeffs in kernel {
            let mut e = PauliOperator::identity(grp.n);
            for (j, &c) in coeffs.iter().enumerate() {
                if c {
                    e = e.mul(&grp.gens[j]);
                }
            }
            out.push(e.restricted(&self.output_qubits()));
        }
        out
    }

    /// Dense matrix of the isometry (small systems only, for cross-checks).
    /// Columns are indexed by the input computational basis; the overall
    /// phase is fixed by the first nonzero amplitude.
    pub fn to_dense(&self) -> CMat {
        let n = self.choi.n;
        assert!(n <= 20, "dense conversion limited to small systems");
        let dim = 1usize << n;
        // Project |0...0⟩ onto the stabilizer group, as a state vector.
        let mut amp = CVec::zeros(dim);
        amp[0] = C64::new(1.0, 0.0);
        for g in &self.choi.gens {
            let m = g.to_dense();
            let mut next = CVec::zeros(dim);
            for r in 0..dim {
                let mut acc = amp[r];
                for c in 0..dim {
                    if m[(r, c)] != C64::new(0.0, 0.0) {
                        acc += m[(r, c)] * amp[c];
                    }
                }
                next[r] = acc * C64::new(0.5, 0.0);
            }
            amp = next;
        }
        let norm: f64 = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            // |0..0⟩ is orthogonal to the state; seed with another basis state.
            let mut found = None;
            'outer: for seed in 1..dim {
                let mut a = CVec::zeros(dim);
                a[seed] = C64::new(1.0, 0.0);
                for g in &self.choi.gens {
                    let m = g.to_dense();
                    let mut next = CVec::zeros(dim);
                    for r in 0..dim {
                        let mut acc = a[r];
                        for c in 0..dim {
                            if m[(r, c)] != C64::new(0.0, 0.0) {
                                acc += m[(r, c)] * a[c];
                            }
                        }
                        next[r] = acc * C64::new(0.5, 0.0);
                    }
                    a = next;
                }
                let nn: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if nn > 1e-9 {
                    found = Some(a / C64::new(nn, 0.0));
                    break 'outer;
                }
            }
            amp = found.expect("stabilizer state has support somewhere");
        } else {
            amp = amp / C64::new(norm, 0.0);
        }
        // Unflatten: Choi amplitude C[x, y] with x the input bits (first
        // n_in qubits, most significant) and y the output bits; the isometry
        // is V[y, x] = √(2^{n_in}) C[x ⊕ y-combined index].
        let din = 1usize << self.n_in;
        let dout = 1usize << self.n_out;
        let scale = C64::new((din as f64).sqrt(), 0.0);
        let mut v = CMat::zeros((dout, din));
        for x in 0..din {
            for y in 0..dout {
                v[(y, x)] = amp[(x << self.n_out) | y] * scale;
            }
        }
        v
    }

    /// Finds a Pauli Q supported on `region` (output qubit indices, local to
    /// the outputs) with Q V = V P, or None.
    pub fn pauli_reconstruct(
        &self,
        logical: &PauliOperator,
        region: &[usize],
    ) -> Option<PauliOperator> {
        assert_eq!(logical.n, self.n_in);
        let pinned: Vec<(usize, bool, bool)> = (0..self.n_in)
            .map(|q| (q, logical.x[q], logical.z[q]))
            .collect();
        let forbidden: Vec<usize> = (0..self.n_out)
            .filter(|q| !region.contains(q))
            .map(|q| self.n_in + q)
            .collect();
        let e = self.choi.solve_with_constraints(&pinned, &forbidden)?;
        // e = (A ⊗ B) with A's bits equal to logical's bits. From
        // B V Aᵀ = V: Q = i^{p+a} B with p the logical phase and a built so
        // that (Aᵀ)⁻¹ = i^{−a}·word(A).
        let a = e.restricted(&self.input_qubits());
        let b = e.restricted(&self.output_qubits());
        // phase of e is carried entirely on one side; define a.phase as the
        // full element phase and b as the bare word.
        let mut q = PauliOperator {
            n: self.n_out,
            x: b.x,
            z: b.z,
            phase: 0,
        };
        // Split: e = i^e_phase (word_A ⊗ word_B). We need the phase γ with
        // (i^γ word_A ⊗ word_B-side Q) stabilizing. BVAᵀ = V means the
        // element (A ⊗ B) = i^{e.phase} (word_A ⊗ word_B) stabilizes, so
        // treating A := i^{e.phase} word_A and B := word_B:
        // Q = i^{logical.phase + e.phase} word_B gives Q V = V P, since
        // (Aᵀ)⁻¹ = i^{−e.phase} word_A and P = i^{logical.phase} word_A.
        let _ = a;
        q.phase = (logical.phase + e.phase) % 4;
        Some(q)
    }

    /// The logical action of a physical Pauli that preserves the codespace:
    /// finds L with P V = V L, or None when P does not preserve the code.
    pub fn logical_action(&self, physical: &PauliOperator) -> Option<PauliOperator> {
        assert_eq!(physical.n, self.n_out);
        let pinned: Vec<(usize, bool, bool)> = (0..self.n_out)
            .map(|q| (self.n_in + q, physical.x[q], physical.z[q]))
            .collect();
        let e = self.choi.solve_with_constraints(&pinned, &[])?;
        // e = (A ⊗ B) with B's bits = physical's bits and overall phase
        // e.phase: B V Aᵀ = V with B := i^{e.phase} word_B. Then
        // P V = i^{physical.phase − e.phase} word_B V = ... = V L with
        // L = i^{physical.phase − e.phase} (word_Aᵀ)⁻¹.
        let a = e.restricted(&self.input_qubits());
        let word_a = PauliOperator {
            n: self.n_in,
            x: a.x,
            z: a.z,
            phase: 0,
        };
        let mut l = word_a.transpose().inverse();
        l.phase = (l.phase + physical.phase + 4 - e.phase % 4 + 4) % 4;
        Some(l)
    }
}

fn gf2_kernel_basis(rows: &mut Vec<Vec<bool>>, m: usize) -> Vec<Vec<bool>> {
    // Kernel of the map coeff ↦ rows·coeff.
    let nrows = rows.len();
    let mut mat: Vec<Vec<bool>> = rows.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..m {
        let mut pivot = None;
        for r in rank..nrows {
            if mat[r][col] {
                pivot = Some(r);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        mat.swap(rank, p);
        for r in 0..nrows {
            if r != rank && mat[r][col] {
                let (a, b) = if r < rank {
                    let (lo, hi) = mat.split_at_mut(rank);
                    (&mut lo[r], &hi[0])
                } else {
                    let (lo, hi) = mat.split_at_mut(r);
                    (&mut hi[0], &lo[rank])
                };
                for c in 0..m {
                    a[c] ^= b[c];
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..m {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![false; m];
        v[free] = true;
        // Back-substitute pivot coordinates.
        for (r, &pc) in pivots.iter().enumerate() {
            if mat[r][free] {
                v[pc] = true;
            }
        }
        basis.push(v);
    }
    basis
}

/// The five-qubit-code encoder (1 → 5): stabilizers are the cyclic shifts of
/// XZZXI, logicals X̄ = X⊗⁵ and Z̄ = Z⊗⁵.
pub fn perfect_tensor() -> StabilizerIsometry {
    let stabs = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
        .iter()
        .map(|s| PauliOperator::from_str(s))
        .collect::<Vec<_>>();
    StabilizerIsometry::from_parts(
        1,
        5,
        &stabs,
        &[PauliOperator::from_str("XXXXX")],
        &[PauliOperator::from_str("ZZZZZ")],
    )
    .expect("five-qubit code")
}

/// The six-leg perfect-tensor state (0 → 6): the Choi state of the five-qubit
/// encoder, stabilized in particular by X on all six legs.
pub fn six_leg_state() -> StabilizerIsometry {
    let stabs = [
        "IXZZXI", "IIXZZX", "IXIXZZ", "IZXIXZ", "XXXXXX", "ZZZZZZ",
    ]
    .iter()
    .map(|s| PauliOperator::from_str(s))
    .collect::<Vec<_>>();
    StabilizerIsometry::from_parts(0, 6, &stabs, &[], &[]).expect("six-leg state")
}

/// The Z2 copying tensor (1 → 2): conjugate of |i⟩ ↦ |i⟩|i⟩ for i ∈ {+, −}.
/// Output stabilizer XX; X̄ is implementable as X⊗1 (or 1⊗X); Z̄ = ZZ.
pub fn copy_tensor_z2() -> StabilizerIsometry {
    StabilizerIsometry::from_parts(
        1,
        2,
        &[PauliOperator::from_str("XX")],
        &[PauliOperator::from_str("XI")],
        &[PauliOperator::from_str("ZZ")],
    )
    .expect("copy tensor")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Leg {
    In(usize),
    Out(usize),
}

/// Network composer: add tensors, contract leg pairs, then finish with an
/// explicit ordering of the remaining legs.
pub struct Network {
    tensors: Vec<StabilizerIsometry>,
    contractions: Vec<((usize, Leg), (usize, Leg))>,
}

impl Network {
    pub fn new() -> Self {
        Network {
            tensors: Vec::new(),
            contractions: Vec::new(),
        }
    }

    pub fn add(&mut self, t: StabilizerIsometry) -> usize {
        self.tensors.push(t);
        self.tensors.len() - 1
    }

    pub fn contract(&mut self, a: (usize, Leg), b: (usize, Leg)) {
        self.contractions.push((a, b));
    }

    /// Performs every contraction as a Bell postselection on the joined Choi
    /// state and returns the isometry with the requested leg orderings.
    pub fn finish(
        &self,
        input_order: &[(usize, Leg)],
        output_order: &[(usize, Leg)],
    ) -> Result<StabilizerIsometry, StabError> {
        // Global qubit index per (tensor, leg).
        let mut offset = Vec::new();
        let mut total = 0usize;
        for t in &self.tensors {
            offset.push(total);
            total += t.choi.n;
        }
        let global = |t: usize, leg: Leg| -> usize {
            match leg {
                Leg::In(i) => offset[t] + i,
                Leg::Out(o) => offset[t] + self.tensors[t].n_in + o,
            }
        };
        let mut gens: Vec<PauliOperator> = Vec::new();
        for (ti, t) in self.tensors.iter().enumerate() {
            for g in &t.choi.gens {
                let mut lifted = PauliOperator::identity(total);
                for q in 0..t.choi.n {
                    lifted.x[offset[ti] + q] = g.x[q];
                    lifted.z[offset[ti] + q] = g.z[q];
                }
                lifted.phase = g.phase;
                gens.push(lifted);
            }
        }
        let mut group = StabilizerGroup::new(total, gens)?;
        // Bell postselection per contraction.
        let mut removed: Vec<usize> = Vec::new();
        for &(a, b) in &self.contractions {
            let qa = global(a.0, a.1);
            let qb = global(b.0, b.1);
            let mut xx = PauliOperator::identity(total);
            xx.x[qa] = true;
            xx.x[qb] = true;
            let mut zz = PauliOperator::identity(total);
            zz.z[qa] = true;
            zz.z[qb] = true;
            postselect(&mut group, &xx)?;
            postselect(&mut group, &zz)?;
            clean_pair(&mut group, qa, qb, &xx, &zz);
            removed.push(qa);
            removed.push(qb);
        }
        // Remove the contracted qubits (columns); generators have identity
        // there after cleaning.
        removed.sort_unstable();
        let keep: Vec<usize> = (0..total).filter(|q| !removed.contains(q)).collect();
        let mut new_gens: Vec<PauliOperator> = Vec::new();
        for g in &group.gens {
            debug_assert!(keep
                .iter()
                .copied()
                .chain(removed.iter().copied())
                .count() == total);
            let mut ng = PauliOperator::identity(keep.len());
            for (pos, &q) in keep.iter().enumerate() {
                ng.x[pos] = g.x[q];
                ng.z[pos] = g.z[q];
            }
            ng.phase = g.phase;
            if ng.is_identity_word() && ng.phase == 0 {
                continue;
            }
            new_gens.push(ng);
        }
        // Reindex the desired leg orders within the kept qubits.
        let mut perm: Vec<usize> = Vec::new();
        for &(t, leg) in input_order.iter().chain(output_order.iter()) {
            let q = global(t, leg);
            let pos = keep
                .iter()
                .position(|&k| k == q)
                .ok_or_else(|| StabError::BadPlan(format!("leg {t}/{leg:?} was contracted")))?;
            perm.push(pos);
        }
        if perm.len() != keep.len() {
            return Err(StabError::BadPlan(format!(
                "leg orders cover {} of {} remaining legs",
                perm.len(),
                keep.len()
            )));
        }
        let n_new = keep.len();
        let permuted: Vec<PauliOperator> = new_gens
            .iter()
            .map(|g| {
                let mut ng = PauliOperator::identity(n_new);
                for (new_pos, &old_pos) in perm.iter().enumerate() {
                    ng.x[new_pos] = g.x[old_pos];
                    ng.z[new_pos] = g.z[old_pos];
                }
                ng.phase = g.phase;
                ng
            })
            .collect();
        // Independent spanning set.
        let mut grp = StabilizerGroup {
            n: n_new,
            gens: permuted,
        };
        grp.canonicalize();
        if grp.gens.len() != n_new {
            return Err(StabError::BadPlan(format!(
                "contracted group has {} generators on {} qubits",
                grp.gens.len(),
                n_new
            )));
        }
        Ok(StabilizerIsometry {
            n_in: input_order.len(),
            n_out: output_order.len(),
            choi: grp,
        })
    }
}

impl Default for Network {
    fn default() -> Self {
        Self::new()
    }
}

/// Postselects the +1 outcome of measuring `m` on a full stabilizer state.
fn postselect(group: &mut StabilizerGroup, m: &PauliOperator) -> Result<(), StabError> {
    let anti: Vec<usize> = (0..group.gens.len())
        .filter(|&i| !group.gens[i].commutes(m))
        .collect();
    if let Some(&first) = anti.first() {
        let pivot = group.gens[first].clone();
        for &i in &anti[1..] {
            group.gens[i] = group.gens[i].mul(&pivot);
        }
        group.gens[first] = m.clone();
        Ok(())
    } else {
        match group.member_phase(m) {
            Some(0) => Ok(()),
            Some(2) => Err(StabError::ZeroContraction),
            Some(p) => Err(StabError::BadPlan(format!(
                "non-Hermitian membership phase {p}"
            ))),
            None => Err(StabError::BadPlan(
                "measurement commutes with a maximal group but is not a member".into(),
            )),
        }
    }
}

/// After postselecting XX and ZZ on (qa, qb), multiplies generators by group
/// elements so every generator acts as identity on the pair.
fn clean_pair(group: &mut StabilizerGroup, qa: usize, qb: usize, xx: &PauliOperator, zz: &PauliOperator) {
    // Representatives of XX and ZZ on the pair inside the group: after
    // postselection they are members; find exact representatives.
    let rep = |target: &PauliOperator, group: &StabilizerGroup| -> PauliOperator {
        // Prefer a generator equal on the pair to the target and erase the
        // rest via reduction; assemble via membership over the full word is
        // not available (tails differ), so use constrained solve.
        let pinned = vec![
            (qa, target.x[qa], target.z[qa]),
            (qb, target.x[qb], target.z[qb]),
        ];
        group
            .solve_with_constraints(&pinned, &[])
            .expect("pair representative exists after postselection")
    };
    let e_xx = rep(xx, group);
    let e_zz = rep(zz, group);
    let e_yy = e_xx.mul(&e_zz);
    for g in group.gens.iter_mut() {
        let pat = (g.x[qa], g.z[qa], g.x[qb], g.z[qb]);
        let fix = match pat {
            (false, false, false, false) => None,
            (true, false, true, false) => Some(&e_xx),
            (false, true, false, true) => Some(&e_zz),
            (true, true, true, true) => Some(&e_yy),
            other => panic!("pair pattern {other:?} should not survive postselection"),
        };
        if let Some(f) = fix {
            *g = g.mul(f);
        }
    }
}

/// Gauss-law stabilizer set for a Z2 structure: A_v(1) = X_v ∏_{e∈E(v)} X_e
/// for each GC vertex, over qubits ordered [qubit-carrying vertices
/// ascending, then edges ascending]. Returns the operators and the qubit
/// index map.
pub fn z2_gauge_projector_tableau(
    graph: &LabeledGraph,
    qubit_vertices: &[u32],
) -> (Vec<PauliOperator>, BTreeMap<crate::tensor::Label, usize>) {
    let mut index: BTreeMap<crate::tensor::Label, usize> = BTreeMap::new();
    let mut next = 0usize;
    let mut vs: Vec<u32> = qubit_vertices.to_vec();
    vs.sort_unstable();
    for &v in &vs {
        index.insert(crate::tensor::Label::Vertex(v), next);
        next += 1;
    }
    for &(a, b) in graph.edges() {
        index.insert(crate::tensor::Label::Edge(a, b), next);
        next += 1;
    }
    let n = next;
    let mut gens = Vec::new();
    for v in graph.v1() {
        let mut p = PauliOperator::identity(n);
        if let Some(&qi) = index.get(&crate::tensor::Label::Vertex(v)) {
            p.x[qi] = true;
        }
        for (a, b) in graph.incident(v) {
            p.x[index[&crate::tensor::Label::Edge(a, b)]] = true;
        }
        gens.push(p);
    }
    (gens, index)
}

/// Completes a set of commuting independent stabilizers on n qubits into an
/// encoder isometry for the stabilized subspace: k = n − m logical qubits
/// with canonical X̄/Z̄ pairs found by symplectic completion.
pub fn subspace_encoder(n: usize, stabilizers: &[PauliOperator]) -> Result<StabilizerIsometry, StabError> {
    let m = stabilizers.len();
    for s in stabilizers {
        assert_eq!(s.n, n);
    }
    // Candidate logicals: kernel of the symplectic form against stabilizers,
    // modulo the stabilizer span.
    let mut all: Vec<PauliOperator> = Vec::new();
    // Work with the full Pauli bit space basis: X_q and Z_q.
    for q in 0..n {
        let mut p = PauliOperator::identity(n);
        p.x[q] = true;
        all.push(p);
        let mut p = PauliOperator::identity(n);
        p.z[q] = true;
        all.push(p);
    }
    // Span tracking over GF(2) rows (x|z bits).
    let to_row = |p: &PauliOperator| -> Vec<bool> {
        let mut r = p.x.clone();
        r.extend_from_slice(&p.z);
        r
    };
    let mut span_rows: Vec<Vec<bool>> = stabilizers.iter().map(to_row).collect();
    let in_span = |rows: &[Vec<bool>], cand: &Vec<bool>| -> bool {
        let mut m: Vec<Vec<bool>> = rows.to_vec();
        let before = gf2_rank(&mut m);
        let mut m2: Vec<Vec<bool>> = rows.to_vec();
        m2.push(cand.clone());
        let after = gf2_rank(&mut m2);
        after == before
    };
    let k = n - m;
    let mut logical_x: Vec<PauliOperator> = Vec::new();
    let mut logical_z: Vec<PauliOperator> = Vec::new();
    // Commutant candidates: products of basis Paulis commuting with all
    // stabilizers — solve for the kernel of the symplectic constraint.
    let mut constraint_rows: Vec<Vec<bool>> = Vec::new();
    for s in stabilizers {
        // commutation of candidate c with s: Σ_q c.x[q] s.z[q] + c.z[q] s.x[q] = 0
        let mut row = vec![false; 2 * n];
        for q in 0..n {
            row[q] = s.z[q];
            row[n + q] = s.x[q];
        }
        constraint_rows.push(row);
    }
    let kernel = gf2_kernel_basis(&mut constraint_rows.clone(), 2 * n);
    let mut commutant: Vec<PauliOperator> = kernel
        .iter()
        .map(|bits| {
            let mut p = PauliOperator::identity(n);
            for q in 0..n {
                p.x[q] = bits[q];
                p.z[q] = bits[n + q];
            }
            p
        })
        .collect();
    // Greedy symplectic pairing.
    for _pair in 0..k {
        // First commutant element outside the current span.
        let lx_pos = commutant
            .iter()
            .position(|c| !in_span(&span_rows, &to_row(c)))
            .ok_or(StabError::BadGenerators)?;
        let lx = commutant.remove(lx_pos);
        let lz_pos = commutant
            .iter()
            .position(|c| !c.commutes(&lx) && !in_span(&span_rows, &to_row(c)))
            .ok_or(StabError::BadGenerators)?;
        let lz = commutant.remove(lz_pos);
        // Fix remaining commutant elements to commute with the new pair.
        for c in commutant.iter_mut() {
            if !c.commutes(&lx) {
                *c = c.mul(&lz);
            }
            if !c.commutes(&lz) {
                *c = c.mul(&lx);
            }
        }
        span_rows.push(to_row(&lx));
        span_rows.push(to_row(&lz));
        // Kernel-basis words carry phase 0 already; keep them as the
        // canonical logical representatives.
        logical_x.push(lx);
        logical_z.push(lz);
    }
    StabilizerIsometry::from_parts(k, n, stabilizers, &logical_x, &logical_z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dist, matmul};

    #[test]
    fn pauli_arithmetic() {
        let x = PauliOperator::from_str("X");
        let z = PauliOperator::from_str("Z");
        let y = PauliOperator::from_str("Y");
        // XZ = −iY
        let xz = x.mul(&z);
        assert_eq!(xz.x, vec![true]);
        assert_eq!(xz.z, vec![true]);
        assert_eq!((xz.phase + 1) % 4, y.phase);
        assert!(!x.commutes(&z));
        assert!(x.commutes(&x));
        // Dense agreement for all pairs.
        for a in ["I", "X", "Y", "Z"] {
            for b in ["I", "X", "Y", "Z"] {
                let pa = PauliOperator::from_str(a);
                let pb = PauliOperator::from_str(b);
                let prod = pa.mul(&pb);
                assert!(
                    dist(&prod.to_dense(), &matmul(&pa.to_dense(), &pb.to_dense())) < 1e-14,
                    "{a}{b}"
                );
                let inv = pa.inverse();
                assert!(
                    dist(
                        &matmul(&inv.to_dense(), &pa.to_dense()),
                        &crate::linalg::identity(2)
                    ) < 1e-14
                );
                let mut tr = pa.to_dense();
                tr.swap_axes(0, 1);
                assert!(dist(&pa.transpose().to_dense(), &tr) < 1e-14);
            }
        }
    }

    #[test]
    fn five_qubit_perfectness_symplectic() {
        let state = six_leg_state();
        assert!(state.is_isometry());
        // X on all legs stabilizes.
        let x6 = PauliOperator::from_str("XXXXXX");
        assert_eq!(state.choi.member_phase(&x6), Some(0));
        // Any 2 legs maximally mixed, every 3-3 bipartition too.
        for a in 0..6usize {
            for b in (a + 1)..6 {
                let dim = state.choi.supported_subgroup_dim(&[6 + a, 6 + b]);
                assert_eq!(dim, 0, "{a},{b}");
            }
        }
        let mut count = 0;
        for a in 0..6usize {
            for b in (a + 1)..6 {
                for c in (b + 1)..6 {
                    let dim = state.choi.supported_subgroup_dim(&[6 + a, 6 + b, 6 + c]);
                    assert_eq!(dim, 0, "{a},{b},{c}");
                    count += 1;
                }
            }
        }
        assert_eq!(count, 20);
    }

    #[test]
    fn perfect_tensor_dense_agrees_with_projector_construction() {
        let iso = perfect_tensor();
        assert!(iso.is_isometry());
        let v = iso.to_dense();
        // V†V = 1.
        let vv = crate::linalg::matmul_hc_left(&v, &v);
        assert!(dist(&vv, &crate::linalg::identity(2)) < 1e-10);
        // Stabilizers act trivially on the image.
        for s in ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"] {
            let m = PauliOperator::from_str(s).to_dense();
            assert!(dist(&matmul(&m, &v), &v) < 1e-10, "{s}");
        }
        // X̄ and Z̄ act as logical X and Z.
        let xbar = PauliOperator::from_str("XXXXX").to_dense();
        let vx = matmul(&xbar, &v);
        let xv = matmul(&v, &crate::tensor::pauli_x());
        assert!(dist(&vx, &xv) < 1e-10);
    }

    #[test]
    fn copy_tensor_basics() {
        let c = copy_tensor_z2();
        assert!(c.is_isometry());
        let v = c.to_dense();
        // |+⟩ ↦ |++⟩.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = ndarray::array![[C64::new(s, 0.0)], [C64::new(s, 0.0)]];
        let out = matmul(&v, &plus);
        let plusplus = [0.5, 0.5, 0.5, 0.5];
        for i in 0..4 {
            assert!((out[(i, 0)].re - plusplus[i]).abs() < 1e-10);
        }
        // Input X implemented by X on either single output.
        for region in [vec![0usize], vec![1usize]] {
            let q = c
                .pauli_reconstruct(&PauliOperator::from_str("X"), &region)
                .unwrap();
            assert_eq!(q.weight(), 1);
            let qd = q.to_dense();
            assert!(dist(&matmul(&qd, &v), &matmul(&v, &crate::tensor::pauli_x())) < 1e-10);
        }
        // Z̄ = ZZ.
        let qz = c
            .pauli_reconstruct(&PauliOperator::from_str("Z"), &[0, 1])
            .unwrap();
        let qzd = qz.to_dense();
        assert!(dist(&matmul(&qzd, &v), &matmul(&v, &crate::tensor::pauli_z())) < 1e-10);
    }

    #[test]
    fn copy_tensor_matches_grand_orthogonality_tensor_up_to_local_basis() {
        // W = (H ⊗ H) ∘ V_copy for Z2.
        let c = copy_tensor_z2().to_dense();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ndarray::array![
            [C64::new(s, 0.0), C64::new(s, 0.0)],
            [C64::new(s, 0.0), C64::new(-s, 0.0)]
        ];
        let hh = kron(&h, &h);
        let w = matmul(&hh, &c);
        // Oracle: W|0⟩ = (|00⟩+|11⟩)/√2, W|1⟩ = (|00⟩−|11⟩)/√2.
        let expect = [
            [s, s],
            [0.0, 0.0],
            [0.0, 0.0],
            [s, -s],
        ];
        for i in 0..4 {
            for j in 0..2 {
                assert!((w[(i, j)].re - expect[i][j]).abs() < 1e-10, "{i},{j}");
            }
        }
    }

    #[test]
    fn chained_copy_tensors_give_ghz_class() {
        let mut net = Network::new();
        let c1 = net.add(copy_tensor_z2());
        let c2 = net.add(copy_tensor_z2());
        net.contract((c1, Leg::Out(1)), (c2, Leg::In(0)));
        let iso = net
            .finish(
                &[(c1, Leg::In(0))],
                &[(c1, Leg::Out(0)), (c2, Leg::Out(0)), (c2, Leg::Out(1))],
            )
            .unwrap();
        assert!(iso.is_isometry());
        assert_eq!(iso.n_in, 1);
        assert_eq!(iso.n_out, 3);
        // Stabilizers {XX1, 1XX}; logical Z̄ = ZZZ, X̄ = X11.
        let stabs = iso.code_stabilizers();
        let mut grp = StabilizerGroup::new(3, stabs).unwrap();
        grp.canonicalize();
        assert_eq!(grp.gens.len(), 2);
        assert_eq!(grp.member_phase(&PauliOperator::from_str("XXI")), Some(0));
        assert_eq!(grp.member_phase(&PauliOperator::from_str("IXX")), Some(0));
        let qz = iso
            .pauli_reconstruct(&PauliOperator::from_str("Z"), &[0, 1, 2])
            .unwrap();
        let mut zzz = PauliOperator::from_str("ZZZ");
        // Z reconstruction may differ by a stabilizer; check action densely.
        let v = iso.to_dense();
        zzz.phase = 0;
        assert!(
            dist(
                &matmul(&qz.to_dense(), &v),
                &matmul(&v, &crate::tensor::pauli_z())
            ) < 1e-10
        );
        // Dense cross-check of the chain against direct contraction.
        let c = copy_tensor_z2().to_dense();
        let id2 = crate::linalg::identity(2);
        let chain = matmul(&kron(&id2, &c), &c);
        let phase = fix_global_phase(&v, &chain);
        assert!(dist(&(v * phase), &chain) < 1e-10);
    }

    /// Finds the phase aligning a with b (assumes equality up to phase).
    pub(crate) fn fix_global_phase(a: &CMat, b: &CMat) -> C64 {
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                if a[(i, j)].norm() > 1e-8 {
                    return b[(i, j)] / a[(i, j)];
                }
            }
        }
        C64::new(1.0, 0.0)
    }

    #[test]
    fn single_tensor_identity_composition() {
        let mut net = Network::new();
        let t = net.add(perfect_tensor());
        let iso = net
            .finish(
                &[(t, Leg::In(0))],
                &(0..5).map(|o| (t, Leg::Out(o))).collect::<Vec<_>>(),
            )
            .unwrap();
        let a = iso.to_dense();
        let b = perfect_tensor().to_dense();
        let phase = fix_global_phase(&a, &b);
        assert!(dist(&(a * phase), &b) < 1e-10);
    }

    #[test]
    fn pauli_reconstruct_five_qubit() {
        let iso = perfect_tensor();
        // Z̄ on qubits {1,2,3}: found.
        let q = iso
            .pauli_reconstruct(&PauliOperator::from_str("Z"), &[1, 2, 3])
            .unwrap();
        assert!(q.is_supported_on(&[1, 2, 3]));
        let v = iso.to_dense();
        assert!(
            dist(
                &matmul(&q.to_dense(), &v),
                &matmul(&v, &crate::tensor::pauli_z())
            ) < 1e-10
        );
        // Z̄ on {1,2}: absent.
        assert!(iso
            .pauli_reconstruct(&PauliOperator::from_str("Z"), &[1, 2])
            .is_none());
        // Identity reconstructs to identity.
        let qi = iso
            .pauli_reconstruct(&PauliOperator::from_str("I"), &[])
            .unwrap();
        assert!(qi.is_identity_word());
        assert_eq!(qi.phase, 0);
    }

    #[test]
    fn reconstruct_with_y_logical_has_exact_phase() {
        let iso = perfect_tensor();
        let y = PauliOperator::from_str("Y");
        let q = iso.pauli_reconstruct(&y, &[0, 1, 2, 3, 4]).unwrap();
        let v = iso.to_dense();
        assert!(dist(&matmul(&q.to_dense(), &v), &matmul(&v, &y.to_dense())) < 1e-10);
    }

    #[test]
    fn logical_action_roundtrip() {
        let iso = perfect_tensor();
        let xbar = PauliOperator::from_str("XXXXX");
        let l = iso.logical_action(&xbar).unwrap();
        assert_eq!(l.x, vec![true]);
        assert_eq!(l.z, vec![false]);
        assert_eq!(l.phase, 0);
        // A non-preserving Pauli has no logical action.
        assert!(iso.logical_action(&PauliOperator::from_str("XIIII")).is_none());
        // Dense check including Y phases.
        let ybar = PauliOperator::from_str("XXXXX").mul(&PauliOperator::from_str("ZZZZZ"));
        let l2 = iso.logical_action(&ybar).unwrap();
        let v = iso.to_dense();
        assert!(
            dist(
                &matmul(&ybar.to_dense(), &v),
                &matmul(&v, &l2.to_dense())
            ) < 1e-10
        );
    }

    #[test]
    fn z2_gauge_tableau_examples() {
        // Single GC vertex with one dangling edge: {X_v X_e}.
        let g = LabeledGraph::new(&[(0, 0), (1, 1)], &[(0, 1)], None).unwrap();
        let (gens, index) = z2_gauge_projector_tableau(&g, &[1]);
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].weight(), 2);
        assert_eq!(index.len(), 2);

        // Triangle all GC with trivial vertices: three X-pair operators with
        // GF(2) rank 2 (product relation).
        let tri = LabeledGraph::new(
            &[(0, 1), (1, 1), (2, 1)],
            &[(0, 1), (1, 2), (0, 2)],
            None,
        )
        .unwrap();
        let (gens, _) = z2_gauge_projector_tableau(&tri, &[]);
        assert_eq!(gens.len(), 3);
        let mut rows: Vec<Vec<bool>> = gens
            .iter()
            .map(|g| {
                let mut r = g.x.clone();
                r.extend_from_slice(&g.z);
                r
            })
            .collect();
        assert_eq!(super::gf2_rank(&mut rows), 2);

        // Empty V1 → empty set.
        let e = LabeledGraph::new(&[(0, 0), (1, 0)], &[], None).unwrap();
        let (gens, _) = z2_gauge_projector_tableau(&e, &[]);
        assert!(gens.is_empty());
    }

    #[test]
    fn subspace_encoder_roundtrip() {
        // Gauss law on the single-edge graph: stabilizer X_v X_e on 2 qubits.
        let gens = vec![PauliOperator::from_str("XX")];
        let iso = subspace_encoder(2, &gens).unwrap();
        assert!(iso.is_isometry());
        assert_eq!(iso.n_in, 1);
        let v = iso.to_dense();
        // Image is stabilized by XX.
        let xx = PauliOperator::from_str("XX").to_dense();
        assert!(dist(&matmul(&xx, &v), &v) < 1e-10);
        let vv = crate::linalg::matmul_hc_left(&v, &v);
        assert!(dist(&vv, &crate::linalg::identity(2)) < 1e-10);
    }

    #[test]
    fn composition_associativity_canonical_form() {
        // Contracting a 3-chain of copy tensors in either order gives the
        // same canonical stabilizer group.
        let build = |order: [usize; 2]| -> StabilizerGroup {
            let mut net = Network::new();
            let a = net.add(copy_tensor_z2());
            let b = net.add(copy_tensor_z2());
            let c = net.add(copy_tensor_z2());
            let pairs = [
                ((a, Leg::Out(1)), (b, Leg::In(0))),
                ((b, Leg::Out(1)), (c, Leg::In(0))),
            ];
            for &i in &order {
                net.contract(pairs[i].0, pairs[i].1);
            }
            let iso = net
                .finish(
                    &[(a, Leg::In(0))],
                    &[
                        (a, Leg::Out(0)),
                        (b, Leg::Out(0)),
                        (c, Leg::Out(0)),
                        (c, Leg::Out(1)),
                    ],
                )
                .unwrap();
            let mut g = iso.choi;
            g.canonicalize();
            g
        };
        let g1 = build([0, 1]);
        let g2 = build([1, 0]);
        assert_eq!(g1.gens.len(), g2.gens.len());
        for (a, b) in g1.gens.iter().zip(g2.gens.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn zero_contraction_detected() {
        // Postselecting a Bell pair against |0⟩⟨0|-like structure: contract
        // two outputs of a GHZ state prepared so ZZ has value −1 is hard to
        // arrange with isometries; instead check prepared states: a |Φ−⟩-like
        // pair. Build a 0→2 "state" stabilized by −XX and ZZ.
        let mut minus_xx = PauliOperator::from_str("XX");
        minus_xx.phase = 2;
        let st = StabilizerIsometry::from_parts(
            0,
            2,
            &[minus_xx, PauliOperator::from_str("ZZ")],
            &[],
            &[],
        )
        .unwrap();
        let mut net = Network::new();
        let s = net.add(st);
        net.contract((s, Leg::Out(0)), (s, Leg::Out(1)));
        let r = net.finish(&[], &[]);
        assert_eq!(r.unwrap_err(), StabError::ZeroContraction);
    }
}
