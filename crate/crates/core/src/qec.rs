//! Erasure-correctability primitives: the commutator criterion for
//! correctable regions, reconstruction on region complements, and unitary /
//! representation lifts onto a codespace-preserving implementation.

use crate::linalg::{self, dagger, eigh, matmul, matmul_hc_left, CMat, C64};
use crate::tensor::{Factorization, Label, LabeledOperator, TensorError};
use crate::EIG_FLOOR;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QecError {
    #[error("region is not correctable for the given algebra (max violation {0:e})")]
    NotCorrectable(f64),
    #[error("reconstruction residual {0:e} exceeds tolerance")]
    IllConditioned(f64),
    #[error("representation repair failed: homomorphism deviation {0:e}")]
    RepresentationRepairFailed(f64),
    #[error("logical unitary has unbounded order (no finite cyclic group found)")]
    UnboundedOrder,
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Encoding isometry between a logical and a physical factorization.
#[derive(Debug, Clone)]
pub struct CodeIsometry {
    /// physical-dim × logical-dim matrix.
    pub matrix: CMat,
    pub logical_fact: Factorization,
    pub physical_fact: Factorization,
}

impl CodeIsometry {
    pub fn new(matrix: CMat, logical_fact: Factorization, physical_fact: Factorization) -> Self {
        assert_eq!(matrix.nrows(), physical_fact.total_dim());
        assert_eq!(matrix.ncols(), logical_fact.total_dim());
        CodeIsometry {
            matrix,
            logical_fact,
            physical_fact,
        }
    }

    pub fn logical_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn physical_dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// ‖V†V − 1‖_F
    pub fn isometry_deviation(&self) -> f64 {
        let vv = matmul_hc_left(&self.matrix, &self.matrix);
        linalg::dist(&vv, &linalg::identity(self.logical_dim()))
    }

    /// Codespace projector P = V V†.
    pub fn codespace_projector(&self) -> CMat {
        matmul(&self.matrix, &dagger(&self.matrix))
    }

    /// V O_L V† for a logical operator.
    pub fn push(&self, logical: &CMat) -> CMat {
        matmul(&matmul(&self.matrix, logical), &dagger(&self.matrix))
    }

    /// V† O_P V for a physical operator.
    pub fn pull(&self, physical: &CMat) -> CMat {
        matmul(&matmul_hc_left(&self.matrix, physical), &self.matrix)
    }

    /// Composition: other ∘ self is invalid; this is self ∘ inner, i.e. the
    /// isometry that first applies `inner` then `self`.
    pub fn compose(&self, inner: &CodeIsometry) -> CodeIsometry {
        assert_eq!(self.logical_dim(), inner.physical_dim());
        CodeIsometry::new(
            matmul(&self.matrix, &inner.matrix),
            inner.logical_fact.clone(),
            self.physical_fact.clone(),
        )
    }
}

/// Splits the physical index into (region, complement) index offsets, with
/// the region listed in canonical label order.
fn region_split(
    fact: &Factorization,
    region: &BTreeSet<Label>,
) -> Result<(Vec<usize>, Vec<usize>), TensorError> {
    let r_fact = fact.restrict(region)?;
    let comp: BTreeSet<Label> = fact.complement_labels(region);
    let c_fact = fact.restrict(&comp)?;
    let strides = fact.strides();
    let mut r_offs = Vec::with_capacity(r_fact.total_dim());
    let mut c_offs = Vec::with_capacity(c_fact.total_dim());
    offsets_into(&r_fact, fact, &strides, &mut r_offs);
    offsets_into(&c_fact, fact, &strides, &mut c_offs);
    Ok((r_offs, c_offs))
}

fn offsets_into(sub: &Factorization, host: &Factorization, strides: &[usize], out: &mut Vec<usize>) {
    let dims: Vec<usize> = sub.subsystems().iter().map(|s| s.dim).collect();
    let sub_strides: Vec<usize> = sub
        .labels()
        .map(|l| strides[host.position(l).unwrap()])
        .collect();
    let total: usize = dims.iter().product();
    for flat in 0..total {
        let mut rem = flat;
        let mut acc = 0;
        for k in (0..dims.len()).rev() {
            acc += (rem % dims[k]) * sub_strides[k];
            rem /= dims[k];
        }
        out.push(acc);
    }
}

/// The "logical shadows" N_ab = V† (|a⟩⟨b|_R ⊗ 1) V for all region basis
/// pairs, as blocks indexed by (a, b).
struct Shadows {
    blocks: Vec<CMat>,
    dr: usize,
}

fn logical_shadows(code: &CodeIsometry, region: &BTreeSet<Label>) -> Result<Shadows, TensorError> {
    let (r_offs, c_offs) = region_split(&code.physical_fact, region)?;
    let dr = r_offs.len();
    let dc = c_offs.len();
    let dl = code.logical_dim();
    // V[a]: dc × dl slice of V at region index a.
    let slice = |a: usize| -> CMat {
        let mut m = CMat::zeros((dc, dl));
        for (s, &oc) in c_offs.iter().enumerate() {
            for l in 0..dl {
                m[(s, l)] = code.matrix[(r_offs[a] + oc, l)];
            }
        }
        m
    };
    let slices: Vec<CMat> = (0..dr).map(slice).collect();
    let mut blocks = Vec::with_capacity(dr * dr);
    for a in 0..dr {
        for b in 0..dr {
            blocks.push(matmul_hc_left(&slices[a], &slices[b]));
        }
    }
    Ok(Shadows { blocks, dr })
}

/// Commutator criterion for correctability of `region` with respect to the
/// algebra generated by `algebra` (logical operators).
///
/// The region is correctable iff [P O_R P, V Y V†] = 0 for every operator
/// O_R on the region and every Y in the algebra, which is equivalent to
/// every logical shadow V†(|a⟩⟨b|_R ⊗ 1)V commuting with every generator.
/// The aggregate Σ_ab ‖[N_ab, Y]‖² is evaluated through traces of small
/// Gram matrices; the per-pair witness scan only runs on small regions.
/// Returns the violation and, when above tolerance, a witness
/// (region basis pair, generator index) if the scan is affordable.
pub fn correctability_violation(
    code: &CodeIsometry,
    region: &BTreeSet<Label>,
    algebra: &[CMat],
) -> Result<(f64, Option<(usize, usize, usize)>), QecError> {
    let (r_offs, c_offs) = region_split(&code.physical_fact, region)?;
    let dr = r_offs.len();
    let dc = c_offs.len();
    let dl = code.logical_dim();
    // M: dc × (dr·dl) with M[s, a·dl + i] = V[(a,s), i].
    let mut m = CMat::zeros((dc, dr * dl));
    for (a, &oa) in r_offs.iter().enumerate() {
        for (s, &os) in c_offs.iter().enumerate() {
            for i in 0..dl {
                m[(s, a * dl + i)] = code.matrix[(oa + os, i)];
            }
        }
    }
    // P = M M† (dc × dc); Tr(N²) = Tr(P²) for N = M†M.
    let p = matmul(&m, &dagger(&m));
    let tr_p2 = matmul(&p, &p);
    let tr_n2: f64 = (0..dc).map(|i| tr_p2[(i, i)].re).sum();
    let mut worst_sq = 0.0f64;
    for y in algebra.iter() {
        // MB with B = 1_dr ⊗ Y (block application of Y on the dl index).
        let mb = block_apply(&m, y, dr, dl);
        let mbd = block_apply(&m, &dagger(y), dr, dl);
        let k1 = matmul(&mb, &dagger(&m)); // M B M†
        let k2 = matmul(&mbd, &dagger(&m)); // M B† M†
        let prod = matmul(&k1, &k2);
        let tr_nbnb: f64 = (0..dc).map(|i| prod[(i, i)].re).sum();
        let viol_sq = (2.0 * tr_n2 - 2.0 * tr_nbnb).max(0.0);
        worst_sq = worst_sq.max(viol_sq);
    }
    let aggregate = worst_sq.sqrt();
    if aggregate <= 1e-9 {
        return Ok((aggregate, None));
    }
    // Witness scan for small regions.
    if dr <= 64 && dl <= 64 {
        let shadows = logical_shadows(code, region)?;
        let mut worst = 0.0;
        let mut witness = None;
        for (k, y) in algebra.iter().enumerate() {
            for a in 0..shadows.dr {
                for b in 0..shadows.dr {
                    let n = &shadows.blocks[a * shadows.dr + b];
                    let dev = linalg::dist(&matmul(n, y), &matmul(y, n));
                    if dev > worst {
                        worst = dev;
                        witness = Some((a, b, k));
                    }
                }
            }
        }
        return Ok((worst, witness));
    }
    Ok((aggregate, None))
}

/// Applies Y on the trailing dl-index of a dc × (dr·dl) matrix.
fn block_apply(m: &CMat, y: &CMat, dr: usize, dl: usize) -> CMat {
    let dc = m.nrows();
    let mut out = CMat::zeros((dc, dr * dl));
    for s in 0..dc {
        for a in 0..dr {
            for j in 0..dl {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..dl {
                    acc += m[(s, a * dl + i)] * y[(i, j)];
                }
                out[(s, a * dl + j)] = acc;
            }
        }
    }
    out
}

pub fn is_correctable(
    code: &CodeIsometry,
    region: &BTreeSet<Label>,
    algebra: &[CMat],
) -> Result<bool, QecError> {
    let (worst, _) = correctability_violation(code, region, algebra)?;
    Ok(worst <= 1e-9)
}

/// Independent information-theoretic oracle for full-algebra correctability:
/// the mutual information I(reference : R) of the Choi state vanishes iff R
/// is correctable for the whole logical algebra.
///
/// The three entropies are S(ref) = ln d_L exactly, S(R) from the reduced
/// Choi state, and S(ref, R) = S(R^c) by purity of the global Choi state.
pub fn choi_mutual_information(
    code: &CodeIsometry,
    region: &BTreeSet<Label>,
) -> Result<f64, QecError> {
    let (r_offs, c_offs) = region_split(&code.physical_fact, region)?;
    let dl = code.logical_dim();
    let dr = r_offs.len();
    let dc = c_offs.len();
    let norm = C64::new(1.0 / dl as f64, 0.0);
    // ρ_R = (1/d_L) Σ_l Σ_c |a⟩⟨b| V[(a,c),l] V*[(b,c),l]
    let mut rho_r = CMat::zeros((dr, dr));
    for a in 0..dr {
        for b in 0..dr {
            let mut acc = C64::new(0.0, 0.0);
            for &oc in &c_offs {
                for l in 0..dl {
                    acc += code.matrix[(r_offs[a] + oc, l)]
                        * code.matrix[(r_offs[b] + oc, l)].conj();
                }
            }
            rho_r[(a, b)] = acc * norm;
        }
    }
    let mut rho_c = CMat::zeros((dc, dc));
    for (s, &oc) in c_offs.iter().enumerate() {
        for (t, &od) in c_offs.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &or in &r_offs {
                for l in 0..dl {
                    acc += code.matrix[(or + oc, l)] * code.matrix[(or + od, l)].conj();
                }
            }
            rho_c[(s, t)] = acc * norm;
        }
    }
    let s_ref = (dl as f64).ln();
    let s_r = entropy_of(&rho_r);
    let s_ref_r = entropy_of(&rho_c);
    Ok(s_ref + s_r - s_ref_r)
}

fn entropy_of(rho: &CMat) -> f64 {
    let (vals, _) = eigh(rho);
    vals.iter()
        .filter(|&&l| l > EIG_FLOOR)
        .map(|&l| -l * l.ln())
        .sum()
}

/// Solves X V = V O_L for X supported on the complement of `region` with
/// [X, P] = 0, by least squares over the complement operator space with the
/// codespace-commutation constraint stacked into the same linear system.
pub fn reconstruct_on_complement(
    code: &CodeIsometry,
    region: &BTreeSet<Label>,
    logical: &CMat,
) -> Result<LabeledOperator, QecError> {
    let (worst, _) = correctability_violation(code, region, &[logical.clone()])?;
    if worst > 1e-9 {
        return Err(QecError::NotCorrectable(worst));
    }
    let comp: BTreeSet<Label> = code.physical_fact.complement_labels(region);
    let comp_fact = code.physical_fact.restrict(&comp)?;
    let (r_offs, c_offs) = region_split(&code.physical_fact, region)?;
    let dc = c_offs.len();
    let dl = code.logical_dim();
    let p = code.codespace_projector();
    let dp = code.physical_dim();

    // Unknowns: X over the complement space (dc² complex numbers).
    // Equations: X V = V O_L  (dp × dl entries) and [X̃, P] = 0 (dp × dp),
    // where X̃ = 1_R ⊗ X.
    let n_unk = dc * dc;
    let n_eq = dp * dl + dp * dp;
    let mut a = CMat::zeros((n_eq, n_unk));
    let mut rhs = ndarray::Array1::<C64>::zeros(n_eq);
    let v_ol = matmul(&code.matrix, logical);
    // Row index helper for physical flat index.
    // X̃ row (r,s), col (r,t) = X[s,t].
    for (ri, _) in r_offs.iter().enumerate() {
        for s in 0..dc {
            let row_phys = r_offs[ri] + c_offs[s];
            for l in 0..dl {
                let eq = row_phys * dl + l;
                // Σ_t X[s,t] V[(r,t), l] = (V O_L)[(r,s), l]
                for t in 0..dc {
                    a[(eq, s * dc + t)] = code.matrix[(r_offs[ri] + c_offs[t], l)];
                }
                rhs[eq] = v_ol[(row_phys, l)];
            }
        }
    }
    // [X̃, P] = 0: Σ_t X[s,t] P[(r,t), j] − Σ_t P[i, (r',t)] X[t,s'] ... filled
    // entrywise: for physical (i, j): (X̃ P − P X̃)[i,j] = 0.
    let base = dp * dl;
    for (ri, _) in r_offs.iter().enumerate() {
        for s in 0..dc {
            let i = r_offs[ri] + c_offs[s];
            for j in 0..dp {
                let eq = base + i * dp + j;
                for t in 0..dc {
                    // (X̃ P)[i, j] picks X[s,t] P[(r_i, t), j]
                    a[(eq, s * dc + t)] += p[(r_offs[ri] + c_offs[t], j)];
                }
            }
        }
    }
    for i in 0..dp {
        for (rj, _) in r_offs.iter().enumerate() {
            for t in 0..dc {
                let j = r_offs[rj] + c_offs[t];
                for s2 in 0..dc {
                    // −(P X̃)[i, j] picks P[i, (r_j, s2)] X[s2, t]
                    let eq = base + i * dp + j;
                    a[(eq, s2 * dc + t)] -= p[(i, r_offs[rj] + c_offs[s2])];
                }
            }
        }
    }
    let x = least_squares(&a, &rhs);
    let mut xm = CMat::zeros((dc, dc));
    for s in 0..dc {
        for t in 0..dc {
            xm[(s, t)] = x[s * dc + t];
        }
    }
    let op = LabeledOperator::full(xm, comp_fact);
    // Residual check on the defining equation.
    let x_full = crate::tensor::embed(&op, &code.physical_fact)?;
    let resid = linalg::dist(&matmul(&x_full.matrix, &code.matrix), &v_ol);
    let comm = linalg::dist(&matmul(&x_full.matrix, &p), &matmul(&p, &x_full.matrix));
    let worst = resid.max(comm);
    if worst > 1e-9 {
        return Err(QecError::IllConditioned(worst));
    }
    Ok(op)
}

/// Least squares via normal equations with a pseudo-inverse solve.
fn least_squares(a: &CMat, b: &ndarray::Array1<C64>) -> ndarray::Array1<C64> {
    let ah = dagger(a);
    let ata = matmul(&ah, a);
    let atb = {
        let bm = b.clone().insert_axis(ndarray::Axis(1));
        matmul(&ah, &bm)
    };
    let (vals, vecs) = eigh(&ata);
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let n = ata.nrows();
    let mut x = ndarray::Array1::<C64>::zeros(n);
    // x = Σ_k (v_k† atb / λ_k) v_k over the numerically nonzero spectrum.
    for k in 0..n {
        if vals[k] <= 1e-12 * scale {
            continue;
        }
        let mut coeff = C64::new(0.0, 0.0);
        for i in 0..n {
            coeff += vecs[(i, k)].conj() * atb[(i, 0)];
        }
        coeff /= C64::new(vals[k], 0.0);
        for i in 0..n {
            x[i] += coeff * vecs[(i, k)];
        }
    }
    x
}

/// Hermitian log of a unitary with the branch cut placed in the largest
/// spectral gap, so that finite-order unitaries (including those with −1 in
/// the spectrum) always log cleanly. Used by the representation-lift path.
fn log_unitary_adaptive(u: &CMat) -> CMat {
    let (vals, vecs) = linalg::eig_unitary(u);
    let mut angles: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Find the largest gap on the circle; place the cut mid-gap.
    let n = angles.len();
    let mut best_gap = 0.0;
    let mut cut = std::f64::consts::PI;
    for i in 0..n {
        let a = angles[i];
        let b = if i + 1 < n {
            angles[i + 1]
        } else {
            angles[0] + 2.0 * std::f64::consts::PI
        };
        let gap = b - a;
        if gap > best_gap {
            best_gap = gap;
            cut = a + gap / 2.0;
        }
    }
    linalg::rebuild(&vals, &vecs, |z| {
        let mut th = z.arg();
        // Shift angles into (cut − 2π, cut].
        while th > cut {
            th -= 2.0 * std::f64::consts::PI;
        }
        while th <= cut - 2.0 * std::f64::consts::PI {
            th += 2.0 * std::f64::consts::PI;
        }
        C64::new(th, 0.0)
    })
}

/// Lifts a logical unitary to a unitary codespace-preserving operator on the
/// complement of `region`: reconstruct H_L = −i log U_L, Hermitize, and
/// exponentiate.
///
/// A logical unitary with −1 in its spectrum is routed through the
/// representation lift of the finite cyclic group it generates, which logs
/// with an adaptive branch cut instead of the principal one.
pub fn lift_unitary(
    code: &CodeIsometry,
    region: &BTreeSet<Label>,
    logical_unitary: &CMat,
) -> Result<LabeledOperator, QecError> {
    let (vals, _) = linalg::eig_unitary(logical_unitary);
    let near_cut = vals.iter().any(|z| z.re < 0.0 && z.im.abs() < 1e-8);
    if near_cut {
        // Routing rule: generate the cyclic group and lift as a representation.
        let mut powers = vec![linalg::identity(logical_unitary.nrows())];
        let mut cur = logical_unitary.clone();
        let mut order = None;
        for k in 1..=64 {
            if linalg::dist(&cur, &powers[0]) < 1e-9 {
                order = Some(k);
                break;
            }
            powers.push(cur.clone());
            cur = matmul(&cur, logical_unitary);
        }
        let order = order.ok_or(QecError::UnboundedOrder)?;
        let group = crate::group::FiniteGroup::cyclic(order).map_err(|_| QecError::UnboundedOrder)?;
        let lifts = lift_representation(code, region, &group, &powers)?;
        return Ok(lifts[1].clone());
    }
    let h_l = log_unitary_adaptive(logical_unitary);
    let h = reconstruct_on_complement(code, region, &h_l)?;
    let h_tilde = (&h.matrix + &dagger(&h.matrix)) * C64::new(0.5, 0.0);
    let (hvals, hvecs) = eigh(&h_tilde);
    let u = linalg::rebuild(
        &hvals.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(),
        &hvecs,
        |z| (C64::i() * z.re).exp(),
    );
    Ok(LabeledOperator::full(u, h.fact))
}

/// Lifts a logical unitary representation of a finite group to an exact
/// unitary representation on the complement of `region`.
///
/// Per-element lifts are built from adaptively-cut logs; the block against
/// Π_S = Tr_R(Π_c)·Tr_R(Π_c)⁺ is kept and the orthogonal block replaced by
/// the identity, which repairs the products into an exact representation.
pub fn lift_representation(
    code: &CodeIsometry,
    region: &BTreeSet<Label>,
    group: &crate::group::FiniteGroup,
    logical_rep: &[CMat],
) -> Result<Vec<LabeledOperator>, QecError> {
    assert_eq!(logical_rep.len(), group.order());
    // Correctability w.r.t. the algebra generated by the image.
    let (worst, _) = correctability_violation(code, region, logical_rep)?;
    if worst > 1e-9 {
        return Err(QecError::NotCorrectable(worst));
    }
    let comp: BTreeSet<Label> = code.physical_fact.complement_labels(region);
    let comp_fact = code.physical_fact.restrict(&comp)?;
    // Tr_R(Π_c) and the projector onto its support.
    let p = code.codespace_projector();
    let p_op = LabeledOperator::full(p, code.physical_fact.clone());
    let tr_r = crate::tensor::partial_trace_op(&p_op, &comp)?;
    let (tvals, tvecs) = eigh(&tr_r.matrix);
    let scale = tvals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let dc = comp_fact.total_dim();
    let mut pi_s = CMat::zeros((dc, dc));
    for k in 0..dc {
        if tvals[k] > 1e-10 * scale {
            for i in 0..dc {
                for j in 0..dc {
                    pi_s[(i, j)] += tvecs[(i, k)] * tvecs[(j, k)].conj();
                }
            }
        }
    }
    let pi_s_perp = &linalg::identity(dc) - &pi_s;
    let mut lifts = Vec::with_capacity(group.order());
    for e in 0..group.order() {
        let raw = if e == 0 {
            linalg::identity(dc)
        } else {
            let h_l = log_unitary_adaptive(&logical_rep[e]);
            let h = reconstruct_on_complement(code, region, &h_l)?;
            let h_tilde = (&h.matrix + &dagger(&h.matrix)) * C64::new(0.5, 0.0);
            let (hvals, hvecs) = eigh(&h_tilde);
            linalg::rebuild(
                &hvals.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>(),
                &hvecs,
                |z| (C64::i() * z.re).exp(),
            )
        };
        // Block-diagonal repair: keep the S block, identity on S^⊥.
        let repaired = &matmul(&matmul(&pi_s, &raw), &pi_s) + &pi_s_perp;
        lifts.push(LabeledOperator::full(repaired, comp_fact.clone()));
    }
    // Exhaustive homomorphism check.
    let mut dev: f64 = 0.0;
    for a in 0..group.order() {
        for b in 0..group.order() {
            let prod = matmul(&lifts[a].matrix, &lifts[b].matrix);
            dev = dev.max(linalg::dist(&prod, &lifts[group.mul(a, b)].matrix));
        }
    }
    for l in &lifts {
        if !linalg::is_unitary(&l.matrix, 1e-8) {
            return Err(QecError::RepresentationRepairFailed(f64::INFINITY));
        }
    }
    if dev > 1e-8 {
        return Err(QecError::RepresentationRepairFailed(dev));
    }
    Ok(lifts)
}

/// The five-qubit code encoder, built densely from its stabilizer projector
/// applied to |00000⟩ and X̄|0̄⟩. Physical qubits carry Site(0..5) labels.
pub fn five_qubit_code() -> CodeIsometry {
    use crate::tensor::{pauli_x, pauli_z, Subsystem};
    let x = pauli_x();
    let z = pauli_z();
    let i2 = linalg::identity(2);
    let word = |s: &str| -> CMat {
        let mut m = linalg::identity(1);
        for ch in s.chars() {
            let f = match ch {
                'X' => &x,
                'Z' => &z,
                _ => &i2,
            };
            m = linalg::kron(&m, f);
        }
        m
    };
    let gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"];
    let mut proj = linalg::identity(32);
    for g in gens {
        proj = matmul(&proj, &((&word(g) + &linalg::identity(32)) * C64::new(0.5, 0.0)));
    }
    let mut v0: Vec<C64> = (0..32).map(|i| proj[(i, 0)]).collect();
    let n0: f64 = v0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v0.iter_mut() {
        *z /= n0;
    }
    let xbar = word("XXXXX");
    let v1: Vec<C64> = (0..32)
        .map(|i| (0..32).map(|j| xbar[(i, j)] * v0[j]).sum())
        .collect();
    let mut m = CMat::zeros((32, 2));
    for i in 0..32 {
        m[(i, 0)] = v0[i];
        m[(i, 1)] = v1[i];
    }
    let logical = Factorization::new(vec![Subsystem::new(Label::Logical(0), 2)]).unwrap();
    let physical =
        Factorization::new((0..5).map(|q| Subsystem::new(Label::Site(q), 2)).collect()).unwrap();
    CodeIsometry::new(m, logical, physical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dist, identity};
    use crate::tensor::{pauli_x, pauli_z, Subsystem};

    fn full_logical_algebra() -> Vec<CMat> {
        vec![pauli_x(), pauli_z()]
    }

    #[test]
    fn five_qubit_is_isometry() {
        let code = five_qubit_code();
        assert!(code.isometry_deviation() < 1e-12);
    }

    #[test]
    fn two_qubit_regions_correctable_three_not() {
        let code = five_qubit_code();
        let alg = full_logical_algebra();
        let sites: Vec<Label> = (0..5).map(Label::Site).collect();
        for a in 0..5 {
            for b in (a + 1)..5 {
                let region: BTreeSet<Label> = [sites[a], sites[b]].into_iter().collect();
                assert!(is_correctable(&code, &region, &alg).unwrap(), "{a},{b}");
            }
        }
        for a in 0..5 {
            for b in (a + 1)..5 {
                for c in (b + 1)..5 {
                    let region: BTreeSet<Label> =
                        [sites[a], sites[b], sites[c]].into_iter().collect();
                    let (worst, witness) =
                        correctability_violation(&code, &region, &alg).unwrap();
                    assert!(worst > 1e-3, "{a},{b},{c}: {worst}");
                    assert!(witness.is_some());
                }
            }
        }
    }

    #[test]
    fn empty_region_correctable_identity_encoding() {
        // Identity encoding, R = ∅ → correctable.
        let fact = Factorization::new(vec![Subsystem::new(Label::Site(0), 2)]).unwrap();
        let lfact = Factorization::new(vec![Subsystem::new(Label::Logical(0), 2)]).unwrap();
        let code = CodeIsometry::new(identity(2), lfact, fact);
        let region: BTreeSet<Label> = BTreeSet::new();
        assert!(is_correctable(&code, &region, &full_logical_algebra()).unwrap());
    }

    #[test]
    fn commutator_criterion_agrees_with_choi_oracle() {
        let code = five_qubit_code();
        let alg = full_logical_algebra();
        let sites: Vec<Label> = (0..5).map(Label::Site).collect();
        // All subsets of size 0..=3.
        for mask in 0u32..32 {
            let region: BTreeSet<Label> = (0..5)
                .filter(|q| mask & (1 << q) != 0)
                .map(|q| sites[q as usize])
                .collect();
            if region.len() > 3 {
                continue;
            }
            let comm_ok = is_correctable(&code, &region, &alg).unwrap();
            let mi = choi_mutual_information(&code, &region).unwrap();
            assert_eq!(comm_ok, mi < 1e-9, "mask {mask}: mi = {mi}");
        }
    }

    #[test]
    fn reconstruct_identity_and_logical_z() {
        let code = five_qubit_code();
        let sites: Vec<Label> = (0..5).map(Label::Site).collect();
        let region: BTreeSet<Label> = [sites[0], sites[1]].into_iter().collect();
        let id = reconstruct_on_complement(&code, &region, &identity(2)).unwrap();
        let pulled = code.pull(&crate::tensor::embed(&id, &code.physical_fact).unwrap().matrix);
        assert!(dist(&pulled, &identity(2)) < 1e-9);

        let zr = reconstruct_on_complement(&code, &region, &pauli_z()).unwrap();
        let z_full = crate::tensor::embed(&zr, &code.physical_fact).unwrap();
        assert!(dist(&code.pull(&z_full.matrix), &pauli_z()) < 1e-8);
        let p = code.codespace_projector();
        assert!(dist(&matmul(&z_full.matrix, &p), &matmul(&p, &z_full.matrix)) < 1e-8);
    }

    #[test]
    fn reconstruct_not_correctable() {
        let code = five_qubit_code();
        let sites: Vec<Label> = (0..5).map(Label::Site).collect();
        let region: BTreeSet<Label> = [sites[0], sites[1], sites[2]].into_iter().collect();
        assert!(matches!(
            reconstruct_on_complement(&code, &region, &pauli_z()),
            Err(QecError::NotCorrectable(_))
        ));
    }

    #[test]
    fn lift_unitary_rotation() {
        let code = five_qubit_code();
        let sites: Vec<Label> = (0..5).map(Label::Site).collect();
        let region: BTreeSet<Label> = [sites[3], sites[4]].into_iter().collect();
        let theta: f64 = 0.3;
        let u_l = ndarray::array![
            [C64::from_polar(1.0, theta), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::from_polar(1.0, -theta)]
        ];
        let u = lift_unitary(&code, &region, &u_l).unwrap();
        assert!(linalg::is_unitary(&u.matrix, 1e-9));
        let u_full = crate::tensor::embed(&u, &code.physical_fact).unwrap();
        assert!(dist(&code.pull(&u_full.matrix), &u_l) < 1e-8);
        let p = code.codespace_projector();
        assert!(dist(&matmul(&u_full.matrix, &p), &matmul(&p, &u_full.matrix)) < 1e-8);
    }

    #[test]
    fn lift_unitary_identity() {
        let code = five_qubit_code();
        let region: BTreeSet<Label> = [Label::Site(0)].into_iter().collect();
        let u = lift_unitary(&code, &region, &identity(2)).unwrap();
        let u_full = crate::tensor::embed(&u, &code.physical_fact).unwrap();
        assert!(dist(&code.pull(&u_full.matrix), &identity(2)) < 1e-9);
    }

    #[test]
    fn lift_z2_representation_from_xbar() {
        let code = five_qubit_code();
        let sites: Vec<Label> = (0..5).map(Label::Site).collect();
        for pair in [[0usize, 1], [1, 3], [2, 4]] {
            let region: BTreeSet<Label> =
                [sites[pair[0]], sites[pair[1]]].into_iter().collect();
            let group = crate::group::FiniteGroup::cyclic(2).unwrap();
            let rep = vec![identity(2), pauli_x()];
            let lifts = lift_representation(&code, &region, &group, &rep).unwrap();
            // Exact order-2 representation.
            assert!(dist(&matmul(&lifts[1].matrix, &lifts[1].matrix), &identity(8)) < 1e-9);
            let l_full = crate::tensor::embed(&lifts[1], &code.physical_fact).unwrap();
            assert!(dist(&code.pull(&l_full.matrix), &pauli_x()) < 1e-8);
            let p = code.codespace_projector();
            assert!(dist(&matmul(&l_full.matrix, &p), &matmul(&p, &l_full.matrix)) < 1e-8);
        }
    }

    #[test]
    fn lift_unitary_routes_eigenvalue_minus_one() {
        // Z̄ has −1 in the spectrum: must route through the representation
        // path and still produce a valid unitary implementation.
        let code = five_qubit_code();
        let sites: Vec<Label> = (0..5).map(Label::Site).collect();
        let region: BTreeSet<Label> = [sites[0], sites[1]].into_iter().collect();
        let u = lift_unitary(&code, &region, &pauli_z()).unwrap();
        assert!(linalg::is_unitary(&u.matrix, 1e-9));
        let u_full = crate::tensor::embed(&u, &code.physical_fact).unwrap();
        assert!(dist(&code.pull(&u_full.matrix), &pauli_z()) < 1e-8);
    }
}
