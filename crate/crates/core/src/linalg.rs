//! Dense complex linear algebra kernels: multiplication, Hermitian
//! eigendecomposition, and eigendecompositions of unitary (normal) matrices
//! built on top of the Hermitian solver.
//!
//! The Hermitian solver is a cyclic Jacobi sweep. All matrices in this crate
//! are exact algebraic constructions of modest size, so Jacobi's
//! deterministic, unconditionally stable behavior is worth more than LAPACK
//! speed.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

/// Complex matrix product via the blocked cgemm kernel.
pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let (m, k) = a.dim();
    let (k2, n) = b.dim();
    assert_eq!(k, k2, "matmul: inner dimensions {k} vs {k2}");
    let mut c = CMat::zeros((m, n));
    let a_s = a.as_standard_layout();
    let b_s = b.as_standard_layout();
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a_s.as_ptr() as *const [f64; 2],
            k as isize,
            1,
            b_s.as_ptr() as *const [f64; 2],
            n as isize,
            1,
            [0.0, 0.0],
            c.as_mut_ptr() as *mut [f64; 2],
            n as isize,
            1,
        );
    }
    c
}

/// a† b
pub fn matmul_hc_left(a: &CMat, b: &CMat) -> CMat {
    matmul(&dagger(a), b)
}

pub fn dagger(a: &CMat) -> CMat {
    let mut out = CMat::zeros((a.ncols(), a.nrows()));
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

pub fn identity(n: usize) -> CMat {
    CMat::eye(n)
}

pub fn frobenius_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// ‖a − b‖_F
pub fn dist(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim(), b.dim(), "dist: shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = CMat::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn is_hermitian(a: &CMat, tol: f64) -> bool {
    if a.nrows() != a.ncols() {
        return false;
    }
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            if (a[(i, j)] - a[(j, i)].conj()).norm() > tol {
                return false;
            }
        }
    }
    true
}

pub fn is_unitary(a: &CMat, tol: f64) -> bool {
    if a.nrows() != a.ncols() {
        return false;
    }
    dist(&matmul_hc_left(a, a), &identity(a.ncols())) <= tol * (a.ncols() as f64).sqrt().max(1.0)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvalues ascending and
/// eigenvectors as the columns of a unitary matrix.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigh: square matrix required");
    if n == 0 {
        return (vec![], CMat::zeros((0, 0)));
    }
    let mut m = a.clone();
    // Hermitize exactly to kill roundoff asymmetry.
    for i in 0..n {
        for j in 0..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = identity(n);
    let scale = frobenius_norm(&m).max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Unitary 2x2 rotation diagonalizing [[app, apq], [apq*, aqq]].
                let phase = apq / apq.norm();
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns rotate: p' = c p − s e^{−iφ} q ; q' = s e^{iφ} p + c q
                let sp = phase.conj() * s;
                let sq = phase * s;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c - mkq * sp;
                    m[(k, q)] = mkp * sq + mkq * c;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c - mqk * sp.conj();
                    m[(q, k)] = mpk * sq.conj() + mqk * c;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * sp;
                    v[(k, q)] = vkp * sq + vkq * c;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (m[(i, i)].re, i)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut vecs = CMat::zeros((n, n));
    for (new, &(_, old)) in pairs.iter().enumerate() {
        for k in 0..n {
            vecs[(k, new)] = v[(k, old)];
        }
    }
    (vals, vecs)
}

/// Eigendecomposition of a unitary matrix.
///
/// Diagonalizes the Hermitian part; inside each of its eigenspaces the
/// anti-Hermitian part is again Hermitian and is diagonalized recursively.
/// Returns unit-circle eigenvalues and a unitary eigenvector matrix.
pub fn eig_unitary(u: &CMat) -> (Vec<C64>, CMat) {
    let n = u.nrows();
    assert_eq!(n, u.ncols());
    let ud = dagger(u);
    let re = (u + &ud) * C64::new(0.5, 0.0);
    let im = (u - &ud) * C64::new(0.0, -0.5);
    let (revals, revecs) = eigh(&re);
    // Group nearly equal Hermitian-part eigenvalues, then split each block
    // by the anti-Hermitian part.
    let mut vals = vec![C64::new(0.0, 0.0); n];
    let mut vecs = CMat::zeros((n, n));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (revals[end] - revals[start]).abs() < 1e-9 {
            end += 1;
        }
        let block = end - start;
        let basis = revecs.slice(ndarray::s![.., start..end]).to_owned();
        if block == 1 {
            let col = basis.column(0).to_owned();
            let im_col = matmul(&im, &col.clone().insert_axis(ndarray::Axis(1)));
            let lam_im = col
                .iter()
                .zip(im_col.column(0).iter())
                .map(|(a, b)| a.conj() * b)
                .sum::<C64>();
            vals[start] = C64::new(revals[start], lam_im.re);
            for k in 0..n {
                vecs[(k, start)] = col[k];
            }
        } else {
            let im_basis = matmul(&im, &basis);
            let sub = matmul_hc_left(&basis, &im_basis);
            let (subvals, subvecs) = eigh(&sub);
            let rot = matmul(&basis, &subvecs);
            for j in 0..block {
                vals[start + j] = C64::new(revals[start], subvals[j]);
                for k in 0..n {
                    vecs[(k, start + j)] = rot[(k, j)];
                }
            }
        }
        start = end;
    }
    // Snap moduli to the unit circle; inputs are unitary by contract.
    for v in vals.iter_mut() {
        let r = v.norm();
        if r > 1e-12 {
            *v /= r;
        }
    }
    (vals, vecs)
}

/// Rebuild Σ f(λ_k) |v_k⟩⟨v_k| from an eigensystem.
pub fn rebuild(vals: &[C64], vecs: &CMat, f: impl Fn(C64) -> C64) -> CMat {
    let n = vecs.nrows();
    let mut diag = CMat::zeros((n, n));
    for (k, lam) in vals.iter().enumerate() {
        diag[(k, k)] = f(*lam);
    }
    matmul(&matmul(vecs, &diag), &dagger(vecs))
}

/// Rank of a Hermitian PSD matrix by trace (valid when it is a projector)
/// is not general enough; this counts eigenvalues above `floor`.
pub fn rank_psd(a: &CMat, floor: f64) -> usize {
    let (vals, _) = eigh(a);
    vals.iter().filter(|v| **v > floor).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn matmul_small() {
        let a = ndarray::array![[c(1.0, 0.0), c(0.0, 1.0)], [c(2.0, 0.0), c(0.0, 0.0)]];
        let b = ndarray::array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, -1.0)]];
        let ab = matmul(&a, &b);
        assert!((ab[(0, 0)] - c(0.0, 1.0)).norm() < 1e-14);
        assert!((ab[(0, 1)] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((ab[(1, 0)] - c(0.0, 0.0)).norm() < 1e-14);
        assert!((ab[(1, 1)] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eigh_diag_and_pauli_y() {
        let y = ndarray::array![[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
        let (vals, vecs) = eigh(&y);
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        let rec = rebuild(
            &vals.iter().map(|v| c(*v, 0.0)).collect::<Vec<_>>(),
            &vecs,
            |x| x,
        );
        assert!(dist(&rec, &y) < 1e-12);
    }

    #[test]
    fn eigh_random_hermitian_roundtrip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 24;
        let mut a = CMat::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        let h = &a + &dagger(&a);
        let (vals, vecs) = eigh(&h);
        // Unitarity of eigenvectors and reconstruction.
        assert!(is_unitary(&vecs, 1e-10));
        let rec = rebuild(
            &vals.iter().map(|v| c(*v, 0.0)).collect::<Vec<_>>(),
            &vecs,
            |x| x,
        );
        assert!(dist(&rec, &h) < 1e-9 * frobenius_norm(&h).max(1.0));
    }

    #[test]
    fn eig_unitary_degenerate_spectrum() {
        // Z ⊗ 1 has eigenvalues ±1, each doubly degenerate.
        let z = ndarray::array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
        let u = kron(&z, &identity(2));
        let (vals, vecs) = eig_unitary(&u);
        assert!(is_unitary(&vecs, 1e-10));
        let rec = rebuild(&vals, &vecs, |x| x);
        assert!(dist(&rec, &u) < 1e-10);
        for v in vals {
            assert!((v.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn eig_unitary_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 12;
        let mut a = CMat::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        let h = &a + &dagger(&a);
        let (vals, vecs) = eigh(&h);
        // U = exp(iH) through the eigensystem, then recover it.
        let u = rebuild(
            &vals.iter().map(|v| c(*v, 0.0)).collect::<Vec<_>>(),
            &vecs,
            |x| (C64::i() * x).exp(),
        );
        assert!(is_unitary(&u, 1e-10));
        let (uvals, uvecs) = eig_unitary(&u);
        let rec = rebuild(&uvals, &uvecs, |x| x);
        assert!(dist(&rec, &u) < 1e-9);
    }
}
