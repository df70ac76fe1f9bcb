//! Finite groups, their unitary irreducible representations, the group
//! Hilbert space L²(G) with left/right regular actions, and Haar averaging
//! (which for a finite group is the uniform average over elements).

use crate::linalg::{self, eigh, kron, matmul, CMat, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("unsupported group spec: {0}")]
    UnsupportedSpec(String),
    #[error("group axiom violated: {0}")]
    AxiomViolation(String),
    #[error("irrep extraction did not converge: {0}")]
    DecompositionFailed(String),
    #[error("group order {0} exceeds the dense catalog limit 24")]
    OrderTooLarge(usize),
}

/// A finite group given by its Cayley table. The identity is element 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<u16>,
    inverse: Vec<u16>,
    name: String,
}

pub type Elem = usize;

impl FiniteGroup {
    fn from_table(name: &str, order: usize, cayley: Vec<u16>) -> Result<Self, GroupError> {
        let mut inverse = vec![u16::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if cayley[a * order + b] == 0 {
                    inverse[a] = b as u16;
                }
            }
        }
        let g = FiniteGroup {
            order,
            cayley,
            inverse,
            name: name.to_string(),
        };
        g.check_axioms()?;
        Ok(g)
    }

    /// Exhaustive check of closure, associativity, identity and inverse laws.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        for &x in &self.cayley {
            if (x as usize) >= n {
                return Err(GroupError::AxiomViolation("closure".into()));
            }
        }
        for a in 0..n {
            if self.mul(a, 0) != a || self.mul(0, a) != a {
                return Err(GroupError::AxiomViolation("identity law".into()));
            }
            let inv = self.inverse[a] as usize;
            if inv >= n || self.mul(a, inv) != 0 || self.mul(inv, a) != 0 {
                return Err(GroupError::AxiomViolation("inverse law".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::AxiomViolation("associativity".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.cayley[a * self.order + b] as usize
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a] as usize
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.order {
            for b in 0..a {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Elements commuting with everything, found by exhaustive scan.
    pub fn center(&self) -> Vec<Elem> {
        (0..self.order)
            .filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for a in 0..self.order {
            if seen[a] {
                continue;
            }
            let mut class: Vec<Elem> = (0..self.order)
                .map(|h| self.mul(self.mul(h, a), self.inv(h)))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Cyclic group of order n.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n < 1 {
            return Err(GroupError::UnsupportedSpec(format!("cyclic {n}")));
        }
        let mut t = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = ((a + b) % n) as u16;
            }
        }
        FiniteGroup::from_table(&format!("Z{n}"), n, t)
    }

    /// Dihedral group of order 2n; element ε·n + k stands for s^ε r^k.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n < 1 {
            return Err(GroupError::UnsupportedSpec(format!("dihedral {n}")));
        }
        let order = 2 * n;
        let mut t = vec![0u16; order * order];
        for e1 in 0..2usize {
            for k1 in 0..n {
                for e2 in 0..2usize {
                    for k2 in 0..n {
                        // (s^e1 r^k1)(s^e2 r^k2) = s^(e1+e2) r^((-1)^e2 k1 + k2)
                        let e = (e1 + e2) % 2;
                        let k = if e2 == 1 {
                            (n - k1 + k2) % n
                        } else {
                            (k1 + k2) % n
                        };
                        t[(e1 * n + k1) * order + (e2 * n + k2)] = (e * n + k) as u16;
                    }
                }
            }
        }
        FiniteGroup::from_table(&format!("D{n}"), order, t)
    }

    /// Symmetric group S3 as permutations of three points, elements ordered
    /// lexicographically by one-line notation (identity first).
    pub fn symmetric3() -> Result<Self, GroupError> {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let find = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
        let order = 6;
        let mut t = vec![0u16; order * order];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                // composition: (pa ∘ pb)(i) = pa[pb[i]]
                let comp = [pa[pb[0]], pa[pb[1]], pa[pb[2]]];
                t[a * order + b] = find(&comp) as u16;
            }
        }
        FiniteGroup::from_table("S3", order, t)
    }

    /// Direct product; element (a, b) has index a·|B| + b.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        let order = a.order * b.order;
        let mut t = vec![0u16; order * order];
        for a1 in 0..a.order {
            for b1 in 0..b.order {
                for a2 in 0..a.order {
                    for b2 in 0..b.order {
                        let i = a1 * b.order + b1;
                        let j = a2 * b.order + b2;
                        let k = a.mul(a1, a2) * b.order + b.mul(b1, b2);
                        t[i * order + j] = k as u16;
                    }
                }
            }
        }
        FiniteGroup::from_table(&format!("{}x{}", a.name, b.name), order, t)
    }

    /// Parses specs such as "Z2", "S3", "D4", "Z2xZ2", "Z3xZ2".
    pub fn parse(spec: &str) -> Result<Self, GroupError> {
        let parts: Vec<&str> = spec.split('x').collect();
        let mut groups = Vec::new();
        for p in &parts {
            let p = p.trim();
            let g = if let Some(n) = p.strip_prefix('Z') {
                let n: usize = n
                    .parse()
                    .map_err(|_| GroupError::UnsupportedSpec(spec.into()))?;
                FiniteGroup::cyclic(n)?
            } else if let Some(n) = p.strip_prefix('D') {
                let n: usize = n
                    .parse()
                    .map_err(|_| GroupError::UnsupportedSpec(spec.into()))?;
                FiniteGroup::dihedral(n)?
            } else if p == "S3" {
                FiniteGroup::symmetric3()?
            } else {
                return Err(GroupError::UnsupportedSpec(spec.into()));
            };
            groups.push(g);
        }
        let mut it = groups.into_iter();
        let mut acc = it.next().ok_or(GroupError::UnsupportedSpec(spec.into()))?;
        for g in it {
            acc = FiniteGroup::product(&acc, &g)?;
        }
        Ok(acc)
    }

    /// Left regular action U^L(g)|h⟩ = |gh⟩ as a |G|×|G| permutation matrix.
    pub fn left_regular(&self, g: Elem) -> CMat {
        let n = self.order;
        let mut m = CMat::zeros((n, n));
        for h in 0..n {
            m[(self.mul(g, h), h)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Right regular action U^R(g)|h⟩ = |hg⁻¹⟩.
    pub fn right_regular(&self, g: Elem) -> CMat {
        let n = self.order;
        let mut m = CMat::zeros((n, n));
        let ginv = self.inv(g);
        for h in 0..n {
            m[(self.mul(h, ginv), h)] = C64::new(1.0, 0.0);
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

pub fn regular_action(g: &FiniteGroup, side: Side, elem: Elem) -> CMat {
    match side {
        Side::Left => g.left_regular(elem),
        Side::Right => g.right_regular(elem),
    }
}

/// (1/|G|) Σ_g f(g). All values must share a shape.
pub fn haar_average(g: &FiniteGroup, mut f: impl FnMut(Elem) -> CMat) -> CMat {
    let first = f(0);
    let mut acc = first;
    for e in 1..g.order() {
        let m = f(e);
        assert_eq!(m.dim(), acc.dim(), "haar_average: shape mismatch");
        acc = acc + m;
    }
    acc / C64::new(g.order() as f64, 0.0)
}

/// A unitary representation: one matrix per group element, indexed by element.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub dim: usize,
    pub matrices: Vec<CMat>,
}

impl Irrep {
    pub fn character(&self, e: Elem) -> C64 {
        (0..self.dim).map(|i| self.matrices[e][(i, i)]).sum()
    }

    pub fn is_representation(&self, g: &FiniteGroup, tol: f64) -> bool {
        for a in 0..g.order() {
            if !linalg::is_unitary(&self.matrices[a], tol) {
                return false;
            }
            for b in 0..g.order() {
                let prod = matmul(&self.matrices[a], &self.matrices[b]);
                if linalg::dist(&prod, &self.matrices[g.mul(a, b)]) > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Kernel scan: elements represented by the identity matrix.
    pub fn kernel(&self, g: &FiniteGroup, tol: f64) -> Vec<Elem> {
        let id = linalg::identity(self.dim);
        (0..g.order())
            .filter(|&e| linalg::dist(&self.matrices[e], &id) <= tol)
            .collect()
    }

    pub fn is_faithful(&self, g: &FiniteGroup, tol: f64) -> bool {
        self.kernel(g, tol) == vec![0]
    }

    fn direct_sum(parts: &[&Irrep], g: &FiniteGroup) -> Irrep {
        let dim: usize = parts.iter().map(|p| p.dim).sum();
        let mut matrices = Vec::with_capacity(g.order());
        for e in 0..g.order() {
            let mut m = CMat::zeros((dim, dim));
            let mut off = 0;
            for p in parts {
                for i in 0..p.dim {
                    for j in 0..p.dim {
                        m[(off + i, off + j)] = p.matrices[e][(i, j)];
                    }
                }
                off += p.dim;
            }
            matrices.push(m);
        }
        Irrep { dim, matrices }
    }
}

/// Complete irrep data for a group: the irreps, conjugacy classes, center,
/// and a designated faithful unitary representation for Wilson operators.
#[derive(Debug, Clone)]
pub struct IrrepSet {
    pub irreps: Vec<Irrep>,
    pub classes: Vec<Vec<Elem>>,
    pub center: Vec<Elem>,
    pub faithful: Irrep,
}

impl IrrepSet {
    /// Index of the trivial irrep.
    pub fn trivial_index(&self) -> usize {
        self.irreps
            .iter()
            .position(|r| r.dim == 1 && (0..r.matrices.len()).all(|e| (r.matrices[e][(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-9))
            .expect("trivial irrep present")
    }

    /// Sum of irrep dimensions (the grand-orthogonality tensor leg size).
    pub fn dim_sum(&self) -> usize {
        self.irreps.iter().map(|r| r.dim).sum()
    }
}

/// Computes the complete set of unitary irreps.
///
/// Closed-form tables exist for cyclic groups, dihedral groups, S3 and
/// products of these; anything else falls back to a seeded numeric
/// commutant-splitting of the regular representation.
pub fn irreps(g: &FiniteGroup) -> Result<IrrepSet, GroupError> {
    if g.order() > 24 {
        return Err(GroupError::OrderTooLarge(g.order()));
    }
    let list = match table_irreps(g) {
        Some(l) => l,
        None => numeric_irreps(g)?,
    };
    // Completeness: Σ n_r² = |G|.
    let sum: usize = list.iter().map(|r| r.dim * r.dim).sum();
    if sum != g.order() {
        return Err(GroupError::DecompositionFailed(format!(
            "irrep dimension sum {sum} != |G| = {}",
            g.order()
        )));
    }
    let classes = g.conjugacy_classes();
    let center = g.center();
    let faithful = designated_faithful(g, &list)?;
    Ok(IrrepSet {
        irreps: list,
        classes,
        center,
        faithful,
    })
}

/// Direct sum of the distinct nontrivial irreps, verified faithful.
fn designated_faithful(g: &FiniteGroup, list: &[Irrep]) -> Result<Irrep, GroupError> {
    if g.order() == 1 {
        return Ok(list[0].clone());
    }
    let parts: Vec<&Irrep> = list
        .iter()
        .filter(|r| !(r.dim == 1 && (0..g.order()).all(|e| (r.matrices[e][(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-9)))
        .collect();
    let cand = Irrep::direct_sum(&parts, g);
    if !cand.is_faithful(g, 1e-9) {
        return Err(GroupError::DecompositionFailed(
            "designated representation is not faithful".into(),
        ));
    }
    Ok(cand)
}

fn table_irreps(g: &FiniteGroup) -> Option<Vec<Irrep>> {
    let name = g.name().to_string();
    let parts: Vec<&str> = name.split('x').collect();
    let mut factor_irreps: Vec<Vec<Irrep>> = Vec::new();
    let mut factor_orders: Vec<usize> = Vec::new();
    for p in &parts {
        if let Some(n) = p.strip_prefix('Z') {
            let n: usize = n.parse().ok()?;
            factor_irreps.push(cyclic_irreps(n));
            factor_orders.push(n);
        } else if let Some(n) = p.strip_prefix('D') {
            let n: usize = n.parse().ok()?;
            if n > 6 {
                return None;
            }
            factor_irreps.push(dihedral_irreps(n));
            factor_orders.push(2 * n);
        } else if *p == "S3" {
            factor_irreps.push(s3_irreps());
            factor_orders.push(6);
        } else {
            return None;
        }
    }
    // Verify the element indexing convention matches the product structure.
    if factor_orders.iter().product::<usize>() != g.order() {
        return None;
    }
    let mut acc: Vec<Irrep> = factor_irreps[0].clone();
    let mut acc_order = factor_orders[0];
    for (fi, &fo) in factor_irreps.iter().zip(factor_orders.iter()).skip(1) {
        let mut next = Vec::new();
        for r in &acc {
            for s in fi {
                let dim = r.dim * s.dim;
                let mut ms = Vec::with_capacity(acc_order * fo);
                for a in 0..acc_order {
                    for b in 0..fo {
                        let _ = (a, b);
                        ms.push(kron(&r.matrices[a], &s.matrices[b]));
                    }
                }
                next.push(Irrep { dim, matrices: ms });
            }
        }
        acc = next;
        acc_order *= fo;
    }
    // Sanity: every table irrep must be an actual representation.
    for r in &acc {
        if !r.is_representation(g, 1e-9) {
            return None;
        }
    }
    Some(acc)
}

fn cyclic_irreps(n: usize) -> Vec<Irrep> {
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let matrices: Vec<CMat> = (0..n)
            .map(|j| {
                let mut m = CMat::zeros((1, 1));
                m[(0, 0)] = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k * j) as f64 / n as f64);
                m
            })
            .collect();
        out.push(Irrep { dim: 1, matrices });
    }
    out
}

fn dihedral_irreps(n: usize) -> Vec<Irrep> {
    let order = 2 * n;
    let mut out = Vec::new();
    let one_dim = |a: f64, b: f64| -> Irrep {
        let matrices: Vec<CMat> = (0..order)
            .map(|idx| {
                let eps = idx / n;
                let k = idx % n;
                let mut m = CMat::zeros((1, 1));
                m[(0, 0)] = C64::new(a.powi(eps as i32) * b.powi(k as i32), 0.0);
                m
            })
            .collect();
        Irrep { dim: 1, matrices }
    };
    out.push(one_dim(1.0, 1.0));
    out.push(one_dim(-1.0, 1.0));
    if n % 2 == 0 {
        out.push(one_dim(1.0, -1.0));
        out.push(one_dim(-1.0, -1.0));
    }
    let two_dim_count = if n % 2 == 0 { n / 2 - 1 } else { (n - 1) / 2 };
    for j in 1..=two_dim_count {
        let rot = |k: usize| -> CMat {
            let th = 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64;
            ndarray::array![
                [C64::new(th.cos(), 0.0), C64::new(-th.sin(), 0.0)],
                [C64::new(th.sin(), 0.0), C64::new(th.cos(), 0.0)]
            ]
        };
        let refl = ndarray::array![
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)]
        ];
        let matrices: Vec<CMat> = (0..order)
            .map(|idx| {
                let eps = idx / n;
                let k = idx % n;
                if eps == 0 {
                    rot(k)
                } else {
                    matmul(&refl, &rot(k))
                }
            })
            .collect();
        out.push(Irrep { dim: 2, matrices });
    }
    out
}

fn s3_irreps() -> Vec<Irrep> {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let parity = |p: &[usize; 3]| -> f64 {
        let mut inv = 0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    let trivial = Irrep {
        dim: 1,
        matrices: (0..6)
            .map(|_| {
                let mut m = CMat::zeros((1, 1));
                m[(0, 0)] = C64::new(1.0, 0.0);
                m
            })
            .collect(),
    };
    let sign = Irrep {
        dim: 1,
        matrices: perms
            .iter()
            .map(|p| {
                let mut m = CMat::zeros((1, 1));
                m[(0, 0)] = C64::new(parity(p), 0.0);
                m
            })
            .collect(),
    };
    // Standard 2-dim irrep on the zero-sum plane with orthonormal basis
    // b1 = (1,−1,0)/√2, b2 = (1,1,−2)/√6. Permutations act as σ: e_i ↦ e_σ(i).
    let b = [
        [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0],
        [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()],
    ];
    let std2 = Irrep {
        dim: 2,
        matrices: perms
            .iter()
            .map(|p| {
                let mut m = CMat::zeros((2, 2));
                for i in 0..2 {
                    for j in 0..2 {
                        // ⟨b_i | P_p b_j⟩ with (P_p v)_{p[k]} = v_k.
                        let mut acc = 0.0;
                        for k in 0..3 {
                            acc += b[i][p[k]] * b[j][k];
                        }
                        m[(i, j)] = C64::new(acc, 0.0);
                    }
                }
                m
            })
            .collect(),
    };
    vec![trivial, sign, std2]
}

/// Numeric fallback: split the regular representation by diagonalizing a
/// Haar-averaged random Hermitian (an element of the commutant), recursing
/// until all blocks are irreducible, then de-duplicate by characters.
fn numeric_irreps(g: &FiniteGroup) -> Result<Vec<Irrep>, GroupError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1337_c0de);
    let reg: Vec<CMat> = (0..g.order()).map(|e| g.left_regular(e)).collect();
    let mut blocks: Vec<Vec<CMat>> = vec![reg];
    let mut found: Vec<Irrep> = Vec::new();
    let mut rounds = 0;
    while let Some(rep) = blocks.pop() {
        rounds += 1;
        if rounds > 200 {
            return Err(GroupError::DecompositionFailed("too many splitting rounds".into()));
        }
        let d = rep[0].nrows();
        // Irreducibility by character norm: (1/|G|) Σ |χ(g)|² = 1.
        let chi_norm: f64 = (0..g.order())
            .map(|e| {
                let tr: C64 = (0..d).map(|i| rep[e][(i, i)]).sum();
                tr.norm_sqr()
            })
            .sum::<f64>()
            / g.order() as f64;
        if (chi_norm - 1.0).abs() < 1e-8 {
            found.push(Irrep {
                dim: d,
                matrices: rep,
            });
            continue;
        }
        // Random Hermitian averaged into the commutant.
        let mut h = CMat::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                h[(i, j)] = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        let h = &h + &linalg::dagger(&h);
        let m = haar_average(g, |e| {
            matmul(&matmul(&rep[e], &h), &linalg::dagger(&rep[e]))
        });
        let (vals, vecs) = eigh(&m);
        // Cluster eigenvalues into invariant subspaces.
        let mut start = 0;
        let mut any_split = false;
        while start < d {
            let mut end = start + 1;
            while end < d && (vals[end] - vals[start]).abs() < 1e-8 {
                end += 1;
            }
            let basis = vecs.slice(ndarray::s![.., start..end]).to_owned();
            let sub: Vec<CMat> = (0..g.order())
                .map(|e| matmul(&linalg::matmul_hc_left(&basis, &rep[e]), &basis))
                .collect();
            if end - start < d {
                any_split = true;
            }
            blocks.push(sub);
            start = end;
        }
        if !any_split {
            // Reducible but this random element failed to split it; retry
            // with a fresh random Hermitian (loop continues, bounded above).
            continue;
        }
    }
    // De-duplicate by character inner products.
    let mut distinct: Vec<Irrep> = Vec::new();
    for r in found {
        let dup = distinct.iter().any(|s| {
            if s.dim != r.dim {
                return false;
            }
            let ip: C64 = (0..g.order())
                .map(|e| r.character(e).conj() * s.character(e))
                .sum::<C64>()
                / C64::new(g.order() as f64, 0.0);
            (ip - C64::new(1.0, 0.0)).norm() < 1e-6
        });
        if !dup {
            distinct.push(r);
        }
    }
    for r in &distinct {
        if !r.is_representation(g, 1e-8) {
            return Err(GroupError::DecompositionFailed(
                "numeric block is not a representation".into(),
            ));
        }
    }
    Ok(distinct)
}

/// Entrywise grand-orthogonality deviation over a complete irrep set:
/// max |(√(n_r n_r')/|G|) Σ_g π^r_ij(g)* π^{r'}_kl(g) − δ_rr' δ_ik δ_jl|.
pub fn grand_orthogonality_deviation(g: &FiniteGroup, set: &IrrepSet) -> f64 {
    let mut worst: f64 = 0.0;
    for (r_idx, r) in set.irreps.iter().enumerate() {
        for (s_idx, s) in set.irreps.iter().enumerate() {
            let scale = ((r.dim * s.dim) as f64).sqrt() / g.order() as f64;
            for i in 0..r.dim {
                for j in 0..r.dim {
                    for k in 0..s.dim {
                        for l in 0..s.dim {
                            let mut acc = C64::new(0.0, 0.0);
                            for e in 0..g.order() {
                                acc += r.matrices[e][(i, j)].conj() * s.matrices[e][(k, l)];
                            }
                            let expect = if r_idx == s_idx && i == k && j == l {
                                C64::new(1.0, 0.0)
                            } else {
                                C64::new(0.0, 0.0)
                            };
                            worst = worst.max((acc * C64::new(scale, 0.0) - expect).norm());
                        }
                    }
                }
            }
        }
    }
    worst
}
