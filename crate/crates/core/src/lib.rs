//! Lattice gauging maps over finite groups, holographic quantum
//! error-correcting codes, and desk-scale numerical verification of the
//! structural theorems relating them.
//!
//! The crate is organized around a dense complex operator backend
//! ([`tensor`]) and a GF(2) symplectic backend ([`stab`]). On top of those
//! sit finite groups and their representations ([`group`]), labeled oriented
//! graphs ([`graph`]), the gauging machinery itself ([`gauging`]), erasure
//! correctability and operator lifts ([`qec`]), holographic code assembly
//! ([`holo`]), and a truncated U(1) gauging construction ([`u1`]).

pub mod gauging;
pub mod graph;
pub mod holo;
pub mod group;
pub mod linalg;
pub mod qec;
pub mod stab;
pub mod tensor;
pub mod u1;

/// Default tolerance for equality assertions between exact constructions.
pub const TOL_EQ: f64 = 1e-10;

/// Eigenvalue floor below which spectra are treated as zero (entropy, pinv).
pub const EIG_FLOOR: f64 = 1e-12;

/// Hard cap on the total dimension of a dense factorization.
pub const DENSE_CAP: usize = 1 << 14;
