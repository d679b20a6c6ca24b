//! Dense complex linear algebra: matrices, Kronecker products, partial
//! traces, Hermitian eigensolves, Gell-Mann bases and Haar sampling.

pub mod basis;
pub mod cmat;
pub mod linalg;
pub mod random;

pub use basis::{dist, expand_coeffs, gell_mann_basis, resum_coeffs, CoeffMatrix, DistKind, HermBasis};
pub use cmat::{kron, partial_trace_bath, partial_trace_system, pauli, swap, CMat, C64};
pub use linalg::{herm_eig, pseudo_inverse, rank, singular_values, HermEig};
pub use random::{derive_seed, haar_unitary, random_hermitian, rng_from_seed, QRng};
