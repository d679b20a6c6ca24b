//! Linear constraint systems on unknown bath operators attached to the pure
//! states of system bases.
//!
//! Unknowns are `n_ops` Hermitian bath operators, each stored as its
//! `d_B^2` real Gell-Mann coordinates; operator `k` occupies columns
//! `k*d_B^2 .. (k+1)*d_B^2`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::report::{ExperimentReport, Params};
use crate::matlin::basis::gell_mann_basis;
use crate::matlin::cmat::kron;
use crate::matlin::linalg::{real_nullspace, real_rank};
use crate::matlin::random::{derive_seed, rng_from_seed};
use crate::states::{relatively_unbiased_pair, OrthonormalBasis};

pub(crate) const NULL_CUTOFF: f64 = 1e-10;
const COLLAPSE_TOL: f64 = 1e-10;
const PARTICULAR_SOLUTIONS: usize = 20;

/// Dimension of the real null space.
pub fn nullity(m: &DMatrix<f64>) -> usize {
    m.ncols() - real_rank(m, NULL_CUTOFF)
}

/// Rows `O_{a+j} - sum_k w[j,k] O_{b+k}` and `O_{b+k} - sum_j w[j,k] O_{a+j}`,
/// one block of `d_B^2` rows per operator equation. Equations are numbered
/// `0..d` for the first family and `d..2d` for the second; those listed in
/// `dropped` are left out.
pub(crate) fn weighted_constraints(
    w: &DMatrix<f64>,
    off_a: usize,
    off_b: usize,
    n_ops: usize,
    db: usize,
    dropped: &[usize],
) -> DMatrix<f64> {
    let d = w.nrows();
    let c = db * db;
    let kept: Vec<usize> = (0..2 * d).filter(|e| !dropped.contains(e)).collect();
    let mut m = DMatrix::<f64>::zeros(kept.len() * c, n_ops * c);
    for (row_block, &e) in kept.iter().enumerate() {
        for x in 0..c {
            let r = row_block * c + x;
            if e < d {
                m[(r, (off_a + e) * c + x)] += 1.0;
                for k in 0..d {
                    m[(r, (off_b + k) * c + x)] -= w[(e, k)];
                }
            } else {
                let k = e - d;
                m[(r, (off_b + k) * c + x)] += 1.0;
                for j in 0..d {
                    m[(r, (off_a + j) * c + x)] -= w[(j, k)];
                }
            }
        }
    }
    m
}

/// The constraint system of a relatively unbiased pair, where every overlap
/// weight equals `1/d_S`.
pub fn hadamard_system(ds: usize, db: usize, dropped: &[usize]) -> DMatrix<f64> {
    let w = DMatrix::from_element(ds, ds, 1.0 / ds as f64);
    weighted_constraints(&w, 0, ds, 2 * ds, db, dropped)
}

/// `w[j,k] = |<v_j|w_k>|^2`
pub(crate) fn overlap_weights(v: &OrthonormalBasis, w: &OrthonormalBasis) -> DMatrix<f64> {
    let d = v.dim();
    let (vs, ws) = (v.vectors(), w.vectors());
    DMatrix::from_fn(d, d, |j, k| vs[j].inner(&ws[k]).norm_sqr())
}

/// Joint Gell-Mann coordinates of `sum_terms sign * sum_k P_k (x) O_{offset+k}`
/// as a linear function of the unknowns.
pub(crate) fn tensor_sum_system(terms: &[(usize, &OrthonormalBasis, f64)], n_ops: usize, db: usize) -> DMatrix<f64> {
    let ds = terms[0].1.dim();
    let bath = gell_mann_basis(db);
    let joint = gell_mann_basis(ds * db);
    let c = db * db;
    let mut m = DMatrix::<f64>::zeros(joint.len(), n_ops * c);
    for &(offset, basis, sign) in terms {
        for k in 0..basis.dim() {
            let p = basis.projector(k);
            for (x, g) in bath.elements().iter().enumerate() {
                let col = joint.coords(&kron(&p, g));
                for (r, v) in col.into_iter().enumerate() {
                    m[(r, (offset + k) * c + x)] += sign * v;
                }
            }
        }
    }
    m
}

pub(crate) fn vstack(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let cols = blocks[0].ncols();
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::<f64>::zeros(rows, cols);
    let mut r0 = 0;
    for b in blocks {
        out.view_mut((r0, 0), (b.nrows(), cols)).copy_from(b);
        r0 += b.nrows();
    }
    out
}

/// Largest spread `max_k ||O_k - O_0||_F` over `samples` random unit-norm
/// combinations of the null-space columns.
pub fn constraint_spread<R: Rng + ?Sized>(null: &DMatrix<f64>, n_ops: usize, db: usize, samples: usize, rng: &mut R) -> f64 {
    if null.ncols() == 0 {
        return 0.0;
    }
    let bath = gell_mann_basis(db);
    let c = db * db;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let coeffs = nalgebra::DVector::from_fn(null.ncols(), |_, _| rng.sample::<f64, _>(StandardNormal));
        let mut x = null * coeffs;
        x /= x.norm();
        let ops: Vec<_> = (0..n_ops).map(|k| bath.from_coords(&x.as_slice()[k * c..(k + 1) * c])).collect();
        for op in &ops[1..] {
            worst = worst.max((op - &ops[0]).frobenius_norm());
        }
    }
    worst
}

pub fn exp_hadamard_constraint(params: &Params) -> ExperimentReport {
    exp_hadamard_constraint_with(params, &[])
}

/// Runs the collapse test on the pair system with the listed operator
/// equations removed.
pub fn exp_hadamard_constraint_with(params: &Params, dropped: &[usize]) -> ExperimentReport {
    let (ds, db) = (params.dim_s, params.dim_b);
    let mut rng = rng_from_seed(derive_seed(params.seed, 0));
    let mut report = ExperimentReport::new("hadamard-constraint", params);

    let a = hadamard_system(ds, db, dropped);
    let n = nullity(&a);
    report.metric("nullity", n as f64);
    report.metric("expectedNullity", (db * db) as f64);
    report.metric("droppedEquations", dropped.len() as f64);
    report.stage("solution-space", n == db * db, n.abs_diff(db * db) as f64);

    let null = real_nullspace(&a, NULL_CUTOFF);
    let spread = constraint_spread(&null, 2 * ds, db, PARTICULAR_SOLUTIONS, &mut rng);
    report.metric("maxSpread", spread);
    report.stage("collapse", spread <= COLLAPSE_TOL, spread);

    // Equal pre-images of the maximally mixed state in both bases of an
    // unbiased pair must imply the constraint system.
    let (v, w) = relatively_unbiased_pair(ds, &mut rng);
    let weights = overlap_weights(&v, &w);
    let weight_dev = weights.iter().map(|x| (x - 1.0 / ds as f64).abs()).fold(0.0, f64::max);
    let matching = tensor_sum_system(&[(0, &v, 1.0), (ds, &w, -1.0)], 2 * ds, db);
    let matching_null = real_nullspace(&matching, NULL_CUTOFF);
    let derived = weighted_constraints(&weights, 0, ds, 2 * ds, db, &[]);
    let implied = (&derived * &matching_null).abs().max().max((&hadamard_system(ds, db, &[]) * &matching_null).abs().max());
    let premise = weight_dev.max(implied);
    report.metric("premiseResidual", premise);
    report.metric("matchingNullity", matching_null.ncols() as f64);
    report.stage("unbiased-premise", premise <= COLLAPSE_TOL && matching_null.ncols() == db * db, premise);
    report
}
