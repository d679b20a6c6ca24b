//! Staged reconstruction showing that a consistent linear assignment which
//! reaches every pure system state must be the product assignment
//! `sigma -> sigma (x) rho_fid`.

use nalgebra::DMatrix;
use rand::Rng;

use super::hadamard::{
    constraint_spread, nullity, overlap_weights, tensor_sum_system, vstack, weighted_constraints, NULL_CUTOFF,
};
use super::report::{ExperimentReport, Params};
use crate::correlations::{pure_marginal_factorizes, BipartiteState};
use crate::matlin::basis::{dist, gell_mann_basis, DistKind};
use crate::matlin::cmat::{kron, CMat, C64};
use crate::matlin::linalg::{pseudo_inverse, rank, real_nullspace};
use crate::matlin::random::{derive_seed, haar_unitary, rng_from_seed};
use crate::qdp::{cp_verdict, folklore_map, AssignmentFamily, InducedMapSolver};
use crate::states::{dft_hadamard, random_density, relatively_unbiased_pair_from, OrthonormalBasis};

const STAGE_TOL: f64 = 1e-10;
const AGREEMENT_TOL: f64 = 1e-9;
const PARTICULAR_SOLUTIONS: usize = 20;
const CP_CHECKS: usize = 20;

/// A DFT matrix dressed with random diagonal phases on both sides.
fn random_hadamard<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let phases = |rng: &mut R| {
        let p: Vec<C64> = (0..d).map(|_| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))).collect();
        CMat::from_fn(d, d, |r, c| if r == c { p[r] } else { C64::new(0.0, 0.0) })
    };
    let left = phases(rng);
    let right = phases(rng);
    &(&left * &dft_hadamard(d)) * &right
}

/// Enough relatively unbiased pairs that their projectors span all system
/// operators: each basis adds `d - 1` directions beyond the identity.
fn pair_count(ds: usize) -> usize {
    (ds + 1).div_ceil(2).max(2)
}

pub fn exp_theorem2_pipeline(params: &Params) -> ExperimentReport {
    let (ds, db) = (params.dim_s, params.dim_b);
    let mut report = ExperimentReport::new("theorem2-pipeline", params);
    let mut rng = rng_from_seed(derive_seed(params.seed, 0));

    let k_pairs = pair_count(ds);
    let mut bases: Vec<OrthonormalBasis> = Vec::with_capacity(2 * k_pairs);
    for _ in 0..k_pairs {
        let v = OrthonormalBasis::new_unchecked(haar_unitary(ds, &mut rng));
        let h = random_hadamard(ds, &mut rng);
        let (v, w) = relatively_unbiased_pair_from(&v, &h).expect("dressed DFT is a Hadamard matrix");
        bases.push(v);
        bases.push(w);
    }
    let n_ops = bases.len() * ds;
    report.metric("pairs", k_pairs as f64);

    // 1. states with a pure marginal have product pre-images
    let mut worst_factor: f64 = 0.0;
    let mut factor_ok = true;
    for b in &bases {
        for k in 0..ds {
            let p = kron(&b.projector(k), &CMat::identity(db));
            let r = random_density(ds * db, &mut rng);
            let sandwiched = &(&p * r.mat()) * &p;
            let cand = sandwiched.scale_re(1.0 / sandwiched.trace().re);
            let state = BipartiteState::new(cand.hermitian_part(), ds, db);
            match state.and_then(|s| pure_marginal_factorizes(&s, STAGE_TOL).map(|rb| (s, rb))) {
                Ok((s, rb)) => {
                    let res = dist(s.mat(), &kron(&b.projector(k), rb.mat()), DistKind::Frobenius).unwrap_or(f64::INFINITY);
                    worst_factor = worst_factor.max(res);
                }
                Err(_) => factor_ok = false,
            }
        }
    }
    report.stage("pure-marginal-factorization", factor_ok && worst_factor <= STAGE_TOL, worst_factor);

    // 2. one unbiased pair forces a common bath operator
    let weights: Vec<DMatrix<f64>> = (0..k_pairs).map(|k| overlap_weights(&bases[2 * k], &bases[2 * k + 1])).collect();
    let weight_dev = weights.iter().flat_map(|w| w.iter()).map(|x| (x - 1.0 / ds as f64).abs()).fold(0.0, f64::max);
    let first = weighted_constraints(&weights[0], 0, ds, 2 * ds, db, &[]);
    let first_null = real_nullspace(&first, NULL_CUTOFF);
    let spread = constraint_spread(&first_null, 2 * ds, db, PARTICULAR_SOLUTIONS, &mut rng);
    let res2 = spread.max(weight_dev);
    report.stage("hadamard-constraint", nullity(&first) == db * db && res2 <= STAGE_TOL, res2);

    // 3. pairs share the maximally mixed state, so they share the operator
    let mut blocks: Vec<DMatrix<f64>> = (0..k_pairs)
        .map(|k| weighted_constraints(&weights[k], 2 * k * ds, (2 * k + 1) * ds, n_ops, db, &[]))
        .collect();
    for k in 1..k_pairs {
        blocks.push(tensor_sum_system(&[(0, &bases[0], 1.0), (2 * k * ds, &bases[2 * k], -1.0)], n_ops, db));
    }
    let chained = vstack(&blocks);
    let null = real_nullspace(&chained, NULL_CUTOFF);
    let spread = constraint_spread(&null, n_ops, db, PARTICULAR_SOLUTIONS, &mut rng);
    report.metric("chainedNullity", null.ncols() as f64);
    report.stage("pair-propagation", null.ncols() == db * db && spread <= STAGE_TOL, spread);

    // 4. the pure-state pre-images determine the whole assignment
    let fid = random_density(db, &mut rng);
    let bath = gell_mann_basis(db);
    let c = db * db;
    let fid_coords = bath.coords(fid.mat());
    let replicated = nalgebra::DVector::from_fn(n_ops * c, |i, _| fid_coords[i % c]);
    let projected = &null * (null.transpose() * &replicated);
    let ops: Vec<CMat> = (0..n_ops).map(|k| bath.from_coords(&projected.as_slice()[k * c..(k + 1) * c])).collect();
    let recovery = ops.iter().map(|o| (o - fid.mat()).frobenius_norm()).fold(0.0, f64::max);

    let projectors: Vec<CMat> = bases.iter().flat_map(|b| (0..ds).map(|k| b.projector(k))).collect();
    let x = CMat::from_columns(&projectors.iter().map(|p| p.vec_col()).collect::<Vec<_>>());
    let y = CMat::from_columns(&projectors.iter().zip(&ops).map(|(p, o)| kron(p, o).vec_col()).collect::<Vec<_>>());
    let spans = rank(&x, NULL_CUTOFF) == ds * ds;
    let assignment = &y * &pseudo_inverse(&x, NULL_CUTOFF);
    let mut embed_dev: f64 = 0.0;
    for j in 0..ds {
        for k in 0..ds {
            let e = CMat::unit(ds, j, k);
            let image = assignment.matvec(&e.vec_col());
            let want = kron(&e, fid.mat()).vec_col();
            embed_dev = embed_dev.max(image.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        }
    }

    let members: Vec<BipartiteState> = projectors
        .iter()
        .zip(&ops)
        .filter_map(|(p, o)| BipartiteState::new(kron(p, o).hermitian_part(), ds, db).ok())
        .collect();
    let mut superop_dev = f64::INFINITY;
    let mut min_eig = f64::NEG_INFINITY;
    if members.len() == projectors.len() {
        if let Ok(solver) = AssignmentFamily::new(members).and_then(|f| InducedMapSolver::new(&f)) {
            superop_dev = 0.0;
            min_eig = f64::INFINITY;
            for _ in 0..CP_CHECKS {
                let u = haar_unitary(ds * db, &mut rng);
                match (solver.map_for(&u), folklore_map(&fid, &u)) {
                    (Ok(l), Ok(f)) => {
                        superop_dev = superop_dev.max(l.mat().max_abs_diff(f.mat()));
                        min_eig = min_eig.min(cp_verdict(&l, params.cp_tol).min_choi_eigenvalue);
                    }
                    _ => superop_dev = f64::INFINITY,
                }
            }
        }
    }
    let res4 = recovery.max(embed_dev).max(superop_dev);
    report.metric("fiducialRecovery", recovery);
    report.metric("embeddingDeviation", embed_dev);
    report.metric("superopDeviation", superop_dev);
    report.metric("minChoiEigenvalue", min_eig);
    report.stage(
        "span-closure",
        spans && recovery <= STAGE_TOL && embed_dev <= AGREEMENT_TOL && superop_dev <= AGREEMENT_TOL && min_eig >= -params.cp_tol,
        res4,
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::is_hadamard;

    #[test]
    fn dressed_dft_is_hadamard() {
        let mut rng = rng_from_seed(2);
        for d in 2..6 {
            assert!(is_hadamard(&random_hadamard(d, &mut rng), 1e-12));
        }
    }

    #[test]
    fn pair_count_covers_operator_space() {
        for d in 2..8 {
            assert!(1 + 2 * pair_count(d) * (d - 1) >= d * d);
        }
    }

    #[test]
    fn pipeline_passes() {
        for (ds, db) in [(2, 2), (2, 3), (3, 2)] {
            let r = exp_theorem2_pipeline(&Params { seed: 3, ..Params::with_dims(ds, db) });
            assert_eq!(r.stages.len(), 4);
            assert!(r.passed(), "{ds}x{db}: {:?}", r.stages);
        }
    }
}
