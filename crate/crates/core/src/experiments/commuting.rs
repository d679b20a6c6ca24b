use rand::Rng;
use rand_distr::Exp1;

use super::report::{ExperimentReport, Params};
use crate::correlations::{cq_state, CQSpec};
use crate::error::Error;
use crate::matlin::random::{derive_seed, haar_unitary, rng_from_seed};
use crate::qdp::induced::AUDIT_TOL;
use crate::qdp::{audit_family, induced_map, AssignmentFamily};
use crate::states::{random_density, DensityMatrix, OrthonormalBasis};

/// Uniform point of the probability simplex.
fn simplex_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let x: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = x.iter().sum();
    x.into_iter().map(|v| v / s).collect()
}

pub fn exp_commuting_gap(params: &Params) -> ExperimentReport {
    exp_commuting_gap_with(params, false)
}

/// Classical-quantum family in one fixed system basis with `trials` random
/// weight vectors. With `equal_baths` every conditional bath state is the
/// same, which makes the family a product family over the simplex.
pub fn exp_commuting_gap_with(params: &Params, equal_baths: bool) -> ExperimentReport {
    let (ds, db) = (params.dim_s, params.dim_b);
    let mut rng = rng_from_seed(derive_seed(params.seed, 0));
    let mut report = ExperimentReport::new("commuting-gap", params);

    let basis = OrthonormalBasis::new_unchecked(haar_unitary(ds, &mut rng));
    let baths: Vec<DensityMatrix> = if equal_baths {
        vec![random_density(db, &mut rng); ds]
    } else {
        (0..ds).map(|_| random_density(db, &mut rng)).collect()
    };
    let members = (0..params.trials)
        .map(|_| {
            let spec = CQSpec::new(simplex_point(ds, &mut rng), basis.clone(), baths.clone()).expect("valid weights");
            cq_state(&spec)
        })
        .collect();
    let family = AssignmentFamily::new(members).expect("trials >= 1");
    let audit = audit_family(&family, AUDIT_TOL).expect("non-empty family");
    report.metric("spanDim", audit.span_dim as f64);
    report.metric("affineDim", audit.affine_dim as f64);
    report.metric("fullSpanDim", (ds * ds) as f64);
    report.metric("members", family.len() as f64);
    report.stage("span-dimension", audit.span_dim == ds, audit.span_dim.abs_diff(ds) as f64);
    report.stage("affine-dimension", audit.affine_dim == ds - 1, audit.affine_dim.abs_diff(ds - 1) as f64);

    let u = haar_unitary(ds * db, &mut rng);
    let underdetermined = matches!(
        induced_map(&family, &u),
        Err(Error::Underdetermined { span_dim, required }) if span_dim == audit.span_dim && required == ds * ds
    );
    report.stage("underdetermined", underdetermined, 0.0);
    report
}
