use rayon::prelude::*;

use super::report::{ExperimentReport, Params, TrialRecord};
use crate::matlin::cmat::CMat;
use crate::matlin::random::{derive_seed, haar_unitary, rng_from_seed};
use crate::qdp::{cp_verdict, folklore_map};
use crate::states::random_density;

pub fn exp_folklore_cp(params: &Params) -> ExperimentReport {
    exp_folklore_cp_with(params, None)
}

/// Random fiducial bath state and Haar joint unitary per trial; `unitary`
/// replaces the Haar draw in every trial when given.
pub fn exp_folklore_cp_with(params: &Params, unitary: Option<&CMat>) -> ExperimentReport {
    let (ds, db) = (params.dim_s, params.dim_b);
    let trials: Vec<TrialRecord> = (0..params.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(params.seed, i as u64));
            let fid = random_density(db, &mut rng);
            let u = match unitary {
                Some(u) => u.clone(),
                None => haar_unitary(ds * db, &mut rng),
            };
            match folklore_map(&fid, &u) {
                Ok(l) => {
                    let v = cp_verdict(&l, params.cp_tol);
                    let pass = v.is_cp && v.tp_residual <= params.cp_tol;
                    TrialRecord::new(
                        i,
                        pass,
                        &[("minChoiEigenvalue", v.min_choi_eigenvalue), ("tpResidual", v.tp_residual)],
                    )
                }
                Err(_) => TrialRecord::new(i, false, &[]),
            }
        })
        .collect();

    let mut report = ExperimentReport::new("folklore-cp", params);
    let worst_eig = trials.iter().filter_map(|t| t.values.get("minChoiEigenvalue")).copied().fold(f64::INFINITY, f64::min);
    let worst_tp = trials.iter().filter_map(|t| t.values.get("tpResidual")).copied().fold(0.0, f64::max);
    report.metric("worstMinChoiEigenvalue", worst_eig);
    report.metric("worstTpResidual", worst_tp);
    report.trials = trials;
    report
}
