use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::report::{ExperimentReport, Params, TrialRecord};
use crate::matlin::basis::{resum_coeffs, CoeffMatrix};
use crate::matlin::cmat::CMat;
use crate::matlin::random::{derive_seed, rng_from_seed};
use crate::qdp::witness::{illdefinedness_witness, DEFAULT_MAX_TRIALS};

/// Random Hermitian `delta` with `Tr_B delta = 0` and `||delta||_F = 1`:
/// Gaussian Gell-Mann coefficients with the bath-identity column left at zero.
pub fn random_bath_invisible<R: Rng + ?Sized>(d_s: usize, d_b: usize, rng: &mut R) -> CMat {
    let mut c = CoeffMatrix::zeros(d_s * d_s, d_b * d_b);
    for u in 0..d_s * d_s {
        for v in 1..d_b * d_b {
            c.set(u, v, rng.sample(StandardNormal));
        }
    }
    let delta = resum_coeffs(&c, d_s, d_b);
    let norm = delta.frobenius_norm();
    delta.scale_re(1.0 / norm)
}

pub fn exp_property1(params: &Params) -> ExperimentReport {
    exp_property1_with(params, None)
}

/// Each trial searches for a joint unitary that makes a bath-invisible
/// perturbation visible on the system. `delta` fixes the perturbation for
/// every trial instead of drawing a random one.
pub fn exp_property1_with(params: &Params, delta: Option<&CMat>) -> ExperimentReport {
    let (ds, db) = (params.dim_s, params.dim_b);
    let trials: Vec<TrialRecord> = (0..params.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(params.seed, i as u64));
            let delta = match delta {
                Some(d) => d.clone(),
                None => random_bath_invisible(ds, db, &mut rng),
            };
            let norm = delta.frobenius_norm();
            match illdefinedness_witness(&delta, ds, db, &mut rng, DEFAULT_MAX_TRIALS) {
                Ok(w) => TrialRecord::new(i, true, &[("gain", w.gain), ("relativeGain", w.gain / norm)]),
                Err(_) => TrialRecord::new(i, false, &[]),
            }
        })
        .collect();

    let mut report = ExperimentReport::new("property1-witness", params);
    let min_gain = trials.iter().map(|t| t.values.get("relativeGain").copied().unwrap_or(0.0)).fold(f64::INFINITY, f64::min);
    report.metric("minRelativeGain", min_gain);
    report.metric("successRate", trials.iter().filter(|t| t.pass).count() as f64 / trials.len() as f64);
    report.trials = trials;
    report
}
