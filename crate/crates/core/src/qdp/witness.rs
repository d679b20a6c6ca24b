use rand::Rng;

use crate::error::{Error, Result};
use crate::matlin::cmat::{partial_trace_bath, CMat};
use crate::matlin::random::haar_unitary;
use crate::search::{coordinate_search, GivensChart, SearchOptions};

pub const DEFAULT_MAX_TRIALS: usize = 200;

/// A joint unitary under which a bath-invisible perturbation becomes visible
/// on the system.
#[derive(Clone, Debug)]
pub struct Witness {
    pub unitary: CMat,
    /// `||Tr_B(u delta u^dag)||_F`
    pub gain: f64,
}

/// `||Tr_B(u delta u^dag)||_F`
pub fn witness_gain(delta: &CMat, u: &CMat, d_s: usize, d_b: usize) -> Result<f64> {
    Ok(partial_trace_bath(&delta.conjugate_by(u), d_s, d_b)?.frobenius_norm())
}

/// Finds a unitary `u` that turns `delta` (Hermitian, `Tr_B delta = 0`,
/// nonzero) into an operator with a nonzero system marginal,
/// `||Tr_B(u delta u^dag)||_F >= 1e-3 ||delta||_F`.
///
/// Half of `max_trials` goes to Haar sampling; if the best sample is still
/// short of the threshold it is refined by coordinate ascent in a Givens
/// chart.
pub fn illdefinedness_witness<R: Rng + ?Sized>(
    delta: &CMat,
    d_s: usize,
    d_b: usize,
    rng: &mut R,
    max_trials: usize,
) -> Result<Witness> {
    let n = d_s * d_b;
    if !delta.is_square() || delta.rows() != n {
        return Err(Error::PreconditionViolated(format!("delta must be {n}x{n}")));
    }
    let norm = delta.frobenius_norm();
    if norm <= 1e-10 {
        return Err(Error::PreconditionViolated("delta is zero".into()));
    }
    if delta.hermiticity_deviation() > 1e-10 {
        return Err(Error::PreconditionViolated("delta is not Hermitian".into()));
    }
    let marginal = partial_trace_bath(delta, d_s, d_b)?;
    if marginal.max_abs() > 1e-10 {
        return Err(Error::PreconditionViolated("Tr_B delta is nonzero".into()));
    }
    let threshold = 1e-3 * norm;

    let sampling = (max_trials / 2).max(1);
    let mut best: Option<Witness> = None;
    for _ in 0..sampling {
        let u = haar_unitary(n, rng);
        let gain = witness_gain(delta, &u, d_s, d_b)?;
        if best.as_ref().is_none_or(|b| gain > b.gain) {
            best = Some(Witness { unitary: u, gain });
        }
    }
    let best = best.expect("at least one sample");
    if best.gain >= threshold {
        return Ok(best);
    }

    let budget = (max_trials - sampling).max(1);
    refine_witness(delta, d_s, d_b, &best.unitary, budget, threshold)
        .map_err(|e| match e {
            Error::WitnessNotFound { best: g, needed } => Error::WitnessNotFound { best: g.max(best.gain), needed },
            other => other,
        })
}

/// Coordinate ascent on the gain around `start`, with `budget` sweeps' worth
/// of evaluations.
fn refine_witness(delta: &CMat, d_s: usize, d_b: usize, start: &CMat, budget: usize, threshold: f64) -> Result<Witness> {
    let chart = GivensChart::new(start.clone(), true);
    let opts = SearchOptions {
        initial_step: 0.5,
        min_step: 1e-8,
        max_evals: budget * chart.n_params(),
        target: -threshold,
    };
    let found = coordinate_search(
        |x| -witness_gain(delta, &chart.unitary(x), d_s, d_b).expect("sizes checked"),
        vec![0.0; chart.n_params()],
        opts,
    );
    let gain = -found.value;
    if gain >= threshold {
        Ok(Witness { unitary: chart.unitary(&found.x), gain })
    } else {
        Err(Error::WitnessNotFound { best: gain, needed: threshold })
    }
}
