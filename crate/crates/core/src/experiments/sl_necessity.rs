use rand::Rng;

use super::report::{ExperimentReport, Params};
use crate::correlations::{zero_discord_test_with, BipartiteState, DiscordOptions};
use crate::error::{Error, Result};
use crate::matlin::basis::gell_mann_basis;
use crate::matlin::cmat::{kron, CMat};
use crate::matlin::random::{derive_seed, haar_unitary, rng_from_seed};
use crate::qdp::induced::AUDIT_TOL;
use crate::qdp::{audit_family, cp_verdict, AssignmentFamily, InducedMapSolver};
use crate::search::{coordinate_search, GivensChart, SearchOptions};
use crate::states::random_pure;

/// Violation the search has to reach for the experiment to pass.
pub const VIOLATION_THRESHOLD: f64 = -1e-4;
const DISCORD_THRESHOLD: f64 = 1e-3;
const MAX_HALVINGS: usize = 10;
/// Weight of the pure state in each mixed family member.
const PURE_WEIGHT: f64 = 0.5;

/// `A(sigma) = sigma (x) I/d_B + eps * sum_{u>=1} trace(sigma lambda_u) lambda_u (x) gamma_u`,
/// with `u` running over the Gell-Mann indices both factors have.
pub fn correlated_assignment(sigma: &CMat, d_s: usize, d_b: usize, eps: f64) -> CMat {
    let mut out = kron(sigma, &CMat::identity(d_b).scale_re(1.0 / d_b as f64));
    if eps == 0.0 {
        return out;
    }
    let bs = gell_mann_basis(d_s);
    let bb = gell_mann_basis(d_b);
    for u in 1..bs.len().min(bb.len()) {
        let lam = &bs.elements()[u];
        let w = sigma.trace_product(lam).re * eps;
        out = &out + &kron(lam, &bb.elements()[u]).scale_re(w);
    }
    out
}

/// Outcome of the unitary search for a non-CP induced map.
#[derive(Clone, Debug)]
pub struct NecessitySearch {
    pub best_min_eigenvalue: f64,
    pub unitary: CMat,
    pub evals: usize,
}

/// Minimizes the smallest Choi eigenvalue of the induced map: Haar sampling
/// with half the budget, then coordinate descent in a Givens chart around
/// the best sample with the rest.
pub fn search_violation<R: Rng + ?Sized>(solver: &InducedMapSolver, budget: usize, cp_tol: f64, rng: &mut R) -> NecessitySearch {
    let fam = solver.family();
    let n = fam.dim_s() * fam.dim_b();
    let objective = |u: &CMat| match solver.map_for(u) {
        Ok(l) => cp_verdict(&l, cp_tol).min_choi_eigenvalue,
        Err(_) => f64::INFINITY,
    };
    let samples = (budget / 2).max(1);
    let mut best_u = CMat::identity(n);
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let u = haar_unitary(n, rng);
        let v = objective(&u);
        if v < best {
            best = v;
            best_u = u;
        }
    }
    let rest = budget.saturating_sub(samples);
    if rest == 0 {
        return NecessitySearch { best_min_eigenvalue: best, unitary: best_u, evals: samples };
    }
    let chart = GivensChart::new(best_u.clone(), true);
    let found = coordinate_search(
        |x| objective(&chart.unitary(x)),
        vec![0.0; chart.n_params()],
        SearchOptions { initial_step: 0.25, min_step: 1e-10, max_evals: rest, target: f64::NEG_INFINITY },
    );
    if found.value < best {
        NecessitySearch { best_min_eigenvalue: found.value, unitary: chart.unitary(&found.x), evals: samples + found.evals }
    } else {
        NecessitySearch { best_min_eigenvalue: best, unitary: best_u, evals: samples + found.evals }
    }
}

/// Mixed members `(1-t) I/d_S + t |psi><psi|` sent through the assignment.
/// Halves `eps` until every member is a state.
fn build_family(params: &Params, eps: f64) -> Result<(AssignmentFamily, f64, usize)> {
    let (ds, db) = (params.dim_s, params.dim_b);
    let mut rng = rng_from_seed(derive_seed(params.seed, 0));
    let sigmas: Vec<CMat> = (0..ds * ds + 2)
        .map(|_| {
            let p = random_pure(ds, &mut rng).projector();
            &CMat::identity(ds).scale_re((1.0 - PURE_WEIGHT) / ds as f64) + &p.scale_re(PURE_WEIGHT)
        })
        .collect();
    let mut e = eps;
    for halvings in 0..=MAX_HALVINGS {
        let members: Result<Vec<BipartiteState>> = sigmas
            .iter()
            .map(|s| BipartiteState::new(correlated_assignment(s, ds, db, e).hermitian_part(), ds, db))
            .collect();
        if let Ok(members) = members {
            return Ok((AssignmentFamily::new(members)?, e, halvings));
        }
        e /= 2.0;
    }
    Err(Error::ConstructionFailed(format!("no member set is positive for eps down to {}", e * 2.0)))
}

pub fn exp_sl_necessity(params: &Params) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("sl-necessity", params);
    let (family, eps, halvings) = build_family(params, params.eps)?;
    report.metric("effectiveEps", eps);
    report.metric("halvings", halvings as f64);

    let audit = audit_family(&family, AUDIT_TOL)?;
    report.stage("family-audit", audit.injective && audit.full_span, (params.dim_s.pow(2) - audit.span_dim) as f64);

    let opts = DiscordOptions { tol: params.discord_tol, gap_tol: params.gap_tol, ..DiscordOptions::default() };
    let residuals: Vec<f64> = family.members().iter().map(|m| zero_discord_test_with(m, &opts).residual).collect();
    let max_res = residuals.iter().copied().fold(0.0, f64::max);
    for (i, r) in residuals.iter().enumerate() {
        report.metric(&format!("discordResidual.{i:03}"), *r);
    }
    report.metric("maxDiscordResidual", max_res);
    report.stage("discordant-members", max_res > DISCORD_THRESHOLD, max_res);

    let search = |fam: &AssignmentFamily| -> Result<NecessitySearch> {
        let solver = InducedMapSolver::new(fam)?;
        let mut rng = rng_from_seed(derive_seed(params.seed, 1));
        Ok(search_violation(&solver, params.budget, params.cp_tol, &mut rng))
    };
    let found = search(&family)?;
    report.metric("bestMinChoiEigenvalue", found.best_min_eigenvalue);
    report.metric("searchEvals", found.evals as f64);
    report.stage("violation-search", found.best_min_eigenvalue <= VIOLATION_THRESHOLD, found.best_min_eigenvalue);

    // Same members without correlations: a product family, every map CP.
    let (control_family, _, _) = build_family(params, 0.0)?;
    let control = search(&control_family)?;
    report.metric("controlMinChoiEigenvalue", control.best_min_eigenvalue);
    report.stage("control-eps0", control.best_min_eigenvalue >= -params.cp_tol, control.best_min_eigenvalue);
    Ok(report)
}
