//! Local search over the unitary group.
//!
//! Unitaries near a base point are charted as
//! `base * prod_{j<k} G_jk(theta, phi) * diag(exp(i alpha))`, where `G_jk`
//! is a Givens rotation in the `(j, k)` plane. The chart is minimized with a
//! derivative-free coordinate search.

use crate::matlin::cmat::{CMat, C64};

#[derive(Clone, Debug)]
pub struct GivensChart {
    base: CMat,
    with_phases: bool,
}

impl GivensChart {
    /// `with_phases = false` drops the trailing diagonal, which is enough
    /// whenever the objective ignores column phases (e.g. measurement bases).
    pub fn new(base: CMat, with_phases: bool) -> Self {
        assert!(base.is_square());
        Self { base, with_phases }
    }

    pub fn dim(&self) -> usize {
        self.base.rows()
    }

    pub fn n_params(&self) -> usize {
        let d = self.dim();
        d * (d - 1) + if self.with_phases { d } else { 0 }
    }

    pub fn unitary(&self, x: &[f64]) -> CMat {
        assert_eq!(x.len(), self.n_params());
        let d = self.dim();
        let mut w = self.base.clone();
        let mut idx = 0;
        for j in 0..d {
            for k in j + 1..d {
                let (theta, phi) = (x[idx], x[idx + 1]);
                idx += 2;
                if theta == 0.0 {
                    continue;
                }
                let (s, c) = theta.sin_cos();
                let e = C64::from_polar(s, phi);
                for r in 0..d {
                    let (wj, wk) = (w[(r, j)], w[(r, k)]);
                    w[(r, j)] = wj * c + wk * e;
                    w[(r, k)] = wk * c - wj * e.conj();
                }
            }
        }
        if self.with_phases {
            for c in 0..d {
                let p = C64::from_polar(1.0, x[idx + c]);
                for r in 0..d {
                    w[(r, c)] *= p;
                }
            }
        }
        w
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub initial_step: f64,
    /// Stop once the step has shrunk below this.
    pub min_step: f64,
    pub max_evals: usize,
    /// Stop as soon as the objective reaches this value.
    pub target: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { initial_step: 0.25, min_step: 1e-10, max_evals: 20_000, target: f64::NEG_INFINITY }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Compass search: probe `+-step` along each coordinate, keep improvements,
/// halve the step after a sweep without progress.
pub fn coordinate_search(mut f: impl FnMut(&[f64]) -> f64, x0: Vec<f64>, opts: SearchOptions) -> SearchResult {
    let mut x = x0;
    let mut best = f(&x);
    let mut evals = 1;
    let mut step = opts.initial_step;
    while step >= opts.min_step && evals < opts.max_evals && best > opts.target {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                if evals >= opts.max_evals {
                    break;
                }
                let old = x[i];
                x[i] = old + dir * step;
                let v = f(&x);
                evals += 1;
                if v < best {
                    best = v;
                    improved = true;
                    break;
                }
                x[i] = old;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    SearchResult { x, value: best, evals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlin::random::{haar_unitary, rng_from_seed};

    #[test]
    fn chart_is_unitary_and_centered() {
        let mut rng = rng_from_seed(1);
        let base = haar_unitary(4, &mut rng);
        let chart = GivensChart::new(base.clone(), true);
        assert_eq!(chart.n_params(), 16);
        assert_eq!(chart.unitary(&[0.0; 16]), base);
        let x: Vec<f64> = (0..16).map(|i| 0.3 * i as f64 - 1.7).collect();
        assert!(chart.unitary(&x).unitarity_deviation() < 1e-13);
    }

    #[test]
    fn chart_reaches_a_target_unitary() {
        // Every unitary is reachable: minimize the distance to a random target.
        let mut rng = rng_from_seed(2);
        let target = haar_unitary(3, &mut rng);
        let chart = GivensChart::new(CMat::identity(3), true);
        let res = coordinate_search(
            |x| (&chart.unitary(x) - &target).frobenius_norm().powi(2),
            vec![0.1; chart.n_params()],
            SearchOptions { max_evals: 200_000, ..Default::default() },
        );
        assert!(res.value < 1e-12, "{}", res.value);
    }

    #[test]
    fn coordinate_search_minimizes_quadratic() {
        let res = coordinate_search(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2),
            vec![0.0, 0.0],
            SearchOptions::default(),
        );
        assert!((res.x[0] - 1.0).abs() < 1e-8 && (res.x[1] + 0.5).abs() < 1e-8);
        let capped = coordinate_search(|x| x[0] * x[0], vec![5.0], SearchOptions { max_evals: 3, ..Default::default() });
        assert_eq!(capped.evals, 3);
    }
}
