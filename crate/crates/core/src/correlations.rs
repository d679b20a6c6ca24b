//! System-bath joint states: product embeddings, classical-quantum states,
//! block decompositions and the zero-discord test (measurement on the
//! system side).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matlin::basis::{dist, DistKind};
use crate::matlin::cmat::{kron, partial_trace_bath, partial_trace_system, CMat};
use crate::matlin::linalg::{herm_eig, singular_values};
use crate::matlin::random::{derive_seed, haar_unitary, rng_from_seed};
use crate::search::{coordinate_search, GivensChart, SearchOptions};
use crate::states::{DensityMatrix, OrthonormalBasis, DEFAULT_GAP_TOL};

pub const DEFAULT_DISCORD_TOL: f64 = 1e-8;

/// Density matrix on `H_S (x) H_B` with declared factor dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    dim_s: usize,
    dim_b: usize,
    state: DensityMatrix,
}

impl BipartiteState {
    pub fn new(mat: CMat, dim_s: usize, dim_b: usize) -> Result<Self> {
        if dim_s == 0 || dim_b == 0 || dim_s.checked_mul(dim_b) != Some(mat.rows()) || !mat.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix does not factor as {dim_s}*{dim_b}",
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(Self { dim_s, dim_b, state: DensityMatrix::new(mat)? })
    }

    pub(crate) fn new_unchecked(mat: CMat, dim_s: usize, dim_b: usize) -> Self {
        Self { dim_s, dim_b, state: DensityMatrix::new_unchecked(mat) }
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn mat(&self) -> &CMat {
        self.state.mat()
    }

    pub fn as_density(&self) -> &DensityMatrix {
        &self.state
    }

    /// `Tr_B rho`
    pub fn system_marginal(&self) -> DensityMatrix {
        let m = partial_trace_bath(self.mat(), self.dim_s, self.dim_b).expect("dims checked at construction");
        DensityMatrix::new_unchecked(m.hermitian_part())
    }

    /// `Tr_S rho`
    pub fn bath_marginal(&self) -> DensityMatrix {
        let m = partial_trace_system(self.mat(), self.dim_s, self.dim_b).expect("dims checked at construction");
        DensityMatrix::new_unchecked(m.hermitian_part())
    }

    /// `(U_S (x) U_B) rho (U_S (x) U_B)^dag`
    pub fn locally_rotated(&self, u_s: &CMat, u_b: &CMat) -> Self {
        Self::new_unchecked(self.mat().conjugate_by(&kron(u_s, u_b)), self.dim_s, self.dim_b)
    }
}

/// Data of a classical-quantum state `sum_j p_j |j><j| (x) rho_Bj`.
#[derive(Clone, Debug)]
pub struct CQSpec {
    pub probs: Vec<f64>,
    pub basis: OrthonormalBasis,
    pub bath_states: Vec<DensityMatrix>,
}

impl CQSpec {
    pub fn new(probs: Vec<f64>, basis: OrthonormalBasis, bath_states: Vec<DensityMatrix>) -> Result<Self> {
        let d = basis.dim();
        if probs.len() != d || bath_states.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities and {} bath states for a {d}-dimensional basis",
                probs.len(),
                bath_states.len()
            )));
        }
        if probs.iter().any(|&p| p.is_nan() || p < 0.0) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState("probabilities must be nonnegative and sum to 1".into()));
        }
        let db = bath_states[0].dim();
        if bath_states.iter().any(|b| b.dim() != db) {
            return Err(Error::DimensionMismatch("bath states differ in dimension".into()));
        }
        Ok(Self { probs, basis, bath_states })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscordPath {
    /// Marginal spectrum nondegenerate: its eigenbasis is the only candidate.
    Nondegenerate,
    /// Degenerate marginal: multi-start search over measurement bases.
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct DiscordVerdict {
    pub is_zero: bool,
    /// Trace norm of `rho - sum_j P_j rho P_j` in the witness basis.
    pub residual: f64,
    pub witness_basis: OrthonormalBasis,
    pub path: DiscordPath,
}

#[derive(Clone, Copy, Debug)]
pub struct DiscordOptions {
    pub tol: f64,
    pub gap_tol: f64,
    /// Number of local searches on the degenerate path.
    pub starts: usize,
    /// Step size at which each local search stops.
    pub convergence: f64,
    pub seed: u64,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_DISCORD_TOL, gap_tol: DEFAULT_GAP_TOL, starts: 16, convergence: 1e-10, seed: 0 }
    }
}

pub fn product_embed(rho_s: &DensityMatrix, rho_b: &DensityMatrix) -> BipartiteState {
    BipartiteState::new_unchecked(kron(rho_s.mat(), rho_b.mat()), rho_s.dim(), rho_b.dim())
}

pub fn cq_state(spec: &CQSpec) -> BipartiteState {
    let ds = spec.basis.dim();
    let db = spec.bath_states[0].dim();
    let mut m = CMat::zeros(ds * db, ds * db);
    for (j, (p, rb)) in spec.probs.iter().zip(&spec.bath_states).enumerate() {
        if *p != 0.0 {
            m = &m + &kron(&spec.basis.projector(j), rb.mat()).scale_re(*p);
        }
    }
    BipartiteState::new_unchecked(m, ds, db)
}

/// `A_jk = (<j| (x) 1) rho (|k> (x) 1)` for the vectors of `basis`, indexed
/// `blocks[j][k]`.
pub fn system_blocks(rho: &BipartiteState, basis: &OrthonormalBasis) -> Result<Vec<Vec<CMat>>> {
    if basis.dim() != rho.dim_s() {
        return Err(Error::DimensionMismatch(format!("basis dim {} vs system dim {}", basis.dim(), rho.dim_s())));
    }
    let db = rho.dim_b();
    let rotated = rotate_to_basis(rho, basis.mat());
    Ok((0..rho.dim_s())
        .map(|j| (0..rho.dim_s()).map(|k| CMat::from_fn(db, db, |a, b| rotated[(j * db + a, k * db + b)])).collect())
        .collect())
}

/// `sum_jk |j><k| (x) A_jk`
pub fn reassemble_blocks(blocks: &[Vec<CMat>], basis: &OrthonormalBasis) -> CMat {
    let vecs: Vec<_> = basis.vectors();
    let mut out: Option<CMat> = None;
    for (j, row) in blocks.iter().enumerate() {
        for (k, a) in row.iter().enumerate() {
            let term = kron(&CMat::outer(vecs[j].as_slice(), vecs[k].as_slice()), a);
            out = Some(match out {
                Some(acc) => &acc + &term,
                None => term,
            });
        }
    }
    out.expect("at least one block")
}

/// `(V (x) 1)^dag rho (V (x) 1)`
fn rotate_to_basis(rho: &BipartiteState, v: &CMat) -> CMat {
    let w = kron(v, &CMat::identity(rho.dim_b()));
    &(&w.adjoint() * rho.mat()) * &w
}

/// Off-diagonal block part of `rho` in the rotated frame of `v`.
fn off_diagonal_part(rho: &BipartiteState, v: &CMat) -> CMat {
    let db = rho.dim_b();
    let mut r = rotate_to_basis(rho, v);
    for row in 0..r.rows() {
        for col in 0..r.cols() {
            if row / db == col / db {
                r[(row, col)] = crate::matlin::cmat::ZERO;
            }
        }
    }
    r
}

/// Trace distance (sum of singular values) between `rho` and its image under
/// a projective measurement of the system in basis `v`.
pub fn measurement_disturbance(rho: &BipartiteState, v: &CMat) -> f64 {
    singular_values(&off_diagonal_part(rho, v)).iter().sum()
}

fn disturbance_surrogate(rho: &BipartiteState, v: &CMat) -> f64 {
    off_diagonal_part(rho, v).frobenius_norm().powi(2)
}

pub fn zero_discord_test(rho: &BipartiteState, tol: f64) -> DiscordVerdict {
    zero_discord_test_with(rho, &DiscordOptions { tol, ..Default::default() })
}

/// Decides whether `rho` is classical-quantum, i.e. of the form
/// `sum_j p_j |j><j| (x) rho_Bj` for some system basis.
///
/// Such a basis must diagonalize the system marginal, so with a
/// nondegenerate marginal the eigenbasis is tested directly. Otherwise the
/// disturbance is minimized over measurement bases from several starts: the
/// squared Frobenius norm of the off-diagonal blocks is the smooth objective,
/// and the reported residual is the trace-norm disturbance at the best point.
pub fn zero_discord_test_with(rho: &BipartiteState, opts: &DiscordOptions) -> DiscordVerdict {
    let marginal = rho.system_marginal();
    let eig = herm_eig(marginal.mat()).expect("marginal is Hermitian");
    let min_gap = eig.values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);

    if min_gap > opts.gap_tol {
        let residual = measurement_disturbance(rho, &eig.vectors);
        return DiscordVerdict {
            is_zero: residual <= opts.tol,
            residual,
            witness_basis: OrthonormalBasis::new_unchecked(eig.vectors),
            path: DiscordPath::Nondegenerate,
        };
    }

    let ds = rho.dim_s();
    let search = SearchOptions { initial_step: 0.4, min_step: opts.convergence, max_evals: 5_000 * ds * ds, ..Default::default() };
    let starts = opts.starts.max(1);
    let results: Vec<(f64, CMat)> = (0..starts)
        .into_par_iter()
        .map(|s| {
            let base = if s == 0 {
                eig.vectors.clone()
            } else {
                haar_unitary(ds, &mut rng_from_seed(derive_seed(opts.seed, s as u64)))
            };
            let chart = GivensChart::new(base, false);
            let found = coordinate_search(
                |x| disturbance_surrogate(rho, &chart.unitary(x)),
                vec![0.0; chart.n_params()],
                search,
            );
            let v = chart.unitary(&found.x);
            (measurement_disturbance(rho, &v), v)
        })
        .collect();
    // First minimum by start index keeps the outcome schedule-independent.
    let (residual, v) = results
        .into_iter()
        .reduce(|best, cand| if cand.0 < best.0 { cand } else { best })
        .expect("at least one start");
    DiscordVerdict {
        is_zero: residual <= opts.tol,
        residual,
        witness_basis: OrthonormalBasis::new_unchecked(v),
        path: DiscordPath::Degenerate,
    }
}

/// For a state whose system marginal is pure, returns the bath factor
/// `rho_B = Tr_S rho` after checking `rho = |psi><psi| (x) rho_B`.
pub fn pure_marginal_factorizes(rho: &BipartiteState, tol: f64) -> Result<DensityMatrix> {
    let eig = herm_eig(rho.system_marginal().mat())?;
    let top = rho.dim_s() - 1;
    let largest = eig.values[top];
    if largest < 1.0 - tol {
        return Err(Error::NotPureMarginal { largest });
    }
    let psi = eig.vectors.column(top);
    let rho_b = rho.bath_marginal();
    let residual = dist(rho.mat(), &kron(&CMat::outer(&psi, &psi), rho_b.mat()), DistKind::Frobenius)?;
    if residual > tol.sqrt() {
        return Err(Error::FactorizationResidual { residual });
    }
    Ok(rho_b)
}
