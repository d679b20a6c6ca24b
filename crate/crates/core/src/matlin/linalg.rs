//! Spectral routines: Hermitian eigendecomposition, singular values, ranks,
//! pseudo-inverses and null spaces.

use nalgebra::{DMatrix, SymmetricEigen};

use super::cmat::{CMat, C64};
use crate::error::{Error, Result};

/// Hermitian inputs may deviate from exact symmetry by at most this much.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 1000;

/// Eigenpairs of a Hermitian matrix, ascending. Column `i` of `vectors`
/// belongs to `values[i]`.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermEig {
    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.column(i)
    }
}

pub fn herm_eig(h: &CMat) -> Result<HermEig> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!("eigensolve of {}x{} matrix", h.rows(), h.cols())));
    }
    let deviation = h.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    herm_eig_unchecked(&h.hermitian_part())
}

fn herm_eig_unchecked(h: &CMat) -> Result<HermEig> {
    let n = h.rows();
    if h.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidState("non-finite entry in eigenproblem".into()));
    }
    let eig = SymmetricEigen::try_new(h.to_nalgebra(), f64::EPSILON, MAX_SWEEPS * n.max(1))
        .ok_or_else(|| Error::InvalidState("eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermEig { values, vectors })
}

/// Singular values in descending order.
///
/// Panics if the input has non-finite entries.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let n = m.rows().max(m.cols());
    let svd = nalgebra::SVD::try_new(m.to_nalgebra(), false, false, f64::EPSILON, MAX_SWEEPS * n)
        .expect("SVD of a finite matrix converges");
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `rel_cutoff` times the largest one.
pub fn rank(m: &CMat, rel_cutoff: f64) -> usize {
    rank_from_singular_values(&singular_values(m), rel_cutoff)
}

pub fn real_rank(m: &DMatrix<f64>, rel_cutoff: f64) -> usize {
    let s: Vec<f64> = m.singular_values().iter().copied().collect();
    rank_from_singular_values(&s, rel_cutoff)
}

fn rank_from_singular_values(s: &[f64], rel_cutoff: f64) -> usize {
    let largest = s.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_cutoff * largest).count()
}

/// Moore-Penrose pseudo-inverse, discarding singular values at or below
/// `rel_cutoff` times the largest.
pub fn pseudo_inverse(m: &CMat, rel_cutoff: f64) -> CMat {
    let svd = m.to_nalgebra().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let largest = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut out = DMatrix::<C64>::zeros(m.cols(), m.rows());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if largest == 0.0 || s <= rel_cutoff * largest {
            continue;
        }
        // out += v_i * (1/s) * u_i^dag
        let vi = v_t.row(i).adjoint();
        let ui = u.column(i);
        out += &vi * (ui.adjoint() * C64::new(1.0 / s, 0.0));
    }
    CMat::from_nalgebra(&out)
}

/// Orthonormal basis (as columns) of the null space of a real matrix, using
/// `rel_cutoff` relative to the largest singular value.
pub fn real_nullspace(m: &DMatrix<f64>, rel_cutoff: f64) -> DMatrix<f64> {
    let (rows, cols) = m.shape();
    // Pad to at least square so that the SVD returns a full V.
    let padded = if rows < cols {
        let mut p = DMatrix::<f64>::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let largest = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let null: Vec<usize> = (0..cols)
        .filter(|&i| largest == 0.0 || svd.singular_values[i] <= rel_cutoff * largest)
        .collect();
    DMatrix::from_fn(cols, null.len(), |r, c| v_t[(null[c], r)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlin::cmat::{kron, pauli, swap};
    use crate::matlin::random::{random_hermitian, rng_from_seed};

    #[test]
    fn pauli_z_spectrum() {
        let e = herm_eig(&pauli::z()).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn identity_spectrum() {
        let e = herm_eig(&CMat::identity(5)).unwrap();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
        assert!(e.vectors.unitarity_deviation() < 1e-12);
    }

    #[test]
    fn swap_spectrum_counts_antisymmetric_subspace() {
        let e = herm_eig(&swap(2)).unwrap();
        let expected = [-1.0, 1.0, 1.0, 1.0];
        for (v, x) in e.values.iter().zip(expected) {
            assert!((v - x).abs() < 1e-12, "{:?}", e.values);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMat::identity(2);
        m[(0, 1)] = C64::new(1e-6, 0.0);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn residuals_and_unitarity_on_random_hermitian() {
        let mut rng = rng_from_seed(11);
        for n in [2, 5, 9, 16] {
            let h = random_hermitian(n, &mut rng);
            let e = herm_eig(&h).unwrap();
            let scale = h.frobenius_norm();
            for i in 0..n {
                let v = e.vector(i);
                let hv = h.matvec(&v);
                let res: f64 = hv.iter().zip(&v).map(|(a, b)| (a - b * e.values[i]).norm_sqr()).sum::<f64>().sqrt();
                assert!(res <= 1e-11 * scale, "residual {res}");
            }
            assert!(e.vectors.unitarity_deviation() < 1e-11);
            let sum: f64 = e.values.iter().sum();
            assert!((sum - h.trace().re).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_and_pinv() {
        let a = kron(&CMat::diag_real(&[1.0, 0.0]), &CMat::identity(2));
        assert_eq!(rank(&a, 1e-10), 2);
        let p = pseudo_inverse(&a, 1e-10);
        assert!(p.max_abs_diff(&a) < 1e-14);
        let mut rng = rng_from_seed(3);
        let h = random_hermitian(4, &mut rng);
        let hp = pseudo_inverse(&h, 1e-12);
        assert!((&h * &hp).max_abs_diff(&CMat::identity(4)) < 1e-9);
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let n = real_nullspace(&m, 1e-12);
        assert_eq!(n.ncols(), 2);
        assert!((&m * &n).abs().max() < 1e-14);
    }
}
