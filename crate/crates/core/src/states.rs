//! Validated states and bases: density matrices, pure states, orthonormal
//! bases, spectral degeneracy classes, complex Hadamard matrices and pairs of
//! relatively unbiased bases.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matlin::cmat::{CMat, C64};
use crate::matlin::linalg::herm_eig;
use crate::matlin::random::{ginibre, haar_unitary, random_unit_vector};

/// Tolerance for the Hermiticity, positivity and trace checks on states.
pub const STATE_TOL: f64 = 1e-10;
/// Eigenvalue gaps at or below this count as degenerate.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and unit trace, naming the first
    /// check that fails.
    pub fn new(mat: CMat) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState(format!("density matrix must be square, got {}x{}", mat.rows(), mat.cols())));
        }
        let herm = mat.hermiticity_deviation();
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian: max |rho - rho^dag| = {herm:.3e}")));
        }
        let tr = mat.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {:.12} + {:.3e}i, expected 1", tr.re, tr.im)));
        }
        let min_eig = herm_eig(&mat)?.values[0];
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState(format!("not positive: smallest eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { mat })
    }

    pub(crate) fn new_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self { mat: CMat::identity(d).scale_re(1.0 / d as f64) }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self { mat: psi.projector() }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(CMat::diag_real(probs))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    vec: Vec<C64>,
}

impl PureState {
    pub fn new(vec: Vec<C64>) -> Result<Self> {
        let norm = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vec.is_empty() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("state vector norm is {norm}, expected 1")));
        }
        Ok(Self { vec })
    }

    pub fn normalized(vec: Vec<C64>) -> Result<Self> {
        let norm = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(Self { vec: vec.into_iter().map(|z| z / norm).collect() })
    }

    pub fn basis_state(d: usize, k: usize) -> Self {
        let mut vec = vec![C64::new(0.0, 0.0); d];
        vec[k] = C64::new(1.0, 0.0);
        Self { vec }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.vec
    }

    pub fn projector(&self) -> CMat {
        CMat::outer(&self.vec, &self.vec)
    }

    pub fn inner(&self, other: &PureState) -> C64 {
        self.vec.iter().zip(&other.vec).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Columns of a unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalBasis {
    mat: CMat,
}

impl OrthonormalBasis {
    pub fn new(mat: CMat) -> Result<Self> {
        let deviation = mat.unitarity_deviation();
        if deviation > 1e-11 {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { mat })
    }

    pub(crate) fn new_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn computational(d: usize) -> Self {
        Self { mat: CMat::identity(d) }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn vector(&self, k: usize) -> PureState {
        PureState { vec: self.mat.column(k) }
    }

    pub fn vectors(&self) -> Vec<PureState> {
        (0..self.dim()).map(|k| self.vector(k)).collect()
    }

    /// `|k><k|`
    pub fn projector(&self, k: usize) -> CMat {
        let v = self.mat.column(k);
        CMat::outer(&v, &v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Degeneracy {
    Nondegenerate,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumClass {
    pub eigenvalues: Vec<f64>,
    pub label: Degeneracy,
    pub min_gap: f64,
}

/// Hilbert-Schmidt random state `G G^dag / trace(G G^dag)`.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(d, d, rng);
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new_unchecked(w.scale_re(1.0 / tr).hermitian_part())
}

pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    PureState { vec: random_unit_vector(d, rng) }
}

pub fn spectrum_class(rho: &DensityMatrix, gap_tol: f64) -> SpectrumClass {
    let eigenvalues = herm_eig(rho.mat()).expect("density matrices are Hermitian").values;
    let min_gap = eigenvalues.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let label = if min_gap <= gap_tol { Degeneracy::Degenerate } else { Degeneracy::Nondegenerate };
    SpectrumClass { eigenvalues, label, min_gap }
}

/// Probabilities `p_j = <j|rho|j>` of a state that is diagonal in `basis`;
/// the barycentric coordinates of `rho` in that basis' simplex.
pub fn simplex_coords(rho: &DensityMatrix, basis: &OrthonormalBasis) -> Result<Vec<f64>> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch(format!("state dim {} vs basis dim {}", rho.dim(), basis.dim())));
    }
    let v = basis.mat();
    let rotated = &(&v.adjoint() * rho.mat()) * v;
    let d = rho.dim();
    let mut offdiag: f64 = 0.0;
    for r in 0..d {
        for c in 0..d {
            if r != c {
                offdiag = offdiag.max(rotated[(r, c)].norm());
            }
        }
    }
    if offdiag > 1e-8 {
        return Err(Error::NotDiagonalInBasis { offdiag });
    }
    Ok((0..d).map(|j| rotated[(j, j)].re).collect())
}

/// Fourier matrix `U[k][a] = exp(2 pi i k a / d) / sqrt(d)`: the characters of
/// the cyclic group of order `d`.
pub fn dft_hadamard(d: usize) -> CMat {
    let s = 1.0 / (d as f64).sqrt();
    CMat::from_fn(d, d, |k, a| {
        let phase = 2.0 * PI * ((k * a) % d) as f64 / d as f64;
        C64::from_polar(s, phase)
    })
}

/// Unitary within `tol` with every entry of modulus `1/sqrt(d)` within `tol`.
pub fn is_hadamard(u: &CMat, tol: f64) -> bool {
    if !u.is_square() {
        return false;
    }
    let target = 1.0 / (u.rows() as f64).sqrt();
    u.unitarity_deviation() <= tol && u.as_slice().iter().all(|z| (z.norm() - target).abs() <= tol)
}

/// Basis pair related by a Hadamard matrix: `(V, V H)`.
pub fn relatively_unbiased_pair_from(v: &OrthonormalBasis, hadamard: &CMat) -> Result<(OrthonormalBasis, OrthonormalBasis)> {
    if hadamard.rows() != v.dim() || !is_hadamard(hadamard, 1e-10) {
        return Err(Error::PreconditionViolated("second argument must be a Hadamard matrix of matching size".into()));
    }
    let second = OrthonormalBasis::new(v.mat() * hadamard)?;
    Ok((v.clone(), second))
}

/// `(V, V F)` with `V` Haar random and `F` the Fourier matrix, so that
/// `|<psi_k|phi_a>|^2 = 1/d` for all `k, a`.
pub fn relatively_unbiased_pair<R: Rng + ?Sized>(d: usize, rng: &mut R) -> (OrthonormalBasis, OrthonormalBasis) {
    let v = OrthonormalBasis::new_unchecked(haar_unitary(d, rng));
    let second = OrthonormalBasis::new_unchecked(v.mat() * &dft_hadamard(d));
    (v, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlin::random::rng_from_seed;

    #[test]
    fn random_density_is_valid() {
        let mut rng = rng_from_seed(4);
        for _ in 0..1000 {
            let rho = random_density(3, &mut rng);
            assert!((rho.mat().trace().re - 1.0).abs() < 1e-12);
            let e = herm_eig(rho.mat()).unwrap();
            assert!(e.values[0] >= -1e-12);
            assert!(DensityMatrix::new(rho.mat().clone()).is_ok());
        }
    }

    #[test]
    fn hilbert_schmidt_purity_matches_uniform_bloch_ball() {
        // Independent oracle: at d = 2 the Hilbert-Schmidt measure is the uniform
        // measure on the Bloch ball, and purity = (1 + r^2)/2. Sample the ball by
        // rejection and compare the two Monte Carlo means.
        let mut rng = rng_from_seed(8);
        let n = 100_000;
        let mut ball = 0.0;
        let mut count = 0;
        while count < n {
            let (x, y, z): (f64, f64, f64) =
                (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let r2 = x * x + y * y + z * z;
            if r2 <= 1.0 {
                ball += (1.0 + r2) / 2.0;
                count += 1;
            }
        }
        let oracle = ball / n as f64;
        let mut rng = rng_from_seed(9);
        let hs: f64 = (0..n).map(|_| random_density(2, &mut rng).purity()).sum::<f64>() / n as f64;
        assert!((oracle - 0.8).abs() < 0.01, "oracle {oracle}");
        assert!((hs - oracle).abs() < 0.01, "hs {hs} vs oracle {oracle}");
    }

    #[test]
    fn random_pure_norm_and_moment() {
        let mut rng = rng_from_seed(10);
        let n = 10_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let psi = random_pure(4, &mut rng);
            let norm: f64 = psi.as_slice().iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            acc += psi.as_slice()[0].norm_sqr();
        }
        assert!((acc / n as f64 - 0.25).abs() < 0.01);
        assert_eq!(random_pure(3, &mut rng_from_seed(1)), random_pure(3, &mut rng_from_seed(1)));
    }

    #[test]
    fn density_validation_reports_failure() {
        let err = DensityMatrix::new(CMat::diag_real(&[0.5, 0.4])).unwrap_err();
        assert!(format!("{err}").contains("trace"));
        let err = DensityMatrix::new(CMat::diag_real(&[1.5, -0.5])).unwrap_err();
        assert!(format!("{err}").contains("positive"));
        let mut m = CMat::diag_real(&[0.5, 0.5]);
        m[(0, 1)] = C64::new(0.1, 0.0);
        let err = DensityMatrix::new(m).unwrap_err();
        assert!(format!("{err}").contains("Hermitian"));
    }

    #[test]
    fn spectrum_classes() {
        let c = spectrum_class(&DensityMatrix::maximally_mixed(3), DEFAULT_GAP_TOL);
        assert_eq!(c.label, Degeneracy::Degenerate);
        assert!(c.min_gap.abs() < 1e-15);
        let c = spectrum_class(&DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap(), DEFAULT_GAP_TOL);
        assert_eq!(c.label, Degeneracy::Nondegenerate);
        assert!((c.min_gap - 0.1).abs() < 1e-12);
        let c = spectrum_class(&DensityMatrix::diagonal(&[0.4, 0.4, 0.2]).unwrap(), DEFAULT_GAP_TOL);
        assert_eq!(c.label, Degeneracy::Degenerate);
    }

    #[test]
    fn spectrum_class_ignores_basis_relabeling() {
        let mut rng = rng_from_seed(12);
        for _ in 0..20 {
            let rho = random_density(3, &mut rng);
            let perm = CMat::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
            let permuted = DensityMatrix::new(rho.mat().conjugate_by(&perm)).unwrap();
            let a = spectrum_class(&rho, DEFAULT_GAP_TOL);
            let b = spectrum_class(&permuted, DEFAULT_GAP_TOL);
            assert_eq!(a.label, b.label);
            for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn random_states_are_generically_nondegenerate() {
        let mut rng = rng_from_seed(13);
        let n = 2000;
        let nondeg = (0..n)
            .filter(|_| spectrum_class(&random_density(3, &mut rng), 1e-6).label == Degeneracy::Nondegenerate)
            .count();
        assert!(nondeg as f64 / n as f64 > 0.99);
    }

    #[test]
    fn simplex_coordinates() {
        let basis = OrthonormalBasis::new(haar_unitary(3, &mut rng_from_seed(14))).unwrap();
        let p = simplex_coords(&DensityMatrix::maximally_mixed(3), &basis).unwrap();
        assert!(p.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-12));

        let comp = OrthonormalBasis::computational(3);
        let pure0 = DensityMatrix::from_pure(&PureState::basis_state(3, 0));
        assert_eq!(simplex_coords(&pure0, &comp).unwrap(), vec![1.0, 0.0, 0.0]);
        let rho = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        assert_eq!(simplex_coords(&rho, &comp).unwrap(), vec![0.5, 0.3, 0.2]);

        // degenerate states are accepted; the basis must only commute with rho
        let rho = DensityMatrix::diagonal(&[0.4, 0.4, 0.2]).unwrap();
        assert!(simplex_coords(&rho, &comp).is_ok());
        assert!(matches!(simplex_coords(&pure0, &basis), Err(Error::NotDiagonalInBasis { .. })));
    }

    #[test]
    fn fourier_matrices_are_hadamard() {
        let f2 = dft_hadamard(2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = CMat::from_real_rows(&[&[s, s], &[s, -s]]);
        assert!(f2.max_abs_diff(&expected) < 1e-15);
        for d in 2..=6 {
            let f = dft_hadamard(d);
            assert!((&f * &f.adjoint()).max_abs_diff(&CMat::identity(d)) < 1e-12);
            assert!(is_hadamard(&f, 1e-12));
        }
        assert!(!is_hadamard(&CMat::identity(2), 1e-6));
    }

    #[test]
    fn phases_preserve_hadamard_property() {
        let d1 = CMat::from_fn(2, 2, |r, c| if r == c { C64::from_polar(1.0, 0.3 + r as f64) } else { C64::new(0.0, 0.0) });
        let d2 = CMat::from_fn(2, 2, |r, c| if r == c { C64::from_polar(1.0, -1.1 * r as f64) } else { C64::new(0.0, 0.0) });
        let h = &(&d1 * &dft_hadamard(2)) * &d2;
        assert!(is_hadamard(&h, 1e-12));
    }

    #[test]
    fn unbiased_pair_overlaps() {
        let (a, b) = relatively_unbiased_pair_from(&OrthonormalBasis::computational(2), &dft_hadamard(2)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(a, OrthonormalBasis::computational(2));
        let plus = PureState::new(vec![C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        assert!((b.vector(0).inner(&plus).norm() - 1.0).abs() < 1e-15);

        let mut rng = rng_from_seed(15);
        for d in 2..=5 {
            for _ in 0..20 {
                let (psi, phi) = relatively_unbiased_pair(d, &mut rng);
                assert!(psi.mat().unitarity_deviation() < 1e-11);
                assert!(phi.mat().unitarity_deviation() < 1e-11);
                for k in 0..d {
                    for a in 0..d {
                        let o = psi.vector(k).inner(&phi.vector(a)).norm_sqr();
                        assert!((o - 1.0 / d as f64).abs() < 1e-10);
                    }
                }
            }
        }
    }
}
