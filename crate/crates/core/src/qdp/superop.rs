//! Superoperators under column-stacking, their Choi matrices, complete
//! positivity verdicts and Kraus decompositions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matlin::cmat::{kron, partial_trace_bath, CMat, C64};
use crate::matlin::linalg::herm_eig;
use crate::states::DensityMatrix;

pub const DEFAULT_CP_TOL: f64 = 1e-9;
/// Choi matrices farther than this from Hermitian mark a map that does not
/// preserve Hermiticity.
pub const CHOI_HERMITIAN_TOL: f64 = 1e-8;

/// Linear map on `d x d` matrices acting as `mat * vec(X)`, with `vec`
/// stacking columns. Column `j + k d` of `mat` is `vec(L(E_jk))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    dim: usize,
    mat: CMat,
}

impl Superoperator {
    pub fn new(dim: usize, mat: CMat) -> Result<Self> {
        let n = dim * dim;
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::DimensionMismatch(format!("superoperator on dim {dim} needs {n}x{n}")));
        }
        Ok(Self { dim, mat })
    }

    /// Assembles `L` from its action on the matrix units.
    pub fn from_fn(dim: usize, mut f: impl FnMut(&CMat) -> CMat) -> Self {
        let n = dim * dim;
        let mut mat = CMat::zeros(n, n);
        for k in 0..dim {
            for j in 0..dim {
                let image = f(&CMat::unit(dim, j, k)).vec_col();
                let col = j + k * dim;
                for (r, z) in image.into_iter().enumerate() {
                    mat[(r, col)] = z;
                }
            }
        }
        Self { dim, mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, mat: CMat::identity(dim * dim) }
    }

    pub fn transpose_map(dim: usize) -> Self {
        Self::from_fn(dim, CMat::transpose)
    }

    /// `X -> trace(X) sigma`
    pub fn constant(sigma: &CMat) -> Self {
        Self::from_fn(sigma.rows(), |x| sigma.scale(x.trace()))
    }

    /// `X -> V X V^dag`
    pub fn unitary_channel(v: &CMat) -> Self {
        Self::from_fn(v.rows(), |x| x.conjugate_by(v))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        CMat::unvec_col(&self.mat.matvec(&x.vec_col()), self.dim)
    }

    /// `L(E_jk)`
    pub fn image_of_unit(&self, j: usize, k: usize) -> CMat {
        CMat::unvec_col(&self.mat.column(j + k * self.dim), self.dim)
    }

    /// `a L + b M`
    pub fn combine(&self, a: C64, other: &Superoperator, b: C64) -> Superoperator {
        assert_eq!(self.dim, other.dim);
        Self { dim: self.dim, mat: &self.mat.scale(a) + &other.mat.scale(b) }
    }
}

/// `C = sum_jk E_jk (x) L(E_jk)`, unnormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    mat: CMat,
}

impl ChoiMatrix {
    pub fn new(dim: usize, mat: CMat) -> Result<Self> {
        let n = dim * dim;
        if mat.rows() != n || mat.cols() != n {
            return Err(Error::DimensionMismatch(format!("Choi matrix on dim {dim} needs {n}x{n}")));
        }
        Ok(Self { dim, mat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// Inverse of [`choi_of`].
    pub fn to_superoperator(&self) -> Superoperator {
        let d = self.dim;
        Superoperator::from_fn(d, |x| {
            // L(X) = sum_jk X_jk L(E_jk), and L(E_jk)[a][b] = C[(j,a),(k,b)].
            CMat::from_fn(d, d, |a, b| {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..d {
                    for k in 0..d {
                        acc += x[(j, k)] * self.mat[(j * d + a, k * d + b)];
                    }
                }
                acc
            })
        })
    }
}

pub fn choi_of(l: &Superoperator) -> ChoiMatrix {
    let d = l.dim;
    let mut mat = CMat::zeros(d * d, d * d);
    for j in 0..d {
        for k in 0..d {
            let img = l.image_of_unit(j, k);
            for a in 0..d {
                for b in 0..d {
                    mat[(j * d + a, k * d + b)] = img[(a, b)];
                }
            }
        }
    }
    ChoiMatrix { dim: d, mat }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CPVerdict {
    #[serde(rename = "isCP")]
    pub is_cp: bool,
    #[serde(rename = "minChoiEigenvalue")]
    pub min_choi_eigenvalue: f64,
    #[serde(rename = "isTP")]
    pub is_tp: bool,
    #[serde(rename = "tpResidual")]
    pub tp_residual: f64,
    #[serde(rename = "isHermPreserving")]
    pub is_herm_preserving: bool,
}

/// Complete positivity from the smallest Choi eigenvalue (`>= -tol`), trace
/// preservation from `trace(L(E_jk)) = delta_jk`.
pub fn cp_verdict(l: &Superoperator, tol: f64) -> CPVerdict {
    let choi = choi_of(l);
    let is_herm_preserving = choi.mat.hermiticity_deviation() <= CHOI_HERMITIAN_TOL;
    // NaN (never certified) if the eigensolver gives up
    let min_choi_eigenvalue = herm_eig(&choi.mat.hermitian_part()).map_or(f64::NAN, |e| e.values[0]);

    let d = l.dim;
    let mut tp_residual: f64 = 0.0;
    for j in 0..d {
        for k in 0..d {
            let want = if j == k { 1.0 } else { 0.0 };
            tp_residual = tp_residual.max((l.image_of_unit(j, k).trace() - C64::new(want, 0.0)).norm());
        }
    }
    CPVerdict {
        is_cp: is_herm_preserving && min_choi_eigenvalue >= -tol,
        min_choi_eigenvalue,
        is_tp: tp_residual <= tol,
        tp_residual,
        is_herm_preserving,
    }
}

/// Kraus operators `K_i = sqrt(mu_i) unvec(v_i)` from the eigenpairs of the
/// Choi matrix with `mu_i > tol`.
pub fn kraus_from_choi(c: &ChoiMatrix, tol: f64) -> Result<Vec<CMat>> {
    let eig = herm_eig(&c.mat)?;
    if eig.values[0] < -tol {
        return Err(Error::NotCP { min_eigenvalue: eig.values[0] });
    }
    let d = c.dim;
    Ok(eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > tol)
        .map(|(i, &mu)| CMat::unvec_col(&eig.vectors.column(i), d).scale_re(mu.sqrt()))
        .collect())
}

/// `X -> sum_i K_i X K_i^dag`
pub fn superop_from_kraus(kraus: &[CMat]) -> Superoperator {
    let d = kraus[0].rows();
    Superoperator::from_fn(d, |x| {
        kraus.iter().fold(CMat::zeros(d, d), |acc, k| &acc + &x.conjugate_by(k))
    })
}

/// The product-scheme map `X -> Tr_B[u (X (x) rho_fid) u^dag]`.
pub fn folklore_map(rho_fid: &DensityMatrix, u: &CMat) -> Result<Superoperator> {
    let db = rho_fid.dim();
    if !u.is_square() || !u.rows().is_multiple_of(db) || u.rows() / db == 0 {
        return Err(Error::DimensionMismatch(format!("unitary of size {} is not dS*{db}", u.rows())));
    }
    let deviation = u.unitarity_deviation();
    if deviation > 1e-10 {
        return Err(Error::NotUnitary { deviation });
    }
    let ds = u.rows() / db;
    Ok(Superoperator::from_fn(ds, |x| {
        partial_trace_bath(&kron(x, rho_fid.mat()).conjugate_by(u), ds, db).expect("sizes match")
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matlin::cmat::swap;
    use crate::matlin::random::{haar_unitary, rng_from_seed};
    use crate::states::random_density;

    fn close(a: &Superoperator, b: &Superoperator, tol: f64) -> bool {
        a.mat().max_abs_diff(b.mat()) <= tol
    }

    #[test]
    fn apply_matches_definition() {
        let mut rng = rng_from_seed(1);
        let v = haar_unitary(3, &mut rng);
        let l = Superoperator::unitary_channel(&v);
        let x = random_density(3, &mut rng).into_mat();
        assert!(l.apply(&x).max_abs_diff(&x.conjugate_by(&v)) < 1e-14);
    }

    #[test]
    fn identity_choi_is_rank_one() {
        let c = choi_of(&Superoperator::identity(2));
        let eig = herm_eig(c.mat()).unwrap();
        assert!((eig.values[3] - 2.0).abs() < 1e-14);
        assert!(eig.values[..3].iter().all(|v| v.abs() < 1e-14));
        let v = cp_verdict(&Superoperator::identity(2), DEFAULT_CP_TOL);
        assert!(v.is_cp && v.is_tp && v.is_herm_preserving);
        assert!(v.min_choi_eigenvalue.abs() < 1e-10);
    }

    #[test]
    fn transpose_choi_is_swap() {
        let c = choi_of(&Superoperator::transpose_map(2));
        assert_eq!(c.mat(), &swap(2));
        let v = cp_verdict(&Superoperator::transpose_map(2), DEFAULT_CP_TOL);
        assert!(!v.is_cp && v.is_tp);
        assert!((v.min_choi_eigenvalue + 1.0).abs() < 1e-9);
        assert!(matches!(kraus_from_choi(&c, 1e-10), Err(Error::NotCP { .. })));
    }

    #[test]
    fn depolarizing_choi() {
        let d = 3;
        let l = Superoperator::constant(&CMat::identity(d).scale_re(1.0 / d as f64));
        assert!(choi_of(&l).mat().max_abs_diff(&CMat::identity(d * d).scale_re(1.0 / d as f64)) < 1e-15);
    }

    #[test]
    fn choi_is_linear_and_invertible() {
        let mut rng = rng_from_seed(2);
        let a = Superoperator::unitary_channel(&haar_unitary(2, &mut rng));
        let b = Superoperator::transpose_map(2);
        let (x, y) = (C64::new(0.3, -1.2), C64::new(2.0, 0.5));
        let lhs = choi_of(&a.combine(x, &b, y));
        let rhs = &choi_of(&a).mat().scale(x) + &choi_of(&b).mat().scale(y);
        assert!(lhs.mat().max_abs_diff(&rhs) < 1e-12);
        assert!(close(&choi_of(&a).to_superoperator(), &a, 1e-15));
    }

    #[test]
    fn unitary_channels_have_rank_one_choi() {
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let l = Superoperator::unitary_channel(&haar_unitary(3, &mut rng));
            let v = cp_verdict(&l, DEFAULT_CP_TOL);
            assert!(v.is_cp && v.is_tp);
            let eig = herm_eig(choi_of(&l).mat()).unwrap();
            assert!(eig.values[eig.values.len() - 2] <= 1e-9);
        }
    }

    #[test]
    fn kraus_examples() {
        let id = kraus_from_choi(&choi_of(&Superoperator::identity(2)), 1e-10).unwrap();
        assert_eq!(id.len(), 1);
        // K = e^{i t} I
        let k = &id[0];
        let phase = k[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-12);
        assert!(k.max_abs_diff(&CMat::identity(2).scale(phase)) < 1e-12);

        let mut rng = rng_from_seed(4);
        for rank in [1usize, 2] {
            let fid = if rank == 1 {
                DensityMatrix::from_pure(&crate::states::PureState::basis_state(2, 0))
            } else {
                random_density(2, &mut rng)
            };
            let l = folklore_map(&fid, &swap(2)).unwrap();
            assert!(close(&l, &Superoperator::constant(fid.mat()), 1e-15));
            let ks = kraus_from_choi(&choi_of(&l), 1e-10).unwrap();
            assert_eq!(ks.len(), 2 * rank);
            assert!(close(&superop_from_kraus(&ks), &l, 1e-10));
        }
    }

    #[test]
    fn folklore_maps_are_channels() {
        let mut rng = rng_from_seed(5);
        let fid = random_density(2, &mut rng);
        assert!(close(&folklore_map(&fid, &CMat::identity(4)).unwrap(), &Superoperator::identity(2), 1e-15));
        let c = choi_of(&folklore_map(&fid, &swap(2)).unwrap());
        assert!(c.mat().max_abs_diff(&kron(&CMat::identity(2), fid.mat())) < 1e-15);
        for _ in 0..200 {
            let fid = random_density(2, &mut rng);
            let l = folklore_map(&fid, &haar_unitary(4, &mut rng)).unwrap();
            let v = cp_verdict(&l, DEFAULT_CP_TOL);
            assert!(v.is_cp && v.is_tp, "{v:?}");
        }
        assert!(matches!(folklore_map(&fid, &CMat::identity(4).scale_re(2.0)), Err(Error::NotUnitary { .. })));
        assert!(folklore_map(&fid, &CMat::identity(5)).is_err());
    }
}
