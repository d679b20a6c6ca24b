use crate::error::{Error, Result};
use crate::matlin::cmat::{partial_trace_bath, CMat};
use crate::matlin::linalg::pseudo_inverse;

use super::family::{audit_family, AssignmentFamily, RANK_CUTOFF};
use super::superop::Superoperator;

/// Marginals closer than this are treated as the same system state.
pub const AUDIT_TOL: f64 = 1e-10;
/// Largest entry-wise misfit tolerated between the fitted map and the
/// evolved marginals.
pub const FIT_TOL: f64 = 1e-9;

/// Audits a family once and caches the pseudo-inverse of its marginal
/// matrix, so the induced map can be rebuilt cheaply for many unitaries.
#[derive(Clone, Debug)]
pub struct InducedMapSolver {
    family: AssignmentFamily,
    /// `d^2 x n` matrix pseudo-inverse, `n x d^2`.
    marginals_pinv: CMat,
    marginals: CMat,
}

impl InducedMapSolver {
    pub fn new(omega: &AssignmentFamily) -> Result<Self> {
        let report = audit_family(omega, AUDIT_TOL)?;
        if !report.injective {
            return Err(Error::NotInjective { pairs: report.colliding_pairs });
        }
        let d2 = omega.dim_s() * omega.dim_s();
        if !report.full_span {
            return Err(Error::Underdetermined { span_dim: report.span_dim, required: d2 });
        }
        let cols: Vec<_> = omega.marginals().iter().map(|m| m.mat().vec_col()).collect();
        let marginals = CMat::from_columns(&cols);
        Ok(Self { family: omega.clone(), marginals_pinv: pseudo_inverse(&marginals, RANK_CUTOFF), marginals })
    }

    pub fn family(&self) -> &AssignmentFamily {
        &self.family
    }

    /// The linear `L` with `L(Tr_B m_i) = Tr_B(u m_i u^dag)` for every member.
    pub fn map_for(&self, u: &CMat) -> Result<Superoperator> {
        let (ds, db) = (self.family.dim_s(), self.family.dim_b());
        if u.rows() != ds * db || !u.is_square() {
            return Err(Error::DimensionMismatch(format!("unitary of size {} for dims {ds}*{db}", u.rows())));
        }
        let deviation = u.unitarity_deviation();
        if deviation > 1e-10 {
            return Err(Error::NotUnitary { deviation });
        }
        let images: Vec<_> = self
            .family
            .members()
            .iter()
            .map(|m| partial_trace_bath(&m.mat().conjugate_by(u), ds, db).map(|x| x.vec_col()))
            .collect::<Result<_>>()?;
        let images = CMat::from_columns(&images);
        let fitted = &images * &self.marginals_pinv;
        let residual = (&fitted * &self.marginals).max_abs_diff(&images);
        if residual > FIT_TOL {
            return Err(Error::InconsistentImages { residual });
        }
        Superoperator::new(ds, fitted)
    }
}

/// Induced system map of a family under the joint unitary `u`, defined by
/// linear extension from the marginals.
pub fn induced_map(omega: &AssignmentFamily, u: &CMat) -> Result<Superoperator> {
    InducedMapSolver::new(omega)?.map_for(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::{cq_state, product_embed, BipartiteState, CQSpec};
    use crate::matlin::cmat::{kron, pauli};
    use crate::matlin::random::{haar_unitary, rng_from_seed};
    use crate::qdp::superop::folklore_map;
    use crate::states::{random_density, DensityMatrix, OrthonormalBasis};

    fn folklore_family(ds: usize, fid: &DensityMatrix, count: usize, seed: u64) -> AssignmentFamily {
        let mut rng = rng_from_seed(seed);
        AssignmentFamily::new((0..count).map(|_| product_embed(&random_density(ds, &mut rng), fid)).collect()).unwrap()
    }

    #[test]
    fn folklore_family_reproduces_folklore_map() {
        let mut rng = rng_from_seed(1);
        for (ds, db) in [(2, 2), (2, 3), (3, 2)] {
            let fid = random_density(db, &mut rng);
            let fam = folklore_family(ds, &fid, ds * ds + 2, 7);
            let u = haar_unitary(ds * db, &mut rng);
            let l = induced_map(&fam, &u).unwrap();
            assert!(l.mat().max_abs_diff(folklore_map(&fid, &u).unwrap().mat()) < 1e-9);
        }
    }

    #[test]
    fn map_depends_only_on_the_span() {
        let mut rng = rng_from_seed(2);
        let fid = random_density(2, &mut rng);
        let a = folklore_family(2, &fid, 4, 100);
        let b = folklore_family(2, &fid, 9, 200);
        let u = haar_unitary(4, &mut rng);
        let la = induced_map(&a, &u).unwrap();
        let lb = induced_map(&b, &u).unwrap();
        assert!(la.mat().max_abs_diff(lb.mat()) < 1e-9);
    }

    #[test]
    fn classical_family_is_underdetermined() {
        let mut rng = rng_from_seed(3);
        let basis = OrthonormalBasis::computational(2);
        let baths = vec![random_density(2, &mut rng), random_density(2, &mut rng)];
        let members = [0.2, 0.5, 0.7, 0.9]
            .iter()
            .map(|&p| cq_state(&CQSpec::new(vec![p, 1.0 - p], basis.clone(), baths.clone()).unwrap()))
            .collect();
        let fam = AssignmentFamily::new(members).unwrap();
        let err = induced_map(&fam, &haar_unitary(4, &mut rng)).unwrap_err();
        assert_eq!(err, Error::Underdetermined { span_dim: 2, required: 4 });
    }

    #[test]
    fn collision_is_not_injective() {
        let mixed = CMat::identity(4).scale_re(0.25);
        let correlated = &mixed + &kron(&pauli::z(), &pauli::z()).scale_re(0.2);
        let fid = DensityMatrix::maximally_mixed(2);
        let mut members = folklore_family(2, &fid, 4, 5).members().to_vec();
        members.push(BipartiteState::new(correlated, 2, 2).unwrap());
        members.push(BipartiteState::new(mixed, 2, 2).unwrap());
        let fam = AssignmentFamily::new(members).unwrap();
        assert!(matches!(induced_map(&fam, &CMat::identity(4)), Err(Error::NotInjective { pairs }) if pairs == vec![(4, 5)]));
    }
}
