use nalgebra::DMatrix;
use serde::Serialize;

use crate::correlations::BipartiteState;
use crate::error::{Error, Result};
use crate::matlin::basis::{dist, gell_mann_basis, DistKind};
use crate::matlin::cmat::{CMat, C64};
use crate::matlin::linalg::{rank, real_rank};
use crate::states::DensityMatrix;

/// Relative singular-value cutoff used for every rank decision.
pub const RANK_CUTOFF: f64 = 1e-10;

/// An enumerated set of joint initial states together with their system
/// marginals.
#[derive(Clone, Debug)]
pub struct AssignmentFamily {
    dim_s: usize,
    dim_b: usize,
    members: Vec<BipartiteState>,
    marginals: Vec<DensityMatrix>,
}

impl AssignmentFamily {
    pub fn new(members: Vec<BipartiteState>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyFamily)?;
        let (dim_s, dim_b) = (first.dim_s(), first.dim_b());
        if members.iter().any(|m| m.dim_s() != dim_s || m.dim_b() != dim_b) {
            return Err(Error::DimensionMismatch("family members disagree on (dimS, dimB)".into()));
        }
        let marginals = members.iter().map(BipartiteState::system_marginal).collect();
        Ok(Self { dim_s, dim_b, members, marginals })
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn members(&self) -> &[BipartiteState] {
        &self.members
    }

    pub fn marginals(&self) -> &[DensityMatrix] {
        &self.marginals
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub injective: bool,
    #[serde(rename = "collidingPairs")]
    pub colliding_pairs: Vec<(usize, usize)>,
    #[serde(rename = "spanDim")]
    pub span_dim: usize,
    #[serde(rename = "affineDim")]
    pub affine_dim: usize,
    #[serde(rename = "fullSpan")]
    pub full_span: bool,
}

/// Checks that no marginal has two different pre-images (injectivity) and
/// measures how much of the system operator space the marginals cover.
pub fn audit_family(omega: &AssignmentFamily, tol: f64) -> Result<AuditReport> {
    if omega.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let n = omega.len();
    let mut colliding_pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dm = dist(omega.marginals[i].mat(), omega.marginals[j].mat(), DistKind::Frobenius)?;
            if dm <= tol {
                let dj = dist(omega.members[i].mat(), omega.members[j].mat(), DistKind::Frobenius)?;
                if dj > tol {
                    colliding_pairs.push((i, j));
                }
            }
        }
    }

    let d2 = omega.dim_s * omega.dim_s;
    let rows: Vec<Vec<C64>> = omega.marginals.iter().map(|m| m.mat().vec_col()).collect();
    let span = CMat::from_fn(n, d2, |r, c| rows[r][c]);
    let span_dim = rank(&span, RANK_CUTOFF);

    let basis = gell_mann_basis(omega.dim_s);
    let coords: Vec<Vec<f64>> = omega.marginals.iter().map(|m| basis.coords(m.mat())).collect();
    let diffs = DMatrix::from_fn(n, d2, |r, c| coords[r][c] - coords[0][c]);
    let affine_dim = real_rank(&diffs, RANK_CUTOFF);

    Ok(AuditReport {
        injective: colliding_pairs.is_empty(),
        colliding_pairs,
        span_dim,
        affine_dim,
        full_span: span_dim == d2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::{cq_state, product_embed, CQSpec};
    use crate::matlin::cmat::{kron, pauli};
    use crate::matlin::random::{haar_unitary, rng_from_seed};
    use crate::states::{random_density, OrthonormalBasis};
    use rand::Rng;

    #[test]
    fn folklore_family_is_injective_and_spanning() {
        let mut rng = rng_from_seed(1);
        for (ds, db) in [(2, 2), (3, 2)] {
            let fid = random_density(db, &mut rng);
            let members =
                (0..ds * ds).map(|_| product_embed(&random_density(ds, &mut rng), &fid)).collect::<Vec<_>>();
            let report = audit_family(&AssignmentFamily::new(members).unwrap(), 1e-10).unwrap();
            assert!(report.injective);
            assert_eq!(report.span_dim, ds * ds);
            assert_eq!(report.affine_dim, ds * ds - 1);
            assert!(report.full_span);
        }
    }

    #[test]
    fn fixed_basis_cq_family_spans_the_diagonal() {
        let mut rng = rng_from_seed(2);
        let ds = 3;
        let basis = OrthonormalBasis::new(haar_unitary(ds, &mut rng)).unwrap();
        let baths: Vec<_> = (0..ds).map(|_| random_density(2, &mut rng)).collect();
        let members = (0..30)
            .map(|_| {
                let raw: Vec<f64> = (0..ds).map(|_| rng.random::<f64>() + 1e-3).collect();
                let t: f64 = raw.iter().sum();
                cq_state(&CQSpec::new(raw.iter().map(|x| x / t).collect(), basis.clone(), baths.clone()).unwrap())
            })
            .collect();
        let report = audit_family(&AssignmentFamily::new(members).unwrap(), 1e-10).unwrap();
        assert_eq!(report.span_dim, ds);
        assert_eq!(report.affine_dim, ds - 1);
        assert!(!report.full_span);
        assert!(report.injective);
    }

    #[test]
    fn constructed_collision_is_reported() {
        let mixed = CMat::identity(4).scale_re(0.25);
        let correlated = &mixed + &kron(&pauli::x(), &pauli::x()).scale_re(0.1);
        let mut rng = rng_from_seed(3);
        let members = vec![
            BipartiteState::new(random_density(4, &mut rng).into_mat(), 2, 2).unwrap(),
            BipartiteState::new(mixed, 2, 2).unwrap(),
            BipartiteState::new(correlated, 2, 2).unwrap(),
        ];
        let report = audit_family(&AssignmentFamily::new(members).unwrap(), 1e-10).unwrap();
        assert!(!report.injective);
        assert_eq!(report.colliding_pairs, vec![(1, 2)]);
    }

    #[test]
    fn span_dim_ignores_member_order() {
        let mut rng = rng_from_seed(4);
        let members: Vec<_> =
            (0..5).map(|_| BipartiteState::new(random_density(6, &mut rng).into_mat(), 3, 2).unwrap()).collect();
        let a = audit_family(&AssignmentFamily::new(members.clone()).unwrap(), 1e-10).unwrap();
        let mut rev = members;
        rev.reverse();
        let b = audit_family(&AssignmentFamily::new(rev).unwrap(), 1e-10).unwrap();
        assert_eq!(a.span_dim, 5);
        assert_eq!((a.span_dim, a.affine_dim), (b.span_dim, b.affine_dim));
    }

    #[test]
    fn empty_family_rejected() {
        assert!(matches!(AssignmentFamily::new(vec![]), Err(Error::EmptyFamily)));
    }
}
