use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |h - h^dag| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |u^dag u - 1| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("state is not diagonal in the given basis (max off-diagonal {offdiag:.3e})")]
    NotDiagonalInBasis { offdiag: f64 },

    #[error("system marginal is not pure (largest eigenvalue {largest:.12})")]
    NotPureMarginal { largest: f64 },

    #[error("product-form check failed (residual {residual:.3e})")]
    FactorizationResidual { residual: f64 },

    #[error("assignment family is empty")]
    EmptyFamily,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no ill-definedness witness found (best gain {best:.3e}, needed {needed:.3e})")]
    WitnessNotFound { best: f64, needed: f64 },

    #[error("family is not injective: {} colliding pair(s)", pairs.len())]
    NotInjective { pairs: Vec<(usize, usize)> },

    #[error("marginals span {span_dim} of {required} dimensions; linear extension is not fixed")]
    Underdetermined { span_dim: usize, required: usize },

    #[error("images are inconsistent with a linear map (fit residual {residual:.3e})")]
    InconsistentImages { residual: f64 },

    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCP { min_eigenvalue: f64 },

    #[error("could not construct a positive family: {0}")]
    ConstructionFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
