//! Operator bases and the real coefficient expansion of bipartite operators.

use super::cmat::{kron, CMat, C64, I};
use super::linalg::{singular_values, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Identity followed by `d^2 - 1` orthonormal traceless Hermitian matrices.
#[derive(Clone, Debug)]
pub struct HermBasis {
    dim: usize,
    elements: Vec<CMat>,
}

impl HermBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `trace(lambda_u^2)`: `d` for the identity, 1 otherwise.
    pub fn norm_sq(&self, u: usize) -> f64 {
        if u == 0 {
            self.dim as f64
        } else {
            1.0
        }
    }

    /// Real coordinates of a Hermitian matrix: `x_u = trace(m lambda_u) / n_u`.
    pub fn coords(&self, m: &CMat) -> Vec<f64> {
        self.elements.iter().enumerate().map(|(u, l)| m.trace_product(l).re / self.norm_sq(u)).collect()
    }

    pub fn from_coords(&self, x: &[f64]) -> CMat {
        let mut out = CMat::zeros(self.dim, self.dim);
        for (l, &c) in self.elements.iter().zip(x) {
            if c != 0.0 {
                out = &out + &l.scale_re(c);
            }
        }
        out
    }
}

/// Generalized Gell-Mann basis normalized to `trace(lambda_u lambda_v) =
/// delta_uv` for `u, v >= 1`. Order: identity, symmetric pairs, antisymmetric
/// pairs (both in `(j, k)` lexicographic order, `j < k`), then diagonals.
pub fn gell_mann_basis(d: usize) -> HermBasis {
    assert!(d >= 2, "Gell-Mann basis needs d >= 2");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut elements = vec![CMat::identity(d)];
    for j in 0..d {
        for k in j + 1..d {
            let mut m = CMat::zeros(d, d);
            m[(j, k)] = C64::new(s, 0.0);
            m[(k, j)] = C64::new(s, 0.0);
            elements.push(m);
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = CMat::zeros(d, d);
            m[(j, k)] = -I * s;
            m[(k, j)] = I * s;
            elements.push(m);
        }
    }
    for l in 1..d {
        let lf = l as f64;
        let norm = 1.0 / (lf * (lf + 1.0)).sqrt();
        let mut diag = vec![norm; l];
        diag.push(-lf * norm);
        diag.resize(d, 0.0);
        elements.push(CMat::diag_real(&diag));
    }
    HermBasis { dim: d, elements }
}

/// Real coefficients `C[u][v]` of a bipartite Hermitian operator in the
/// product basis `lambda_u (x) gamma_v`, shape `d_S^2 x d_B^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CoeffMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.cols + v]
    }

    pub fn set(&mut self, u: usize, v: usize, x: f64) {
        self.data[u * self.cols + v] = x;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Expansion with `C_uv = trace(m (lambda_u (x) gamma_v)) / (n_u n_v)`.
pub fn expand_coeffs(m: &CMat, d_s: usize, d_b: usize) -> Result<CoeffMatrix> {
    let n = d_s * d_b;
    if !m.is_square() || m.rows() != n {
        return Err(Error::DimensionMismatch(format!("expected {n}x{n}, got {}x{}", m.rows(), m.cols())));
    }
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let bs = gell_mann_basis(d_s);
    let bb = gell_mann_basis(d_b);
    let mut c = CoeffMatrix::zeros(bs.len(), bb.len());
    for (u, l) in bs.elements().iter().enumerate() {
        for (v, g) in bb.elements().iter().enumerate() {
            let t = m.trace_product(&kron(l, g));
            c.set(u, v, t.re / (bs.norm_sq(u) * bb.norm_sq(v)));
        }
    }
    Ok(c)
}

/// `sum_uv C_uv lambda_u (x) gamma_v`
pub fn resum_coeffs(c: &CoeffMatrix, d_s: usize, d_b: usize) -> CMat {
    let bs = gell_mann_basis(d_s);
    let bb = gell_mann_basis(d_b);
    assert_eq!((c.rows(), c.cols()), (bs.len(), bb.len()), "coefficient shape");
    let mut out = CMat::zeros(d_s * d_b, d_s * d_b);
    for (u, l) in bs.elements().iter().enumerate() {
        for (v, g) in bb.elements().iter().enumerate() {
            let x = c.get(u, v);
            if x != 0.0 {
                out = &out + &kron(l, g).scale_re(x);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistKind {
    /// Sum of singular values of the difference.
    Trace,
    Frobenius,
}

pub fn dist(a: &CMat, b: &CMat, kind: DistKind) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let diff = a - b;
    match kind {
        DistKind::Frobenius => Ok(diff.frobenius_norm()),
        DistKind::Trace => {
            if !diff.is_square() {
                return Err(Error::DimensionMismatch("trace norm of a non-square difference".into()));
            }
            Ok(singular_values(&diff).iter().sum())
        }
    }
}
