//! Upper-triangular Toeplitz matrices, the reversal matrix `Z`, the
//! anti-diagonal transpose, and subdiagonal matrices `S_{φ_1,…,φ_d}`.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::linalg::Matrix;

/// Parameters `α_0, …, α_d` of an upper-triangular Toeplitz matrix with
/// `(i, j)`-entry `α_{j-i}`. Indices past `d` read as zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToeplitzParams {
    alpha: Vec<Fp>,
}

impl Serialize for ToeplitzParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.alpha.serialize(s)
    }
}

impl ToeplitzParams {
    pub fn new(alpha: Vec<Fp>) -> Result<ToeplitzParams> {
        let Some(first) = alpha.first() else {
            return Err(Error::ShapeMismatch("Toeplitz parameters need at least α_0".into()));
        };
        let f = first.field();
        if let Some(bad) = alpha.iter().find(|a| a.field() != f) {
            return Err(Error::FieldMismatch(f.p(), bad.field().p()));
        }
        Ok(ToeplitzParams { alpha })
    }

    pub fn from_i64(field: PrimeField, alpha: &[i64]) -> Result<ToeplitzParams> {
        Self::new(alpha.iter().map(|&a| field.elem(a)).collect())
    }

    pub fn field(&self) -> PrimeField {
        self.alpha[0].field()
    }

    pub fn d(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn get(&self, i: usize) -> Fp {
        self.alpha.get(i).copied().unwrap_or_else(|| self.field().zero())
    }

    pub fn as_slice(&self) -> &[Fp] {
        &self.alpha
    }

    pub fn is_invertible(&self) -> bool {
        !self.alpha[0].is_zero()
    }
}

pub fn toeplitz_matrix(params: &ToeplitzParams) -> Matrix {
    let n = params.d() + 1;
    let mut m = Matrix::zeros(params.field(), n, n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, params.get(j - i).value());
        }
    }
    m
}

/// Reads the parameters back off an upper-triangular Toeplitz matrix.
pub fn toeplitz_params(m: &Matrix) -> Result<ToeplitzParams> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("Toeplitz matrices are square".into()));
    }
    let n = m.n_rows();
    for i in 0..n {
        for j in 0..n {
            let expected = if j >= i { m.get(0, j - i) } else { 0 };
            if m.get(i, j) != expected {
                return Err(Error::NotToeplitz(i, j));
            }
        }
    }
    ToeplitzParams::new((0..n).map(|k| m.entry(0, k)).collect())
}

/// `Z`, with `(i, j)`-entry `δ_{i+j,d}`.
pub fn reversal_matrix(field: PrimeField, n: usize) -> Matrix {
    let mut z = Matrix::zeros(field, n, n);
    for i in 0..n {
        z.set(i, n - 1 - i, 1);
    }
    z
}

/// The matrix with `(i, j)`-entry `M_{d-j, d-i}`.
pub fn anti_diagonal_transpose(m: &Matrix) -> Matrix {
    assert!(m.is_square(), "anti-diagonal transpose of a non-square matrix");
    let n = m.n_rows();
    let mut out = Matrix::zeros(m.field(), n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, m.get(n - 1 - j, n - 1 - i));
        }
    }
    debug_assert_eq!(out, anti_diagonal_transpose_via_reversal(m));
    out
}

/// `Z Mᵀ Z`.
pub fn anti_diagonal_transpose_via_reversal(m: &Matrix) -> Matrix {
    let z = reversal_matrix(m.field(), m.n_rows());
    &(&z * &m.transpose()) * &z
}

/// `S_{φ_1,…,φ_d}`: `(i+1, i)`-entry `φ_{i+1}`, zero elsewhere.
pub fn subdiagonal_matrix(field: PrimeField, phi: &[Fp]) -> Matrix {
    let n = phi.len() + 1;
    let mut s = Matrix::zeros(field, n, n);
    for (i, x) in phi.iter().enumerate() {
        assert_eq!(x.field(), field, "φ from a different field");
        s.set(i + 1, i, x.value());
    }
    s
}

/// The shift `N` with `N e_i = e_{i-1}`: ones on the superdiagonal.
pub fn shift_matrix(field: PrimeField, n: usize) -> Matrix {
    let mut s = Matrix::zeros(field, n, n);
    for i in 1..n {
        s.set(i - 1, i, 1);
    }
    s
}
