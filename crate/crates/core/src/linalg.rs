//! Dense exact matrices over GF(p), together with lines and subspaces in
//! canonical form.
//!
//! Coordinate vectors are plain `Vec<u64>` of reduced residues; the field is
//! carried by the matrix, line or subspace they belong to. Rows and columns
//! are indexed from 0.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix(p={}) {:?}", self.field.p(), self.to_rows())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// Reduces `rows` in place to reduced row echelon form, pivoting on the first
/// nonzero entry of each column. Zero rows are moved to the bottom. Returns
/// the pivot columns.
pub(crate) fn row_reduce(field: PrimeField, rows: &mut [Vec<u64>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(factor, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry.
    pub fn from_i64_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let reduced: Vec<Vec<u64>> =
            rows.iter().map(|r| r.iter().map(|&x| field.reduce(x)).collect()).collect();
        Self::from_rows(field, reduced)
    }

    /// Builds a matrix from rows of residues; entries are reduced mod p.
    pub fn from_rows(field: PrimeField, rows: Vec<Vec<u64>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::ShapeMismatch("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let p = field.p();
        let data = rows.into_iter().flatten().map(|x| x % p).collect();
        Ok(Matrix { field, rows: n_rows, cols: n_cols, data })
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: PrimeField, columns: &[Vec<u64>]) -> Result<Self> {
        let n_cols = columns.len();
        let n_rows = columns.first().map_or(0, Vec::len);
        if n_rows == 0 || n_cols == 0 || columns.iter().any(|c| c.len() != n_rows) {
            return Err(Error::ShapeMismatch("bad column set".into()));
        }
        let mut m = Self::zeros(field, n_rows, n_cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m.data[i * n_cols + j] = x % field.p();
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Fp {
        self.field.from_residue(self.get(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} applied to length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(0, |acc, (&a, &x)| f.add(acc, f.mul(a, x)))
            })
            .collect())
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(u64, u64) -> u64) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("elementwise operands differ in shape".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        Ok(self.with_data(data))
    }

    fn with_data(&self, data: Vec<u64>) -> Matrix {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        let f = self.field;
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        let f = self.field;
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, s: Fp) -> Matrix {
        let f = self.field;
        assert_eq!(f, s.field(), "scalar from a different field");
        let data = self.data.iter().map(|&a| f.mul(a, s.value())).collect();
        self.with_data(data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        row_reduce(self.field, &mut rows, self.cols).len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Canonical basis of `{v : Mv = 0}`.
    pub fn kernel(&self) -> Subspace {
        let f = self.field;
        let mut rows = self.to_rows();
        let pivots = row_reduce(f, &mut rows, self.cols);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(rows[r][free]);
            }
            basis.push(v);
        }
        Subspace::from_vectors(f, self.cols, &basis)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let f = self.field;
        let mut rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| u64::from(i == j)));
                r
            })
            .collect();
        let pivots = row_reduce(f, &mut rows, n);
        if pivots.len() < n {
            return Err(Error::Singular);
        }
        let inv_rows = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_rows(f, inv_rows)
    }

    /// The matrix representing `self` with respect to `basis`:
    /// `P^{-1} X P` where `P` has the basis vectors as columns.
    pub fn in_basis(&self, basis: &[Vec<u64>]) -> Result<Matrix> {
        let p = Matrix::from_columns(self.field, basis)?;
        let p_inv = p.inverse().map_err(|_| Error::NotABasis)?;
        p_inv.mat_mul(&self.mat_mul(&p)?)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.mat_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

pub fn mat_mul(m: &Matrix, n: &Matrix) -> Result<Matrix> {
    m.mat_mul(n)
}

pub fn mat_apply(m: &Matrix, v: &[u64]) -> Result<Vec<u64>> {
    m.apply(v)
}

pub fn kernel(m: &Matrix) -> Subspace {
    m.kernel()
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    m.inverse()
}

/// A one-dimensional subspace, stored through a spanning vector whose first
/// nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    field: PrimeField,
    span: Vec<u64>,
}

impl Serialize for Line {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.span.serialize(s)
    }
}

/// Scales `v` so its first nonzero entry is 1; `None` for the zero vector.
pub(crate) fn normalize(field: PrimeField, v: &[u64]) -> Option<Vec<u64>> {
    let lead = *v.iter().find(|&&x| x != 0)?;
    let inv = field.inv(lead).expect("nonzero");
    Some(v.iter().map(|&x| field.mul(x, inv)).collect())
}

impl Line {
    pub fn new(field: PrimeField, v: &[u64]) -> Result<Line> {
        let v: Vec<u64> = v.iter().map(|x| x % field.p()).collect();
        let span = normalize(field, &v).ok_or(Error::ZeroVector)?;
        Ok(Line { field, span })
    }

    /// The line spanned by the `i`-th standard coordinate vector.
    pub fn coordinate(field: PrimeField, n: usize, i: usize) -> Line {
        let mut span = vec![0; n];
        span[i] = 1;
        Line { field, span }
    }

    pub fn span(&self) -> &[u64] {
        &self.span
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim_ambient(&self) -> usize {
        self.span.len()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        match normalize(self.field, v) {
            None => true,
            Some(n) => n == self.span,
        }
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::from_vectors(self.field, self.span.len(), std::slice::from_ref(&self.span))
    }
}

/// `X·L` as a line, or `None` when `X` annihilates `L`.
pub fn line_image(x: &Matrix, l: &Line) -> Option<Line> {
    let image = x.apply(&l.span).expect("ambient dimensions agree");
    normalize(l.field, &image).map(|span| Line { field: l.field, span })
}

/// The eigenvalue of `X` on the invariant line `L`, checked at every coordinate.
pub fn eigenvalue_on_line(x: &Matrix, l: &Line) -> Result<Fp> {
    let f = l.field;
    let image = x.apply(&l.span)?;
    let pivot = l.span.iter().position(|&c| c != 0).expect("lines are nonzero");
    // span[pivot] == 1, so the ratio is just the image coordinate.
    let lambda = image[pivot];
    let proportional =
        image.iter().zip(&l.span).all(|(&y, &s)| y == f.mul(lambda, s));
    if !proportional {
        return Err(Error::NotInvariant);
    }
    Ok(f.from_residue(lambda))
}

/// A subspace held as the nonzero rows of its reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    basis: Vec<Vec<u64>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

impl Subspace {
    pub fn from_vectors(field: PrimeField, ambient: usize, vectors: &[Vec<u64>]) -> Subspace {
        let mut rows: Vec<Vec<u64>> = vectors
            .iter()
            .map(|v| {
                assert_eq!(v.len(), ambient, "vector length differs from ambient dimension");
                v.iter().map(|x| x % field.p()).collect()
            })
            .collect();
        let rank = row_reduce(field, &mut rows, ambient).len();
        rows.truncate(rank);
        Subspace { field, ambient, basis: rows }
    }

    pub fn zero(field: PrimeField, ambient: usize) -> Subspace {
        Subspace { field, ambient, basis: Vec::new() }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Subspace {
        let id = Matrix::identity(field, ambient);
        Subspace { field, ambient, basis: id.to_rows() }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        row_reduce(self.field, &mut rows, self.ambient).len() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let vectors: Vec<Vec<u64>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::from_vectors(self.field, self.ambient, &vectors)
    }

    /// `X·S`.
    pub fn image(&self, x: &Matrix) -> Subspace {
        let vectors: Vec<Vec<u64>> =
            self.basis.iter().map(|v| x.apply(v).expect("ambient dimensions agree")).collect();
        Subspace::from_vectors(self.field, self.ambient, &vectors)
    }

    /// Zassenhaus intersection: reduce the rows `[u | u]` and `[w | 0]`; the
    /// rows whose left half vanishes span the intersection in their right half.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let n = self.ambient;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for u in &self.basis {
            rows.push(u.iter().chain(u).copied().collect());
        }
        for w in &other.basis {
            rows.push(w.iter().copied().chain(std::iter::repeat_n(0, n)).collect());
        }
        let rank = row_reduce(self.field, &mut rows, 2 * n).len();
        let vectors: Vec<Vec<u64>> = rows[..rank]
            .iter()
            .filter(|r| r[..n].iter().all(|&x| x == 0))
            .map(|r| r[n..].to_vec())
            .collect();
        Subspace::from_vectors(self.field, n, &vectors)
    }

    /// The single spanning line of a one-dimensional subspace.
    pub fn as_line(&self) -> Option<Line> {
        if self.dim() != 1 {
            return None;
        }
        Line::new(self.field, &self.basis[0]).ok()
    }
}

pub fn subspace_intersect(s: &Subspace, s2: &Subspace) -> Subspace {
    s.intersect(s2)
}

/// The transition matrix `T` from `from_basis` to `to_basis`, i.e. the matrix
/// with `to_basis[j] = Σ_i T[i][j] · from_basis[i]`.
///
/// With this direction, for any map `X` we have `[X]_from · T = T · [X]_to`.
pub fn transition_matrix(
    field: PrimeField,
    from_basis: &[Vec<u64>],
    to_basis: &[Vec<u64>],
) -> Result<Matrix> {
    if from_basis.len() != to_basis.len() {
        return Err(Error::NotABasis);
    }
    let p_from = Matrix::from_columns(field, from_basis).map_err(|_| Error::NotABasis)?;
    let p_to = Matrix::from_columns(field, to_basis).map_err(|_| Error::NotABasis)?;
    if !p_from.is_square() || !p_to.is_invertible() {
        return Err(Error::NotABasis);
    }
    let inv = p_from.inverse().map_err(|_| Error::NotABasis)?;
    inv.mat_mul(&p_to)
}
