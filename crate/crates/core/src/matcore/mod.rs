//! Dense complex matrices and the vectorization toolkit.
//!
//! [`CMatrix`] is the carrier for basis matrices, channels and codewords.
//! Vectorization is column-major: `vec_c` stacks column 1, then column 2,
//! and so on; `vec_r` interleaves real and imaginary parts.

pub mod exact;

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance for structural predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrixRepr", into = "CMatrixRepr")]
pub struct CMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct CMatrixRepr {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<CMatrixRepr> for CMatrix {
    type Error = Error;

    fn try_from(repr: CMatrixRepr) -> Result<Self> {
        let entries = repr.entries.iter().map(|&[re, im]| c(re, im)).collect();
        CMatrix::new(repr.n_rows, repr.n_cols, entries)
    }
}

impl From<CMatrix> for CMatrixRepr {
    fn from(m: CMatrix) -> Self {
        CMatrixRepr {
            n_rows: m.n_rows,
            n_cols: m.n_cols,
            entries: m.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl CMatrix {
    pub fn new(n_rows: usize, n_cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {n_rows}x{n_cols}"
            )));
        }
        if entries.len() != n_rows * n_cols {
            return Err(Error::DimensionMismatch(format!(
                "{n_rows}x{n_cols} matrix needs {} entries, got {}",
                n_rows * n_cols,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(CMatrix { n_rows, n_cols, entries })
    }

    /// Build from rows of complex entries. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n_cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged rows");
        let entries = rows.iter().flatten().copied().collect();
        CMatrix::new(rows.len(), n_cols, entries).expect("finite entries")
    }

    /// Build from rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| c(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CMatrix { n_rows, n_cols, entries: vec![Complex64::default(); n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = c(1.0, 0.0);
        }
        m
    }

    /// The matrix unit with a one in slot `(row, col)`.
    pub fn unit(n: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(row, col)] = c(1.0, 0.0);
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.n_rows)
        } else {
            Err(Error::NotSquare { rows: self.n_rows, cols: self.n_cols })
        }
    }

    fn ensure_same_shape(&self, other: &CMatrix) -> Result<()> {
        if self.n_rows == other.n_rows && self.n_cols == other.n_cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )))
        }
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.n_cols, self.n_rows);
        for r in 0..self.n_rows {
            for k in 0..self.n_cols {
                out[(k, r)] = self[(r, k)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.n_cols, self.n_rows);
        for r in 0..self.n_rows {
            for k in 0..self.n_cols {
                out[(k, r)] = self[(r, k)];
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> CMatrix {
        self.scale(c(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n_rows.min(self.n_cols)).map(|k| self[(k, k)]).sum()
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut out = CMatrix::zeros(self.n_rows, other.n_cols);
        for r in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self[(r, k)];
                if a == Complex64::default() {
                    continue;
                }
                for col in 0..other.n_cols {
                    out[(r, col)] += a * other[(k, col)];
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.ensure_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.ensure_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> CMatrix {
        CMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Frobenius distance to `other`.
    pub fn distance(&self, other: &CMatrix) -> Result<f64> {
        Ok(self.try_sub(other)?.frobenius_norm())
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.distance(other).map(|d| d <= tol).unwrap_or(false)
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.n_rows, self.n_cols, &self.entries)
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Result<CMatrix> {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for k in 0..m.ncols() {
                entries.push(m[(r, k)]);
            }
        }
        CMatrix::new(m.nrows(), m.ncols(), entries)
    }

    /// Inverse, or `None` when the matrix fails [`is_invertible`].
    pub fn inverse(&self) -> Option<CMatrix> {
        if !self.is_square() || !is_invertible(self, DEFAULT_TOL) {
            return None;
        }
        self.to_nalgebra().try_inverse().and_then(|m| CMatrix::from_nalgebra(&m).ok())
    }

    pub fn determinant(&self) -> Result<Complex64> {
        self.ensure_square()?;
        Ok(self.to_nalgebra().determinant())
    }

    pub fn min_singular_value(&self) -> f64 {
        self.to_nalgebra().singular_values().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Hermitian part `(A + A*)/2`.
    pub fn hermitian_part(&self) -> CMatrix {
        self.zip_with(&self.adjoint(), |a, b| (a + b) * 0.5)
    }

    /// Skew-Hermitian part `(A - A*)/2`.
    pub fn skew_hermitian_part(&self) -> CMatrix {
        self.zip_with(&self.adjoint(), |a, b| (a - b) * 0.5)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, k): (usize, usize)) -> &Complex64 {
        assert!(r < self.n_rows && k < self.n_cols, "index out of bounds");
        &self.entries[r * self.n_cols + k]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, k): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.n_rows && k < self.n_cols, "index out of bounds");
        &mut self.entries[r * self.n_cols + k]
    }
}

// Operator forms panic on shape mismatch; use the `try_*` methods for
// fallible arithmetic.
impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("shape mismatch in matrix product")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("shape mismatch in matrix sum")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("shape mismatch in matrix difference")
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

/// Real vector, e.g. `Vec_R` images and real symbol vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RVector(pub Vec<f64>);

impl RVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &RVector) -> f64 {
        assert_eq!(self.len(), other.len(), "length mismatch in dot product");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// Column-major stacking of a square matrix.
pub fn vec_c(a: &CMatrix) -> Result<Vec<Complex64>> {
    let n = a.ensure_square()?;
    let mut out = Vec::with_capacity(n * n);
    for col in 0..n {
        for row in 0..n {
            out.push(a[(row, col)]);
        }
    }
    Ok(out)
}

/// Interleave real and imaginary parts: `(Re v1, Im v1, ..., Re vn, Im vn)`.
pub fn vec_r(v: &[Complex64]) -> RVector {
    RVector(v.iter().flat_map(|z| [z.re, z.im]).collect())
}

pub fn vec_r_mat(a: &CMatrix) -> Result<RVector> {
    Ok(vec_r(&vec_c(a)?))
}

/// `Tr(A B*)`, computed from the explicit matrix product.
pub fn herm_inner(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    a.ensure_square()?;
    b.ensure_square()?;
    a.ensure_same_shape(b)?;
    Ok(a.matmul(&b.adjoint())?.trace())
}

/// Checks `Vec_R(A) . Vec_R(B) == Re Tr(A B*)` within `tol`.
pub fn real_dot_identity_check(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<bool> {
    let rhs = herm_inner(a, b)?.re;
    let lhs = vec_r_mat(a)?.dot(&vec_r_mat(b)?);
    Ok((lhs - rhs).abs() <= tol)
}

fn structural_threshold(a: &CMatrix, tol: f64) -> f64 {
    tol * a.frobenius_norm().max(1.0)
}

pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    a.is_square() && (&a.adjoint() - a).frobenius_norm() <= structural_threshold(a, tol)
}

pub fn is_skew_hermitian(a: &CMatrix, tol: f64) -> bool {
    a.is_square() && (&a.adjoint() + a).frobenius_norm() <= structural_threshold(a, tol)
}

/// Smallest singular value strictly above `tol * ||A||_F`.
pub fn is_invertible(a: &CMatrix, tol: f64) -> bool {
    if !a.is_square() {
        return false;
    }
    let norm = a.frobenius_norm();
    norm > 0.0 && a.min_singular_value() > tol * norm
}

pub fn kronecker(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (rows, cols) = (a.n_rows * b.n_rows, a.n_cols * b.n_cols);
    let mut out = CMatrix::zeros(rows, cols);
    for ar in 0..a.n_rows {
        for ac in 0..a.n_cols {
            let s = a[(ar, ac)];
            for br in 0..b.n_rows {
                for bc in 0..b.n_cols {
                    out[(ar * b.n_rows + br, ac * b.n_cols + bc)] = s * b[(br, bc)];
                }
            }
        }
    }
    out
}

/// Anticommutator `AB + BA`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.matmul(b)?.try_add(&b.matmul(a)?)
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
        let entries = (0..rows * cols)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        CMatrix::new(rows, cols, entries).unwrap()
    }

    pub fn seeded_pairs(seed: u64, count: usize, n: usize) -> Vec<(CMatrix, CMatrix)> {
        let mut rng = rng_from_seed(seed);
        (0..count).map(|_| (random_matrix(&mut rng, n, n), random_matrix(&mut rng, n, n))).collect()
    }
}
