//! Exact matrices over Gaussian integers and rationals.
//!
//! The explicit constructions have small integer or Gaussian-integer entries,
//! so their algebraic relations can be checked with zero tolerance here.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::{c, CMatrix};

pub type GaussInt = Complex<i64>;
pub type Rational = Ratio<i64>;
pub type GaussMatrix = ExactMatrix<GaussInt>;
pub type RationalMatrix = ExactMatrix<Rational>;

/// Ring elements with an involution (complex conjugation, or the identity).
pub trait Conj {
    fn conj(&self) -> Self;
}

impl Conj for GaussInt {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

impl Conj for Rational {
    fn conj(&self) -> Self {
        *self
    }
}

pub trait Scalar:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Conj
{
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Zero + One + Neg<Output = T> + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Conj
{
}

/// Square-or-rectangular matrix with exact entries, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> ExactMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        ExactMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, k: usize) -> &T {
        &self.data[r * self.cols + k]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for k in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, k).clone());
            }
        }
        ExactMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().map(Conj::conj)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in exact product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for col in 0..other.cols {
                    let idx = r * other.cols + col;
                    out.data[idx] = out.data[idx].clone() + a.clone() * other.get(k, col).clone();
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn kronecker(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                for br in 0..other.rows {
                    for bc in 0..other.cols {
                        let idx = (ar * other.rows + br) * out.cols + ac * other.cols + bc;
                        out.data[idx] = self.get(ar, ac).clone() * other.get(br, bc).clone();
                    }
                }
            }
        }
        out
    }

    /// Kronecker product of a sequence; the empty product is `I_1`.
    pub fn kronecker_all<'a>(factors: impl IntoIterator<Item = &'a Self>) -> Self
    where
        T: 'a,
    {
        factors.into_iter().fold(Self::identity(1), |acc, m| acc.kronecker(m))
    }

    /// Ordered product of square matrices of size `n`; the empty product is `I_n`.
    pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a Self>) -> Self
    where
        T: 'a,
    {
        factors.into_iter().fold(Self::identity(n), |acc, m| acc.mul(m))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn anticommutes_with(&self, other: &Self) -> bool {
        self.mul(other).add(&other.mul(self)).is_zero()
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    pub fn is_skew_hermitian(&self) -> bool {
        self.adjoint() == self.neg()
    }

    pub fn is_symmetric(&self) -> bool {
        self.transpose() == *self
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.transpose() == self.neg()
    }

    /// `A B* + B A* = 0`, exactly.
    pub fn mutually_orthogonal(&self, other: &Self) -> bool {
        self.mul(&other.adjoint()).add(&other.mul(&self.adjoint())).is_zero()
    }

    pub fn is_unitary(&self) -> bool {
        self.mul(&self.adjoint()).is_identity()
    }

    /// `A^2 = c I` for the given scalar.
    pub fn squares_to(&self, s: &T) -> bool {
        self.mul(self) == Self::identity(self.rows).scale(s)
    }
}

impl GaussMatrix {
    pub fn to_cmatrix(&self) -> CMatrix {
        let entries = self.data.iter().map(|z| c(z.re as f64, z.im as f64)).collect();
        CMatrix::new(self.rows, self.cols, entries).expect("integer entries are finite")
    }

    /// Reads `denominator * A` as a Gaussian-integer matrix, if every scaled
    /// entry is an exact integer.
    pub fn from_cmatrix(m: &CMatrix, denominator: i64) -> Option<GaussMatrix> {
        let d = denominator as f64;
        let mut data = Vec::with_capacity(m.entries().len());
        for z in m.entries() {
            let (re, im) = (z.re * d, z.im * d);
            if re.fract() != 0.0 || im.fract() != 0.0 || re.abs() > 2f64.powi(52) || im.abs() > 2f64.powi(52) {
                return None;
            }
            data.push(Complex::new(re as i64, im as i64));
        }
        Some(ExactMatrix { rows: m.n_rows(), cols: m.n_cols(), data })
    }

    /// Multiply every entry by `i`.
    pub fn times_i(&self) -> Self {
        self.scale(&Complex::new(0, 1))
    }
}

impl RationalMatrix {
    /// The matrix with integer entries, as rationals.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(x)).collect()).collect())
    }
}

/// Rank of a family of rational vectors, by exact Gaussian elimination.
pub fn rational_rank(vectors: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col] / pivot_row[col];
                for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= factor * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussInt {
        Complex::new(re, im)
    }

    #[test]
    fn exact_predicates_on_small_matrices() {
        let rot = GaussMatrix::from_rows(vec![vec![g(0, 0), g(-1, 0)], vec![g(1, 0), g(0, 0)]]);
        assert!(rot.is_skew_hermitian());
        assert!(rot.is_unitary());
        assert!(rot.squares_to(&g(-1, 0)));
        let id = GaussMatrix::identity(2);
        assert!(id.mutually_orthogonal(&rot));
        assert!(!id.mutually_orthogonal(&id));
        let diag_i = GaussMatrix::from_rows(vec![vec![g(0, 1), g(0, 0)], vec![g(0, 0), g(0, -1)]]);
        assert!(diag_i.anticommutes_with(&rot));
        assert_eq!(diag_i.to_cmatrix()[(1, 1)], c(0.0, -1.0));
    }

    #[test]
    fn scaled_float_matrix_reads_back_exactly() {
        let m = CMatrix::from_real_rows(&[&[0.5, -1.5], &[1.0, 0.0]]);
        let e = GaussMatrix::from_cmatrix(&m, 2).unwrap();
        assert_eq!(*e.get(0, 1), g(-3, 0));
        assert!(GaussMatrix::from_cmatrix(&m, 1).is_none());
    }

    #[test]
    fn empty_kronecker_and_product_are_identities() {
        let none: Vec<GaussMatrix> = Vec::new();
        assert!(GaussMatrix::kronecker_all(&none).is_identity());
        assert_eq!(GaussMatrix::product(4, &none), GaussMatrix::identity(4));
    }

    #[test]
    fn rational_rank_detects_dependence() {
        let r = |x: i64| Ratio::from_integer(x);
        assert_eq!(rational_rank(&[vec![r(1), r(2)], vec![r(2), r(4)]]), 1);
        assert_eq!(rational_rank(&[vec![r(1), r(2)], vec![r(0), r(3)]]), 2);
    }
}
