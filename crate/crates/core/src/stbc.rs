//! Linear space-time block codes `X = sum_i s_i A_i` over real symbols.
//!
//! Real symbols are ordered `(Re x1, Im x1, Re x2, Im x2, ...)` where the
//! `x_k` are the complex information symbols.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{c, is_invertible, vec_r_mat, CMatrix, RVector, DEFAULT_TOL, I};

/// Real-basis description of a linear code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CodeBasisRepr", into = "CodeBasisRepr")]
pub struct CodeBasis {
    name: Option<String>,
    n: usize,
    l: usize,
    matrices: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct CodeBasisRepr {
    #[serde(default)]
    name: Option<String>,
    n: usize,
    l: usize,
    matrices: Vec<CMatrix>,
}

impl TryFrom<CodeBasisRepr> for CodeBasis {
    type Error = Error;

    fn try_from(r: CodeBasisRepr) -> Result<Self> {
        CodeBasis::new(r.name, r.n, r.l, r.matrices)
    }
}

impl From<CodeBasis> for CodeBasisRepr {
    fn from(b: CodeBasis) -> Self {
        CodeBasisRepr { name: b.name, n: b.n, l: b.l, matrices: b.matrices }
    }
}

impl CodeBasis {
    /// Validates shape, invertibility of every `A_i` and real-linear
    /// independence of the family.
    pub fn new(name: Option<String>, n: usize, l: usize, matrices: Vec<CMatrix>) -> Result<Self> {
        if n == 0 || l == 0 {
            return Err(Error::InvalidBasis("n and l must be positive".into()));
        }
        if l > n * n {
            return Err(Error::InvalidBasis(format!("l = {l} exceeds n^2 = {}", n * n)));
        }
        if matrices.len() != 2 * l {
            return Err(Error::InvalidBasis(format!(
                "expected 2l = {} matrices, got {}",
                2 * l,
                matrices.len()
            )));
        }
        for (idx, m) in matrices.iter().enumerate() {
            if m.n_rows() != n || m.n_cols() != n {
                return Err(Error::InvalidBasis(format!(
                    "matrix {} is {}x{}, expected {n}x{n}",
                    idx + 1,
                    m.n_rows(),
                    m.n_cols()
                )));
            }
            if !is_invertible(m, DEFAULT_TOL) {
                return Err(Error::SingularBasisMatrix { index: idx + 1 });
            }
        }
        check_independence(&matrices)?;
        Ok(CodeBasis { name, n, l, matrices })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Number of real symbols, `2l`.
    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn is_full_rate(&self) -> bool {
        self.l == self.n * self.n
    }
}

fn real_embedding(matrices: &[CMatrix]) -> DMatrix<f64> {
    let rows = 2 * matrices[0].n_rows() * matrices[0].n_cols();
    let mut t = DMatrix::zeros(rows, matrices.len());
    for (k, m) in matrices.iter().enumerate() {
        let v = vec_r_mat(m).expect("square");
        for (r, x) in v.0.iter().enumerate() {
            t[(r, k)] = *x;
        }
    }
    t
}

/// Numerical rank of the real `2n^2 x k` matrix whose columns are `Vec_R(A_i)`.
pub fn real_rank(matrices: &[CMatrix]) -> usize {
    if matrices.is_empty() {
        return 0;
    }
    let sv = real_embedding(matrices).singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > DEFAULT_TOL * top).count()
}

fn check_independence(matrices: &[CMatrix]) -> Result<()> {
    let expected = matrices.len();
    let rank = real_rank(matrices);
    if rank == expected {
        return Ok(());
    }
    let index = (1..=expected).find(|&k| real_rank(&matrices[..k]) < k).unwrap_or(expected);
    Err(Error::DependentBasis { rank, expected, index })
}

/// `X = sum_i s_i A_i`.
pub fn assemble(basis: &CodeBasis, s: &RVector) -> Result<CMatrix> {
    if s.len() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "symbol vector has length {}, basis has {} matrices",
            s.len(),
            basis.dim()
        )));
    }
    let mut x = CMatrix::zeros(basis.n, basis.n);
    for (si, a) in s.0.iter().zip(&basis.matrices) {
        if *si != 0.0 {
            x = &x + &a.scale_real(*si);
        }
    }
    Ok(x)
}

/// Real-basis matrices of a code that is real-linear in `l` complex symbols:
/// evaluates the codeword map at `x_k = 1` and `x_k = i` for each `k`.
pub fn real_basis_from_map(l: usize, codeword: impl Fn(&[Complex64]) -> CMatrix) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(2 * l);
    for k in 0..l {
        for unit in [c(1.0, 0.0), I] {
            let mut x = vec![c(0.0, 0.0); l];
            x[k] = unit;
            out.push(codeword(&x));
        }
    }
    out
}

/// `X(a, b) = [[a, -b*], [b, a*]]`.
pub fn alamouti_block(a: Complex64, b: Complex64) -> CMatrix {
    CMatrix::from_rows(&[vec![a, -b.conj()], vec![b, a.conj()]])
}

pub fn alamouti_code() -> CodeBasis {
    let matrices = real_basis_from_map(2, |x| alamouti_block(x[0], x[1]));
    CodeBasis::new(Some("alamouti".into()), 2, 2, matrices).expect("alamouti basis is valid")
}

/// Silver code: `X(s1, s2) + T X(z1, z2)` with `(z1, z2)^t = M (s3, s4)^t`.
pub fn silver_code() -> CodeBasis {
    let r7 = 7f64.sqrt();
    let m = [[c(1.0, 1.0) / r7, c(-1.0, 2.0) / r7], [c(1.0, 2.0) / r7, c(1.0, -1.0) / r7]];
    let t = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let matrices = real_basis_from_map(4, |x| {
        let z1 = m[0][0] * x[2] + m[0][1] * x[3];
        let z2 = m[1][0] * x[2] + m[1][1] * x[3];
        &alamouti_block(x[0], x[1]) + &(&t * &alamouti_block(z1, z2))
    });
    CodeBasis::new(Some("silver".into()), 2, 4, matrices).expect("silver basis is valid")
}

pub fn builtin(name: &str) -> Option<CodeBasis> {
    match name {
        "alamouti" => Some(alamouti_code()),
        "silver" => Some(silver_code()),
        _ => None,
    }
}

pub const BUILTIN_NAMES: [&str; 2] = ["alamouti", "silver"];

pub fn load_code(path: impl AsRef<Path>) -> Result<CodeBasis> {
    let text = fs::read_to_string(path)?;
    code_from_json(&text)
}

/// Parses a basis; invariant violations surface as their own error variants
/// rather than as JSON errors.
pub fn code_from_json(text: &str) -> Result<CodeBasis> {
    let repr: CodeBasisRepr = serde_json::from_str(text)?;
    CodeBasis::try_from(repr)
}

pub fn save_code(basis: &CodeBasis, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(basis)?;
    fs::write(path, text)?;
    Ok(())
}

/// Effective real alphabet `S`: distinct finite reals, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Constellation {
    values: Vec<f64>,
}

impl TryFrom<Vec<f64>> for Constellation {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Constellation::new(values)
    }
}

impl From<Constellation> for Vec<f64> {
    fn from(c: Constellation) -> Self {
        c.values
    }
}

impl Constellation {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidConstellation("alphabet is empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConstellation("non-finite value".into()));
        }
        values.sort_by(f64::total_cmp);
        if values.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConstellation("duplicate value".into()));
        }
        Ok(Constellation { values })
    }

    /// `q`-PAM: `{±1, ±3, ..., ±(q-1)}` for even `q`.
    pub fn pam(q: usize) -> Result<Self> {
        if q < 2 || !q.is_multiple_of(2) {
            return Err(Error::InvalidConstellation(format!("PAM size must be even and >= 2, got {q}")));
        }
        Constellation::new((0..q).map(|k| 2.0 * k as f64 - (q as f64 - 1.0)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }
}
