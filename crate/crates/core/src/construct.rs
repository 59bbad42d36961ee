//! Explicit anticommuting and mutually orthogonal families, and the numeric
//! bounds they saturate.
//!
//! All constructions are built from `H_1 = diag(1, -1)` and
//! `H_{-1} = [[0, -1], [1, 0]]` by Kronecker products, so entries stay in
//! `{0, ±1, ±i}` and every relation is verified exactly.

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::exact::{GaussInt, GaussMatrix, Rational, RationalMatrix};
use crate::matcore::{is_invertible, CMatrix, DEFAULT_TOL};
use crate::rng::rng_from_seed;

/// 2-adic valuation: the largest `t` with `2^t | m`.
pub fn nu2(m: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::InvalidParameter("2-adic valuation needs m >= 1".into()));
    }
    Ok(m.trailing_zeros())
}

fn g(re: i64, im: i64) -> GaussInt {
    Complex::new(re, im)
}

fn int_matrix(rows: &[[i64; 2]; 2]) -> GaussMatrix {
    GaussMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| g(x, 0)).collect()).collect())
}

/// `(H_1, H_{-1})`.
pub fn h_matrices() -> (GaussMatrix, GaussMatrix) {
    (int_matrix(&[[1, 0], [0, -1]]), int_matrix(&[[0, -1], [1, 0]]))
}

/// A family of exact matrices together with their floating-point images.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFamily {
    pub dimension: usize,
    pub exact: Vec<GaussMatrix>,
}

impl MatrixFamily {
    fn new(dimension: usize, exact: Vec<GaussMatrix>) -> Self {
        MatrixFamily { dimension, exact }
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    pub fn members(&self) -> Vec<CMatrix> {
        self.exact.iter().map(GaussMatrix::to_cmatrix).collect()
    }

    pub fn pairwise_anticommuting(&self) -> bool {
        pairwise(&self.exact, |a, b| a.anticommutes_with(b))
    }

    pub fn pairwise_mutually_orthogonal(&self) -> bool {
        pairwise(&self.exact, |a, b| a.mutually_orthogonal(b))
    }

    /// Exact when a member is unitary; otherwise falls back to the
    /// singular-value test.
    pub fn all_invertible(&self) -> bool {
        self.exact.iter().all(|m| m.is_unitary() || is_invertible(&m.to_cmatrix(), DEFAULT_TOL))
    }
}

fn pairwise(ms: &[GaussMatrix], pred: impl Fn(&GaussMatrix, &GaussMatrix) -> bool) -> bool {
    ms.iter().enumerate().all(|(i, a)| ms[i + 1..].iter().all(|b| pred(a, b)))
}

pub type AnticommutingFamily = MatrixFamily;

/// `U_1, ..., U_{2ℓ}` in dimension `2^ℓ`:
/// `U_{2p-1} = H_1^{⊗(p-1)} ⊗ H_1 H_{-1} ⊗ I_2^{⊗(ℓ-p)}` and
/// `U_{2p} = H_1^{⊗(p-1)} ⊗ H_{-1} ⊗ I_2^{⊗(ℓ-p)}`.
pub fn u_family(ell: usize) -> Result<AnticommutingFamily> {
    if ell < 1 {
        return Err(Error::InvalidParameter("u_family needs ell >= 1".into()));
    }
    Ok(u_family_unchecked(ell))
}

fn u_family_unchecked(ell: usize) -> AnticommutingFamily {
    let (h1, hm1) = h_matrices();
    let h1hm1 = h1.mul(&hm1);
    let id2 = GaussMatrix::identity(2);
    let mut members = Vec::with_capacity(2 * ell);
    for p in 1..=ell {
        for middle in [&h1hm1, &hm1] {
            let factors = std::iter::repeat_n(&h1, p - 1)
                .chain(std::iter::once(middle))
                .chain(std::iter::repeat_n(&id2, ell - p));
            members.push(GaussMatrix::kronecker_all(factors));
        }
    }
    MatrixFamily::new(1 << ell, members)
}

/// `U_1 U_2 ... U_{2ℓ}`; the identity of size `2^ℓ` for `ℓ = 0`.
fn u_product(ell: usize) -> GaussMatrix {
    let fam = u_family_unchecked(ell);
    GaussMatrix::product(1 << ell, &fam.exact)
}

/// Generators of the quaternion algebra `(a, b)` acting on itself:
/// `(I_4, e, f, ef)` with `e^2 = a`, `f^2 = b`, `fe = -ef`.
pub fn quaternion_basis_4x4(a: Rational, b: Rational) -> Result<[RationalMatrix; 4]> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidParameter("quaternion parameters must be nonzero".into()));
    }
    let z = Ratio::zero();
    let o = Ratio::one();
    let e = RationalMatrix::from_rows(vec![
        vec![z, a, z, z],
        vec![o, z, z, z],
        vec![z, z, z, a],
        vec![z, z, o, z],
    ]);
    let f = RationalMatrix::from_rows(vec![
        vec![z, z, b, z],
        vec![z, z, z, -b],
        vec![o, z, z, z],
        vec![z, -o, z, z],
    ]);
    let ef = RationalMatrix::from_rows(vec![
        vec![z, z, z, -a * b],
        vec![z, z, b, z],
        vec![z, -a, z, z],
        vec![o, z, z, z],
    ]);
    Ok([RationalMatrix::identity(4), e, f, ef])
}

/// `(i H_1, H_{-1}, i H_1 H_{-1})`: a 2x2 complex representation of the
/// generators `e, f, ef` of `(-1, -1)`.
pub fn quaternion_complex_rep() -> [GaussMatrix; 3] {
    let (h1, hm1) = h_matrices();
    let ih1 = h1.times_i();
    let ih1hm1 = ih1.mul(&hm1);
    [ih1, hm1, ih1hm1]
}

/// `2ℓ + 3` pairwise anticommuting matrices of size `2^{ℓ+1}`:
/// `U_p ⊗ I_2` and `(U_1...U_{2ℓ}) ⊗ m` for `m` in the quaternion triple.
pub fn anticommuting_family(ell: usize) -> AnticommutingFamily {
    let id2 = GaussMatrix::identity(2);
    let prod = u_product(ell);
    let mut members: Vec<GaussMatrix> = u_family_unchecked(ell).exact.iter().map(|u| u.kronecker(&id2)).collect();
    members.extend(quaternion_complex_rep().iter().map(|m| prod.kronecker(m)));
    MatrixFamily::new(1 << (ell + 1), members)
}

/// `2ℓ + 4` pairwise mutually orthogonal matrices of size `2^{ℓ+1}`: the
/// identity followed by `2ℓ + 3` skew-Hermitian, pairwise anticommuting
/// matrices. The symmetric `U_{2p-1}` are paired with `i I_2` and the
/// skew-symmetric `U_{2p}` with `I_2`, so every member is skew-Hermitian.
pub fn mutually_orthogonal_family(ell: usize) -> MatrixFamily {
    let id2 = GaussMatrix::identity(2);
    let iid2 = id2.times_i();
    let dim = 1 << (ell + 1);
    let us = u_family_unchecked(ell);
    let mut members = vec![GaussMatrix::identity(dim)];
    for pair in us.exact.chunks(2) {
        members.push(pair[0].kronecker(&iid2));
        members.push(pair[1].kronecker(&id2));
    }
    let prod = u_product(ell);
    members.extend(quaternion_complex_rep().iter().map(|m| prod.kronecker(m)));
    MatrixFamily::new(dim, members)
}

/// Hurwitz-Radon-Eckmann count `2 ν2(n) + 1`.
pub fn hre_bound(n: u64) -> Result<usize> {
    Ok(2 * nu2(n)? as usize + 1)
}

/// `2t + 1` unitary, square `-I`, pairwise anticommuting matrices of size
/// `2^t`: the `U_p` with symmetric members scaled by `i`, plus
/// `i U_1 ... U_{2t}`.
pub fn hre_family(t: usize) -> MatrixFamily {
    let us = u_family_unchecked(t);
    let mut members: Vec<GaussMatrix> =
        us.exact.iter().map(|u| if u.is_symmetric() { u.times_i() } else { u.clone() }).collect();
    members.push(u_product(t).times_i());
    let fam = MatrixFamily::new(1 << t, members);
    let minus_one = g(-1, 0);
    assert!(
        fam.pairwise_anticommuting() && fam.exact.iter().all(|m| m.is_unitary() && m.squares_to(&minus_one)),
        "hre family for t = {t} failed verification"
    );
    fam
}

/// Trusted parameters of a central simple algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlgebraParams {
    pub deg: u64,
    pub ind: u64,
    pub division: bool,
}

impl AlgebraParams {
    pub fn new(deg: u64, ind: u64, division: bool) -> Result<Self> {
        if deg == 0 || ind == 0 || !deg.is_multiple_of(ind) {
            return Err(Error::InvalidParameter(format!("index {ind} must divide degree {deg}")));
        }
        if division && ind != deg {
            return Err(Error::InvalidParameter("a division algebra has index equal to its degree".into()));
        }
        Ok(AlgebraParams { deg, ind, division })
    }

    pub fn division(deg: u64) -> Self {
        AlgebraParams { deg, ind: deg, division: true }
    }

    fn nu2_ratio(&self) -> u32 {
        (self.deg / self.ind).trailing_zeros()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Largest possible count `r` of pairwise anticommuting units with the given
/// parity: `2 ν2(deg/ind) + 2` (even) or `+ 3` (odd).
pub fn anticommute_bound(params: &AlgebraParams, parity: Parity) -> usize {
    let base = 2 * params.nu2_ratio() as usize;
    match parity {
        Parity::Even => base + 2,
        Parity::Odd => base + 3,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub context: String,
    pub n: u64,
    pub nu2_n: u32,
    pub params: Option<AlgebraParams>,
    pub r_even: usize,
    pub r_odd: usize,
    /// Bound on an even number of groups (`r_odd + 1`).
    pub g_even: usize,
    /// Bound on an odd number of groups (`r_even + 1`).
    pub g_odd: usize,
    /// `min(n^2, 2 ν2(n) + 4)`.
    pub g_general_n: usize,
    /// Overall bound on the number of groups.
    pub g_max: usize,
    pub hre: usize,
}

/// Upper bounds on the number of groups of a fast-decodable `n x n` code,
/// optionally for bases drawn from an algebra with the given parameters.
pub fn mo_group_bound(n: u64, params: Option<&AlgebraParams>) -> Result<BoundReport> {
    let nu = nu2(n)?;
    let general = ((n * n) as usize).min(2 * nu as usize + 4);
    let effective = params.copied().unwrap_or(AlgebraParams { deg: n, ind: 1, division: false });
    let r_even = anticommute_bound(&effective, Parity::Even);
    let r_odd = anticommute_bound(&effective, Parity::Odd);
    let g_even = r_odd + 1;
    let g_odd = r_even + 1;
    let mut g_max = general;
    let context = match params {
        Some(p) => {
            g_max = g_max.min(g_even.max(g_odd));
            if p.division {
                g_max = g_max.min(4);
            }
            format!("n = {n}, algebra of degree {} and index {}{}", p.deg, p.ind, if p.division { " (division)" } else { "" })
        }
        None => format!("n = {n}, unconstrained"),
    };
    Ok(BoundReport {
        context,
        n,
        nu2_n: nu,
        params: params.copied(),
        r_even,
        r_odd,
        g_even,
        g_odd,
        g_general_n: general,
        g_max,
        hre: hre_bound(n)?,
    })
}

/// Odd sizes cannot host two anticommuting invertible matrices.
pub fn check_odd_degree_rejection(n: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "no pair of invertible {n}x{n} matrices anticommutes: det(AB) = -det(BA) forces det A det B = 0 in odd size"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddDegreeReport {
    pub n: usize,
    pub candidates: usize,
    pub invertible_candidates: usize,
    pub anticommuting_found: usize,
    /// Smallest `|det(AB) + det(BA)| / |det A det B|` over invertible pairs;
    /// for odd `n` this is 2 and rules out `AB = -BA`.
    pub min_det_gap: f64,
}

/// Screens candidate pairs for anticommuting invertible matrices.
pub fn odd_degree_validator(pairs: &[(CMatrix, CMatrix)], tol: f64) -> Result<OddDegreeReport> {
    let n = pairs.first().map_or(0, |(a, _)| a.n_rows());
    let mut invertible = 0;
    let mut found = 0;
    let mut gap = f64::INFINITY;
    for (a, b) in pairs {
        if !is_invertible(a, DEFAULT_TOL) || !is_invertible(b, DEFAULT_TOL) {
            continue;
        }
        invertible += 1;
        let ab = a.matmul(b)?;
        let ba = b.matmul(a)?;
        let scale = (a.frobenius_norm() * b.frobenius_norm()).max(1.0);
        if (&ab + &ba).frobenius_norm() <= tol * scale {
            found += 1;
        }
        let dets = a.determinant()?.norm() * b.determinant()?.norm();
        let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
        // det(-BA) = (-1)^n det(BA).
        let neg_ba = ba.determinant()? * sign;
        gap = gap.min((ab.determinant()? - neg_ba).norm() / dets);
    }
    Ok(OddDegreeReport { n, candidates: pairs.len(), invertible_candidates: invertible, anticommuting_found: found, min_det_gap: gap })
}

/// Seeded random pairs with entries uniform in the unit square.
pub fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<(CMatrix, CMatrix)> {
    use rand::Rng;
    let mut rng = rng_from_seed(seed);
    let mut draw = || {
        let entries = (0..n * n)
            .map(|_| crate::matcore::c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        CMatrix::new(n, n, entries).expect("finite")
    };
    (0..count).map(|_| (draw(), draw())).collect()
}

/// Exact verification summary for a constructed family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub count: usize,
    pub dimension: usize,
    pub invertible: bool,
    pub pairwise_anticommuting: Option<bool>,
    pub pairwise_mutually_orthogonal: Option<bool>,
    pub skew_hermitian: Option<bool>,
    pub unitary: Option<bool>,
    pub square_minus_identity: Option<bool>,
    pub symmetry_pattern: Option<bool>,
    pub bound: Option<usize>,
    pub saturates_bound: Option<bool>,
}

impl FamilyReport {
    pub fn pass(&self) -> bool {
        let flags = [
            self.pairwise_anticommuting,
            self.pairwise_mutually_orthogonal,
            self.skew_hermitian,
            self.unitary,
            self.square_minus_identity,
            self.symmetry_pattern,
            self.saturates_bound,
        ];
        self.invertible && flags.iter().all(|f| f.unwrap_or(true))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    U,
    Anticommute,
    Mo,
    Hre,
}

impl FamilyKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "u" => Some(FamilyKind::U),
            "anticommute" => Some(FamilyKind::Anticommute),
            "mo" => Some(FamilyKind::Mo),
            "hre" => Some(FamilyKind::Hre),
            _ => None,
        }
    }
}

/// Builds a family and checks every property that defines it.
pub fn build_and_verify(kind: FamilyKind, param: usize) -> Result<(MatrixFamily, FamilyReport)> {
    let fam = match kind {
        FamilyKind::U => u_family(param)?,
        FamilyKind::Anticommute => anticommuting_family(param),
        FamilyKind::Mo => mutually_orthogonal_family(param),
        FamilyKind::Hre => hre_family(param),
    };
    check_odd_degree_rejection(fam.dimension).or_else(|e| if fam.dimension == 1 { Ok(()) } else { Err(e) })?;
    let mut report = FamilyReport {
        count: fam.len(),
        dimension: fam.dimension,
        invertible: fam.all_invertible(),
        pairwise_anticommuting: None,
        pairwise_mutually_orthogonal: None,
        skew_hermitian: None,
        unitary: None,
        square_minus_identity: None,
        symmetry_pattern: None,
        bound: None,
        saturates_bound: None,
    };
    match kind {
        FamilyKind::U => {
            report.pairwise_anticommuting = Some(fam.pairwise_anticommuting());
            let pattern = fam.exact.chunks(2).all(|p| p[0].is_symmetric() && p[1].is_skew_symmetric())
                && GaussMatrix::product(fam.dimension, &fam.exact).is_symmetric();
            report.symmetry_pattern = Some(pattern);
        }
        FamilyKind::Anticommute => {
            report.pairwise_anticommuting = Some(fam.pairwise_anticommuting());
            let params = AlgebraParams::new(fam.dimension as u64, 2, false)?;
            let bound = anticommute_bound(&params, Parity::Odd);
            report.bound = Some(bound);
            report.saturates_bound = Some(fam.len() == bound);
        }
        FamilyKind::Mo => {
            report.pairwise_mutually_orthogonal = Some(fam.pairwise_mutually_orthogonal());
            report.skew_hermitian = Some(fam.exact[1..].iter().all(GaussMatrix::is_skew_hermitian));
            report.pairwise_anticommuting = Some(pairwise(&fam.exact[1..], |a, b| a.anticommutes_with(b)));
            let params = AlgebraParams::new(fam.dimension as u64, 2, false)?;
            let bound = mo_group_bound(fam.dimension as u64, Some(&params))?.g_max;
            report.bound = Some(bound);
            report.saturates_bound = Some(fam.len() == bound);
        }
        FamilyKind::Hre => {
            let minus_one = g(-1, 0);
            report.pairwise_anticommuting = Some(fam.pairwise_anticommuting());
            report.unitary = Some(fam.exact.iter().all(GaussMatrix::is_unitary));
            report.square_minus_identity = Some(fam.exact.iter().all(|m| m.squares_to(&minus_one)));
            report.skew_hermitian = Some(fam.exact.iter().all(GaussMatrix::is_skew_hermitian));
            let bound = hre_bound(fam.dimension as u64)?;
            report.bound = Some(bound);
            report.saturates_bound = Some(fam.len() == bound);
        }
    }
    Ok((fam, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::exact::rational_rank;
    use crate::mograph::normalize_to_anticommuting;
    use crate::stbc::{alamouti_code, real_rank};

    fn gm(rows: &[&[(i64, i64)]]) -> GaussMatrix {
        GaussMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&(a, b)| g(a, b)).collect()).collect())
    }

    #[test]
    fn nu2_examples() {
        assert_eq!(nu2(1).unwrap(), 0);
        assert_eq!(nu2(4).unwrap(), 2);
        assert_eq!(nu2(12).unwrap(), 2);
        assert!(nu2(0).is_err());
    }

    #[test]
    fn h_matrix_relations() {
        let (h1, hm1) = h_matrices();
        assert!(h1.squares_to(&g(1, 0)));
        assert!(hm1.squares_to(&g(-1, 0)));
        assert_eq!(h1.mul(&hm1), hm1.mul(&h1).neg());
    }

    #[test]
    fn u_family_ell_one_by_hand() {
        let fam = u_family(1).unwrap();
        assert_eq!(fam.exact[0], gm(&[&[(0, 0), (-1, 0)], &[(-1, 0), (0, 0)]]));
        assert_eq!(fam.exact[1], gm(&[&[(0, 0), (-1, 0)], &[(1, 0), (0, 0)]]));
        assert!(fam.exact[0].anticommutes_with(&fam.exact[1]));
        assert!(u_family(0).is_err());
    }

    #[test]
    fn u_family_anticommutes_and_has_symmetry_pattern() {
        for ell in 1..=4 {
            let (fam, report) = build_and_verify(FamilyKind::U, ell).unwrap();
            assert_eq!(fam.len(), 2 * ell);
            assert_eq!(fam.dimension, 1 << ell);
            assert!(report.pass(), "ell = {ell}: {report:?}");
        }
        let fam = u_family(3).unwrap();
        let pairs = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).count();
        assert_eq!(pairs, 15);
        assert!(fam.pairwise_anticommuting());
    }

    #[test]
    fn quaternion_4x4_relations() {
        for (a, b) in [(-1, -1), (1, 1), (2, -3), (5, 7)] {
            let (a, b) = (Ratio::from_integer(a), Ratio::from_integer(b));
            let [id, e, f, ef] = quaternion_basis_4x4(a, b).unwrap();
            assert!(e.squares_to(&a));
            assert!(f.squares_to(&b));
            assert_eq!(e.mul(&f), ef);
            assert_eq!(f.mul(&e), ef.neg());
            let vecs: Vec<Vec<Rational>> = [&id, &e, &f, &ef].iter().map(|m| m.entries().to_vec()).collect();
            assert_eq!(rational_rank(&vecs), 4);
        }
        let half = Ratio::new(1, 2);
        let [_, e, _, _] = quaternion_basis_4x4(half, Ratio::from_integer(3)).unwrap();
        assert!(e.squares_to(&half));
        assert!(quaternion_basis_4x4(Ratio::zero(), Ratio::one()).is_err());
    }

    #[test]
    fn quaternion_complex_rep_relations() {
        let [ih1, hm1, ih1hm1] = quaternion_complex_rep();
        let minus = g(-1, 0);
        assert!(ih1.squares_to(&minus));
        assert!(hm1.squares_to(&minus));
        assert!(ih1.anticommutes_with(&hm1));
        assert!(ih1hm1.is_skew_hermitian());
        assert!(crate::matcore::is_skew_hermitian(&ih1hm1.to_cmatrix(), 0.0));
    }

    #[test]
    fn anticommuting_family_examples() {
        let fam0 = anticommuting_family(0);
        assert_eq!(fam0.exact, quaternion_complex_rep().to_vec());

        let (fam, report) = build_and_verify(FamilyKind::Anticommute, 2).unwrap();
        assert_eq!((fam.len(), fam.dimension), (7, 8));
        assert!(report.pass());
        let params = AlgebraParams::new(8, 2, false).unwrap();
        assert_eq!(anticommute_bound(&params, Parity::Odd), 7);
    }

    #[test]
    fn anticommuting_family_saturates_for_small_ell() {
        for ell in 0..=4 {
            let fam = anticommuting_family(ell);
            let params = AlgebraParams::new(1 << (ell + 1), 2, false).unwrap();
            assert_eq!(fam.len(), anticommute_bound(&params, Parity::Odd));
            assert!(fam.pairwise_anticommuting() && fam.all_invertible());
        }
    }

    #[test]
    fn mo_family_examples() {
        let fam0 = mutually_orthogonal_family(0);
        assert_eq!(fam0.len(), 4);
        let ala = alamouti_code();
        for (ours, theirs) in fam0.members().iter().zip(ala.matrices()) {
            assert!(ours == theirs || *ours == -theirs, "{ours:?} vs {theirs:?}");
        }
        let (fam1, report) = build_and_verify(FamilyKind::Mo, 1).unwrap();
        assert_eq!((fam1.len(), fam1.dimension), (6, 4));
        assert!(report.pass(), "{report:?}");
        assert!(fam1.exact[1..].iter().all(GaussMatrix::is_skew_hermitian));
        assert_eq!(real_rank(&fam1.members()), 6);
    }

    #[test]
    fn constructed_families_normalize_cleanly() {
        for ell in 0..=3 {
            let fam = mutually_orthogonal_family(ell);
            let normalized = normalize_to_anticommuting(&fam.members(), 0.0).unwrap();
            assert_eq!(normalized.len(), 2 * ell + 3);
        }
    }

    #[test]
    fn bounds() {
        let div = AlgebraParams::new(4, 4, true).unwrap();
        assert_eq!(anticommute_bound(&div, Parity::Odd), 3);
        assert_eq!(anticommute_bound(&div, Parity::Even), 2);
        let split = AlgebraParams::new(16, 1, false).unwrap();
        assert_eq!(anticommute_bound(&split, Parity::Even), 2 * 4 + 2);
        assert!(AlgebraParams::new(8, 3, false).is_err());
        assert!(AlgebraParams::new(8, 2, true).is_err());

        assert_eq!(mo_group_bound(2, None).unwrap().g_max, 4);
        assert_eq!(mo_group_bound(4, Some(&AlgebraParams::division(4))).unwrap().g_max, 4);
        assert_eq!(mo_group_bound(8, None).unwrap().g_max, 10);
        let r = mo_group_bound(8, None).unwrap();
        assert_eq!((r.g_even, r.g_odd), (r.r_odd + 1, r.r_even + 1));
    }

    #[test]
    fn hre_examples() {
        assert_eq!(hre_bound(4).unwrap(), 5);
        let (fam, report) = build_and_verify(FamilyKind::Hre, 2).unwrap();
        assert_eq!((fam.len(), fam.dimension), (5, 4));
        assert!(report.pass());
        let fam0 = hre_family(0);
        assert_eq!(fam0.exact, vec![gm(&[&[(0, 1)]])]);
    }

    #[test]
    fn odd_degree() {
        assert!(check_odd_degree_rejection(1).is_err());
        assert!(check_odd_degree_rejection(3).is_err());
        assert!(check_odd_degree_rejection(4).is_ok());
        let report = odd_degree_validator(&random_pairs(3, 200, 1), DEFAULT_TOL).unwrap();
        assert_eq!(report.anticommuting_found, 0);
        assert!((report.min_det_gap - 2.0).abs() < 1e-9);
        // Even size: the exact anticommuting pair is detected.
        let [a, b, _] = quaternion_complex_rep();
        let even = odd_degree_validator(&[(a.to_cmatrix(), b.to_cmatrix())], DEFAULT_TOL).unwrap();
        assert_eq!(even.anticommuting_found, 1);
    }
}
