//! Channel model, the real lattice matrix `T(H)` and its ordered QR factors.
//!
//! Column `i` of `T(H)` is `Vec_R(H A_i)`. Gram-Schmidt runs in strict column
//! order, so after permuting the columns group by group the `R` factor of a
//! fast-decodable code is block diagonal apart from the remainder columns.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::matcore::{c, vec_r_mat, CMatrix, I};
use crate::mograph::{mutually_orthogonal, GroupPartition};
use crate::rng::{derive_seed, rng_from_seed, StreamRng};
use crate::stbc::CodeBasis;

/// Draws with `|det H|` below this are rejected.
pub const DET_THRESHOLD: f64 = 1e-8;
const MAX_CHANNEL_RETRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Channel {
    pub h: CMatrix,
    pub seed: Option<u64>,
}

/// Matrix of i.i.d. circularly symmetric complex Gaussians with variance
/// `variance` (each of the real and imaginary parts has half of it).
pub fn complex_gaussian_matrix(rng: &mut StreamRng, n: usize, variance: f64) -> CMatrix {
    let sd = (variance / 2.0).sqrt();
    let entries = (0..n * n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c(sd * re, sd * im)
        })
        .collect();
    CMatrix::new(n, n, entries).expect("gaussian draws are finite")
}

/// Rayleigh-fading `n x n` channel, deterministic in `seed`.
pub fn sample_channel(n: usize, seed: u64) -> Result<Channel> {
    let mut rng = rng_from_seed(seed);
    for _ in 0..MAX_CHANNEL_RETRIES {
        let h = complex_gaussian_matrix(&mut rng, n, 1.0);
        if h.determinant()?.norm() >= DET_THRESHOLD {
            return Ok(Channel { h, seed: Some(seed) });
        }
    }
    Err(Error::ChannelRetriesExhausted(MAX_CHANNEL_RETRIES))
}

/// Real lattice matrix; `order[p]` is the basis index held in column `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeMatrix {
    pub t: DMatrix<f64>,
    pub order: Vec<usize>,
}

pub fn build_t(basis: &CodeBasis, h: &CMatrix) -> Result<LatticeMatrix> {
    let n = basis.n();
    if h.n_rows() != n || h.n_cols() != n {
        return Err(Error::DimensionMismatch(format!("channel is {}x{}, code needs {n}x{n}", h.n_rows(), h.n_cols())));
    }
    let mut t = DMatrix::zeros(2 * n * n, basis.dim());
    for (k, a) in basis.matrices().iter().enumerate() {
        let col = vec_r_mat(&h.matmul(a)?)?;
        for (r, x) in col.0.iter().enumerate() {
            t[(r, k)] = *x;
        }
    }
    Ok(LatticeMatrix { t, order: (0..basis.dim()).collect() })
}

/// Reorders columns as `Γ_1, ..., Γ_g, Γ_{g+1}`.
pub fn permute_t(lattice: &LatticeMatrix, partition: &GroupPartition) -> Result<LatticeMatrix> {
    let cols = lattice.t.ncols();
    partition.check_covers(cols)?;
    let mut position = vec![0; cols];
    for (p, &idx) in lattice.order.iter().enumerate() {
        position[idx] = p;
    }
    let order = partition.permutation();
    let mut t = DMatrix::zeros(lattice.t.nrows(), cols);
    for (p, &idx) in order.iter().enumerate() {
        t.set_column(p, &lattice.t.column(position[idx]));
    }
    Ok(LatticeMatrix { t, order })
}

/// Thin QR factors: `Q` has orthonormal columns, `R` is upper triangular with
/// a nonnegative diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct QrFactors {
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
}

/// Modified Gram-Schmidt in strict column order.
pub fn ordered_qr(t: &DMatrix<f64>) -> Result<QrFactors> {
    let (rows, cols) = t.shape();
    if cols > rows {
        return Err(Error::DimensionMismatch(format!("{rows}x{cols} matrix cannot have full column rank")));
    }
    let scale = t.norm();
    let mut q = t.clone();
    let mut r = DMatrix::zeros(cols, cols);
    for j in 0..cols {
        for i in 0..j {
            let rij = q.column(i).dot(&q.column(j));
            r[(i, j)] = rij;
            let qi = q.column(i).clone_owned();
            q.column_mut(j).axpy(-rij, &qi, 1.0);
        }
        let norm = q.column(j).norm();
        if norm <= 1e-10 * scale || norm == 0.0 {
            return Err(Error::RankDeficient { column: j + 1, norm });
        }
        r[(j, j)] = norm;
        q.column_mut(j).scale_mut(1.0 / norm);
    }
    Ok(QrFactors { q, r })
}

/// Largest magnitude of `R` outside the pattern allowed by the partition:
/// diagonal blocks `B_i`, the remainder columns `N_i`, upper triangle only.
pub fn max_off_block(r: &DMatrix<f64>, partition: &GroupPartition) -> f64 {
    let labels = partition.block_labels();
    let rem = partition.g();
    let mut worst: f64 = 0.0;
    for row in 0..r.nrows() {
        for col in 0..r.ncols() {
            let allowed = row <= col && (labels[col] == rem || labels[row] == labels[col]);
            if !allowed {
                worst = worst.max(r[(row, col)].abs());
            }
        }
    }
    worst
}

pub fn verify_block_structure(r: &DMatrix<f64>, partition: &GroupPartition, tol: f64) -> bool {
    max_off_block(r, partition) <= tol * r.norm()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QrTrial {
    pub trial: usize,
    pub channel_seed: u64,
    pub max_off_block: f64,
    pub t_norm: f64,
    pub pass: bool,
}

/// Block-structure check of `R` on `trials` seeded channels; off-block
/// entries must stay below `tol * ||T||_F`.
pub fn qr_verify_trials(
    basis: &CodeBasis,
    partition: &GroupPartition,
    seed: u64,
    trials: usize,
    tol: f64,
    exec: Execution,
) -> Result<Vec<QrTrial>> {
    partition.check_covers(basis.dim())?;
    exec.map(trials, |trial| {
        let channel_seed = derive_seed(seed, trial as u64);
        let channel = sample_channel(basis.n(), channel_seed)?;
        let lattice = permute_t(&build_t(basis, &channel.h)?, partition)?;
        let qr = ordered_qr(&lattice.t)?;
        let t_norm = lattice.t.norm();
        let worst = max_off_block(&qr.r, partition);
        Ok(QrTrial { trial, channel_seed, max_off_block: worst, t_norm, pass: worst <= tol * t_norm })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthogonalityOutcome {
    pub always_orthogonal: bool,
    pub witness: Option<Channel>,
    /// Largest `|col_i . col_j| / (||col_i|| ||col_j||)` over all probes.
    pub max_relative_dot: f64,
}

/// Channels `H` whose `H* H` is `E_kk`, `E_kk + E_kl + E_lk + E_ll` or
/// `E_kk - i E_kl + i E_lk + E_ll`.
pub fn structured_probes(n: usize) -> Vec<CMatrix> {
    let mut out: Vec<CMatrix> = (0..n).map(|k| CMatrix::unit(n, k, k)).collect();
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            out.push(&CMatrix::unit(n, k, k) + &CMatrix::unit(n, k, l));
            out.push(&CMatrix::unit(n, k, k) - &CMatrix::unit(n, k, l).scale(I));
        }
    }
    out
}

const ORTHOGONAL_TOL: f64 = 1e-8;
const WITNESS_TOL: f64 = 1e-6;

fn column_dot(a: &CMatrix, b: &CMatrix, h: &CMatrix) -> Result<(f64, f64)> {
    let ci = vec_r_mat(&h.matmul(a)?)?;
    let cj = vec_r_mat(&h.matmul(b)?)?;
    Ok((ci.dot(&cj).abs(), ci.norm() * cj.norm()))
}

/// Channel-level check that columns `i` and `j` (0-based) of `T(H)` are
/// orthogonal for every `H` exactly when `A_i, A_j` are mutually orthogonal.
pub fn column_orthogonality_test(
    basis: &CodeBasis,
    i: usize,
    j: usize,
    num_channels: usize,
    seed: u64,
) -> Result<OrthogonalityOutcome> {
    let mats = basis.matrices();
    if i == j || i >= mats.len() || j >= mats.len() {
        return Err(Error::InvalidParameter(format!("need two distinct indices below {}", mats.len())));
    }
    let (a, b) = (&mats[i], &mats[j]);
    let mo = mutually_orthogonal(a, b, crate::matcore::DEFAULT_TOL)?;
    let mut candidates: Vec<Channel> = Vec::with_capacity(num_channels);
    for trial in 0..num_channels {
        candidates.push(sample_channel(basis.n(), derive_seed(seed, trial as u64))?);
    }
    candidates.extend(structured_probes(basis.n()).into_iter().map(|h| Channel { h, seed: None }));

    let mut max_rel: f64 = 0.0;
    for ch in candidates {
        let (dot, norms) = column_dot(a, b, &ch.h)?;
        if norms > 0.0 {
            max_rel = max_rel.max(dot / norms);
        }
        if mo {
            if dot > ORTHOGONAL_TOL * norms {
                return Err(Error::Verification(format!(
                    "mutually orthogonal pair ({}, {}) gave non-orthogonal columns (|dot| = {dot:e})",
                    i + 1,
                    j + 1
                )));
            }
        } else if dot > WITNESS_TOL * norms {
            return Ok(OrthogonalityOutcome { always_orthogonal: false, witness: Some(ch), max_relative_dot: max_rel });
        }
    }
    if mo {
        Ok(OrthogonalityOutcome { always_orthogonal: true, witness: None, max_relative_dot: max_rel })
    } else {
        Err(Error::Verification(format!("no witness channel found for non-orthogonal pair ({}, {})", i + 1, j + 1)))
    }
}
