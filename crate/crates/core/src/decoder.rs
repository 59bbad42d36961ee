//! Exhaustive ML decoding, the conditioned group-parallel fast decoder and a
//! seeded Monte Carlo harness comparing the two.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{build_t, complex_gaussian_matrix, ordered_qr, permute_t, sample_channel, DET_THRESHOLD};
use crate::matcore::{vec_r_mat, CMatrix, RVector};
use crate::mograph::{conflict_graph, GroupPartition};
use crate::rng::stream;
use crate::stbc::{assemble, CodeBasis, Constellation};

/// Largest search space `ml_brute` accepts.
pub const BRUTE_FORCE_CAP: u128 = 1 << 24;

const PARTITION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecodeResult {
    pub symbols: RVector,
    pub metric: f64,
    pub metric_evals: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub trials: usize,
    pub noise_variance: f64,
    pub seed: u64,
    pub constellation: Constellation,
}

impl SimConfig {
    pub fn new(trials: usize, noise_variance: f64, seed: u64, constellation: Constellation) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParameter("at least one trial is required".into()));
        }
        if !noise_variance.is_finite() || noise_variance < 0.0 {
            return Err(Error::InvalidParameter(format!("noise variance must be finite and nonnegative, got {noise_variance}")));
        }
        Ok(SimConfig { trials, noise_variance, seed, constellation })
    }
}

fn check_channel(h: &CMatrix, n: usize) -> Result<()> {
    if h.n_rows() != n || h.n_cols() != n {
        return Err(Error::DimensionMismatch(format!("channel is {}x{}, code needs {n}x{n}", h.n_rows(), h.n_cols())));
    }
    if h.determinant()?.norm() < DET_THRESHOLD {
        return Err(Error::SingularChannel);
    }
    Ok(())
}

fn received_vector(y: &CMatrix, n: usize) -> Result<DVector<f64>> {
    if y.n_rows() != n || y.n_cols() != n {
        return Err(Error::DimensionMismatch(format!("received block is {}x{}, expected {n}x{n}", y.n_rows(), y.n_cols())));
    }
    Ok(DVector::from_vec(vec_r_mat(y)?.0))
}

/// `|S|^k`, saturating.
pub fn search_size(q: usize, k: usize) -> u128 {
    (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

/// Mixed-radix counter over `S^k` in lexicographic order (last digit fastest).
struct Odometer {
    digits: Vec<usize>,
    base: usize,
}

impl Odometer {
    fn new(len: usize, base: usize) -> Self {
        Odometer { digits: vec![0; len], base }
    }

    /// Advances and returns the leftmost digit that changed, or `None` once
    /// every tuple has been visited.
    fn advance(&mut self) -> Option<usize> {
        for k in (0..self.digits.len()).rev() {
            self.digits[k] += 1;
            if self.digits[k] < self.base {
                return Some(k);
            }
            self.digits[k] = 0;
        }
        None
    }
}

/// Lexicographic comparison of digit tuples read in the given order.
fn lex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.iter().cmp(b.iter())
}

fn improves(metric: f64, cand: &[usize], best_metric: f64, best: &[usize]) -> bool {
    metric < best_metric || (metric == best_metric && lex_cmp(cand, best) == Ordering::Less)
}

fn residual_constant(t: &DMatrix<f64>, y: &DVector<f64>) -> f64 {
    let svd = t.clone().svd(true, true);
    let x = svd.solve(y, 1e-12).expect("both factors were requested");
    (y - t * x).norm_squared()
}

/// Exhaustive ML search over `S^{2l}` for `min ||Y - H X(s)||_F^2`, reported
/// without the part of the residual orthogonal to the lattice.
pub fn ml_brute(y: &CMatrix, h: &CMatrix, basis: &CodeBasis, s: &Constellation) -> Result<DecodeResult> {
    let dim = basis.dim();
    let size = search_size(s.size(), dim);
    if size > BRUTE_FORCE_CAP {
        return Err(Error::SearchTooLarge { size, cap: BRUTE_FORCE_CAP });
    }
    check_channel(h, basis.n())?;
    let yv = received_vector(y, basis.n())?;
    let t = build_t(basis, h)?.t;
    let constant = residual_constant(&t, &yv);
    let rows = t.nrows();
    let vals = s.values();

    // partial[k] = y - sum_{j<k} T_j s_j, stored flat.
    let mut partial = vec![0.0; rows * (dim + 1)];
    partial[..rows].copy_from_slice(yv.as_slice());
    let refresh = |partial: &mut [f64], digits: &[usize], from: usize| {
        for k in from..dim {
            let (head, tail) = partial.split_at_mut((k + 1) * rows);
            let prev = &head[k * rows..];
            let col = t.column(k);
            let sk = vals[digits[k]];
            for r in 0..rows {
                tail[r] = prev[r] - col[r] * sk;
            }
        }
    };
    let mut odo = Odometer::new(dim, vals.len());
    refresh(&mut partial, &odo.digits, 0);
    let mut best_metric = f64::INFINITY;
    let mut best = odo.digits.clone();
    let mut evals = 0u64;
    loop {
        let metric: f64 = partial[dim * rows..].iter().map(|x| x * x).sum();
        evals += 1;
        if metric < best_metric {
            best_metric = metric;
            best.copy_from_slice(&odo.digits);
        }
        match odo.advance() {
            Some(k) => refresh(&mut partial, &odo.digits, k),
            None => break,
        }
    }
    Ok(DecodeResult {
        symbols: RVector(best.iter().map(|&d| vals[d]).collect()),
        metric: (best_metric - constant).max(0.0),
        metric_evals: evals,
    })
}

/// Fast decoder bound to one code, partition and constellation.
#[derive(Debug, Clone)]
pub struct FastDecoder<'a> {
    basis: &'a CodeBasis,
    partition: GroupPartition,
    constellation: Constellation,
}

struct Block {
    /// Permuted column offset.
    offset: usize,
    /// Original basis indices of the block, in permuted order.
    indices: Vec<usize>,
    /// Positions within the block sorted by original index.
    lex_order: Vec<usize>,
}

impl<'a> FastDecoder<'a> {
    /// Refuses partitions with an edge of the conflict graph between groups.
    pub fn new(basis: &'a CodeBasis, partition: &GroupPartition, constellation: &Constellation) -> Result<Self> {
        partition.check_covers(basis.dim())?;
        partition.check_against(&conflict_graph(basis, PARTITION_TOL))?;
        Ok(FastDecoder { basis, partition: partition.clone(), constellation: constellation.clone() })
    }

    /// `|S|^{n_r} * sum_i |S|^{n_i}`, plus `|S|^{n_r}` remainder evaluations
    /// when the remainder is nonempty.
    pub fn metric_evals(&self) -> u128 {
        let q = self.constellation.size();
        let outer = search_size(q, self.partition.remainder().len());
        let inner: u128 = self.partition.groups().iter().map(|g| search_size(q, g.len())).sum();
        let rem = if self.partition.remainder().is_empty() { 0 } else { outer };
        outer.saturating_mul(inner).saturating_add(rem)
    }

    fn blocks(&self) -> (Vec<Block>, Block) {
        let mut offset = 0;
        let mut make = |indices: &[usize]| {
            let mut lex_order: Vec<usize> = (0..indices.len()).collect();
            lex_order.sort_by_key(|&p| indices[p]);
            let b = Block { offset, indices: indices.to_vec(), lex_order };
            offset += indices.len();
            b
        };
        let groups = self.partition.groups().iter().map(|g| make(g)).collect();
        let rem = make(self.partition.remainder());
        (groups, rem)
    }

    pub fn decode(&self, y: &CMatrix, h: &CMatrix) -> Result<DecodeResult> {
        let size = self.metric_evals();
        if size > BRUTE_FORCE_CAP {
            return Err(Error::SearchTooLarge { size, cap: BRUTE_FORCE_CAP });
        }
        let n = self.basis.n();
        check_channel(h, n)?;
        let yv = received_vector(y, n)?;
        let lat = permute_t(&build_t(self.basis, h)?, &self.partition)?;
        let qr = ordered_qr(&lat.t)?;
        let yp = qr.q.tr_mul(&yv);
        let r = &qr.r;
        let vals = self.constellation.values();
        let q = vals.len();
        let (groups, rem) = self.blocks();
        let nr = rem.indices.len();

        let mut evals = 0u64;
        let mut best_metric = f64::INFINITY;
        let mut best = vec![0usize; lat.order.len()];
        let mut cand = vec![0usize; lat.order.len()];
        let mut u = Odometer::new(nr, q);
        loop {
            for (p, &d) in u.digits.iter().enumerate() {
                cand[rem.indices[p]] = d;
            }
            let mut total = 0.0;
            if nr > 0 {
                evals += 1;
                for row in 0..nr {
                    let i = rem.offset + row;
                    let mut e = yp[i];
                    for p in row..nr {
                        e -= r[(i, rem.offset + p)] * vals[u.digits[p]];
                    }
                    total += e * e;
                }
            }
            for g in &groups {
                let k = g.indices.len();
                // target = y'_i - N_i u
                let target: Vec<f64> = (0..k)
                    .map(|row| {
                        let i = g.offset + row;
                        let mut e = yp[i];
                        for p in 0..nr {
                            e -= r[(i, rem.offset + p)] * vals[u.digits[p]];
                        }
                        e
                    })
                    .collect();
                let mut odo = Odometer::new(k, q);
                let mut g_best = f64::INFINITY;
                let mut g_digits = vec![0usize; k];
                let key = |digits: &[usize]| g.lex_order.iter().map(|&p| digits[p]).collect::<Vec<_>>();
                loop {
                    evals += 1;
                    let mut m = 0.0;
                    for row in 0..k {
                        let mut e = target[row];
                        for p in row..k {
                            e -= r[(g.offset + row, g.offset + p)] * vals[odo.digits[p]];
                        }
                        m += e * e;
                    }
                    if improves(m, &key(&odo.digits), g_best, &key(&g_digits)) {
                        g_best = m;
                        g_digits.copy_from_slice(&odo.digits);
                    }
                    if odo.advance().is_none() {
                        break;
                    }
                }
                total += g_best;
                for (p, &d) in g_digits.iter().enumerate() {
                    cand[g.indices[p]] = d;
                }
            }
            if improves(total, &cand, best_metric, &best) {
                best_metric = total;
                best.copy_from_slice(&cand);
            }
            if u.advance().is_none() {
                break;
            }
        }
        Ok(DecodeResult {
            symbols: RVector(best.iter().map(|&d| vals[d]).collect()),
            metric: best_metric.max(0.0),
            metric_evals: evals,
        })
    }
}

/// One-shot form of [`FastDecoder::decode`].
pub fn fast_decode(
    y: &CMatrix,
    h: &CMatrix,
    basis: &CodeBasis,
    partition: &GroupPartition,
    s: &Constellation,
) -> Result<DecodeResult> {
    FastDecoder::new(basis, partition, s)?.decode(y, h)
}

/// One line of the per-trial CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub agree: bool,
    pub ser_contrib: f64,
    pub evals_brute: u64,
    pub evals_fast: u64,
    #[serde(skip)]
    pub metric_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub code: Option<String>,
    pub trials: usize,
    pub noise_variance: f64,
    pub seed: u64,
    pub constellation: Vec<f64>,
    pub exponent: usize,
    pub agreement_rate: f64,
    pub symbol_error_rate: f64,
    pub mean_evals_brute: f64,
    pub mean_evals_fast: f64,
    pub eval_ratio: f64,
    pub max_metric_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub records: Vec<TrialRecord>,
    pub summary: SimSummary,
}

/// Transmitted symbols, channel and received block for one trial.
pub fn draw_trial(basis: &CodeBasis, config: &SimConfig, trial: usize) -> Result<(RVector, CMatrix, CMatrix)> {
    let mut rng = stream(config.seed, trial as u64);
    let vals = config.constellation.values();
    let s = RVector((0..basis.dim()).map(|_| vals[rng.random_range(0..vals.len())]).collect());
    let h = sample_channel(basis.n(), rng.random())?.h;
    let x = assemble(basis, &s)?;
    let noise = complex_gaussian_matrix(&mut rng, basis.n(), config.noise_variance);
    let y = &(&h * &x) + &noise;
    Ok((s, h, y))
}

pub fn simulate(basis: &CodeBasis, partition: &GroupPartition, config: &SimConfig) -> Result<Simulation> {
    simulate_with(basis, partition, config, Execution::default())
}

/// Trials draw from independent streams keyed by `(seed, trial)`, so the
/// output does not depend on `exec`.
pub fn simulate_with(
    basis: &CodeBasis,
    partition: &GroupPartition,
    config: &SimConfig,
    exec: Execution,
) -> Result<Simulation> {
    let brute_size = search_size(config.constellation.size(), basis.dim());
    if brute_size > BRUTE_FORCE_CAP {
        return Err(Error::SearchTooLarge { size: brute_size, cap: BRUTE_FORCE_CAP });
    }
    let fast = FastDecoder::new(basis, partition, &config.constellation)?;
    let records = exec
        .map(config.trials, |trial| -> Result<TrialRecord> {
            let (s, h, y) = draw_trial(basis, config, trial)?;
            let b = ml_brute(&y, &h, basis, &config.constellation)?;
            let f = fast.decode(&y, &h)?;
            let gap = (f.metric - b.metric).abs();
            let agree = f.symbols == b.symbols && gap <= 1e-9 * (1.0 + b.metric);
            let errors = f.symbols.0.iter().zip(&s.0).filter(|(a, b)| a != b).count();
            Ok(TrialRecord {
                trial,
                agree,
                ser_contrib: errors as f64 / s.len() as f64,
                evals_brute: b.metric_evals,
                evals_fast: f.metric_evals,
                metric_gap: gap,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let count = records.len() as f64;
    let mean = |f: &dyn Fn(&TrialRecord) -> f64| records.iter().map(f).sum::<f64>() / count;
    let mean_brute = mean(&|r| r.evals_brute as f64);
    let mean_fast = mean(&|r| r.evals_fast as f64);
    let summary = SimSummary {
        code: basis.name().map(str::to_owned),
        trials: config.trials,
        noise_variance: config.noise_variance,
        seed: config.seed,
        constellation: config.constellation.values().to_vec(),
        exponent: partition.exponent(),
        agreement_rate: mean(&|r| if r.agree { 1.0 } else { 0.0 }),
        symbol_error_rate: mean(&|r| r.ser_contrib),
        mean_evals_brute: mean_brute,
        mean_evals_fast: mean_fast,
        eval_ratio: mean_brute / mean_fast,
        max_metric_gap: records.iter().map(|r| r.metric_gap).fold(0.0, f64::max),
    };
    Ok(Simulation { records, summary })
}

pub fn write_csv<W: std::io::Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    w.flush()?;
    Ok(())
}
