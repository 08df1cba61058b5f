//! The alternating solver for the mixed linear-tropical model.
//!
//! Columns of `C` (together with their gate parameters `ro_j`) and rows of
//! `B` (with `co_i`) are updated one at a time by a mixed-regression
//! routine: the column problem is linearized into an NNLS solve by freezing
//! the winning rank-1 term of each row, and the scalar gate parameter is
//! then refined by bisecting the derivative of the column error on
//! `[-M, M]`. The heuristic is not monotone, so both the per-column update
//! and the outer loop keep the best candidate they have seen.

use crate::error::{Error, Result};
use crate::matrix::{frobenius_error, DenseMatrix};
use crate::model::{alpha_matrix, mixed_product, sigmoid, MixedFactorization, ParamVectors};
use crate::nmf::{nmf_fit_from, random_factors, NmfConfig};
use crate::nnls::{nnls_solve, NnlsConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMode {
    Nmf,
    Random,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub k: usize,
    /// Outer iteration count.
    pub niter: usize,
    /// Bound on the gate parameters.
    pub bound: f64,
    pub seed: u64,
    pub init_mode: InitMode,
    pub nmf_config: NmfConfig,
    pub nnls_config: NnlsConfig,
    pub bisect_iterations: usize,
}

impl SolverConfig {
    pub fn new(k: usize) -> Self {
        let mut nmf_config = NmfConfig::new(k);
        nmf_config.seed = 0;
        Self {
            k,
            niter: 40,
            bound: ParamVectors::DEFAULT_BOUND,
            seed: 0,
            init_mode: InitMode::Nmf,
            nmf_config,
            nnls_config: NnlsConfig::default(),
            bisect_iterations: 50,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.nmf_config.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.niter == 0 {
            return Err(Error::InvalidConfig(
                "rank and iteration count must be at least 1".into(),
            ));
        }
        if !(self.bound > 0.0) {
            return Err(Error::InvalidConfig("parameter bound must be positive".into()));
        }
        Ok(())
    }
}

/// Per-fit diagnostics: the objective trace over outer iterations and the
/// best state bookkeeping.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub error_trace: Vec<f64>,
    pub best_error: f64,
    /// 0 means the initial state was never improved on.
    pub best_iteration: usize,
    pub wall_time_per_iteration: Vec<f64>,
}

/// Gate-parameter initialization from the NMF residual `D = BC - A`.
///
/// Rows (columns) are ranked by their residual sums; the row whose standard
/// product under-fits least receives `-M` (most NMF-leaning) and the largest
/// receives 0. Assignment goes through the sort permutation.
pub fn init_parameters(
    a: &DenseMatrix,
    b: &DenseMatrix,
    c: &DenseMatrix,
    bound: f64,
) -> Result<ParamVectors> {
    let (n, m) = (a.rows(), a.cols());
    if n < 2 || m < 2 {
        return Err(Error::DegenerateInit { rows: n, cols: m });
    }
    let bc = crate::matrix::matmul(b, c)?;
    if bc.rows() != n || bc.cols() != m {
        return Err(Error::DimensionMismatch {
            op: "init_parameters",
            left_rows: n,
            left_cols: m,
            right_rows: bc.rows(),
            right_cols: bc.cols(),
        });
    }
    let mut row_sums = vec![0.0f64; n];
    let mut col_sums = vec![0.0f64; m];
    for i in 0..n {
        for j in 0..m {
            let d = bc.get(i, j) - a.get(i, j);
            row_sums[i] += d;
            col_sums[j] += d;
        }
    }
    let assign = |sums: &[f64], len: usize| -> Vec<f64> {
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by(|&x, &y| sums[x].partial_cmp(&sums[y]).unwrap().then(x.cmp(&y)));
        let mut out = vec![0.0; len];
        for (rank, &idx) in order.iter().enumerate() {
            out[idx] = ((rank + 1) as f64 - len as f64) / (len as f64 - 1.0) * bound;
        }
        out
    };
    ParamVectors::new(assign(&row_sums, n), assign(&col_sums, m), bound)
}

/// Index of the largest entry of `B_i .* c`, ties to the smallest index.
fn winner_index(b_row: &[f64], c: &[f64]) -> usize {
    let mut best = 0;
    let mut best_v = b_row[0] * c[0];
    for (s, (&bs, &cs)) in b_row.iter().zip(c).enumerate().skip(1) {
        let v = bs * cs;
        if v > best_v {
            best_v = v;
            best = s;
        }
    }
    best
}

/// The frozen-argmax coefficient matrix `Y = B .* T` with `T_ij = 1` on the
/// winning column and `1 - alpha_i` elsewhere.
pub fn build_coefficient_matrix(
    b: &DenseMatrix,
    c: &[f64],
    alpha: &[f64],
) -> DenseMatrix {
    let (n, k) = (b.rows(), b.cols());
    debug_assert_eq!(c.len(), k);
    debug_assert_eq!(alpha.len(), n);
    let mut y = DenseMatrix::zeros(n, k);
    for i in 0..n {
        let bi = b.row(i);
        let phi = winner_index(bi, c);
        for s in 0..k {
            let t = if s == phi { 1.0 } else { 1.0 - alpha[i] };
            y.set(i, s, bi[s] * t);
        }
    }
    y
}

/// Mixed prediction of one column: `p_i = alpha_i max_s(B_is c_s) +
/// (1 - alpha_i) sum_s(B_is c_s)` with `alpha_i = sigma(co_i + t)`.
fn column_terms(b: &DenseMatrix, c: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (n, k) = (b.rows(), b.cols());
    let mut maxes = vec![0.0; n];
    let mut sums = vec![0.0; n];
    for i in 0..n {
        let bi = b.row(i);
        let mut mx = f64::NEG_INFINITY;
        let mut sm = 0.0;
        for s in 0..k {
            let v = bi[s] * c[s];
            sm += v;
            if v > mx {
                mx = v;
            }
        }
        maxes[i] = mx;
        sums[i] = sm;
    }
    (maxes, sums)
}

fn column_error_from_terms(a: &[f64], maxes: &[f64], sums: &[f64], co: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        let alpha = sigmoid(co[i] + t);
        let p = alpha * maxes[i] + (1.0 - alpha) * sums[i];
        let d = p - a[i];
        acc += d * d;
    }
    acc.sqrt()
}

/// Column error `||a - B |x|_{co,t} c||_2` of the mixed model.
pub fn column_error(a: &[f64], b: &DenseMatrix, c: &[f64], co: &[f64], t: f64) -> f64 {
    let (maxes, sums) = column_terms(b, c);
    column_error_from_terms(a, &maxes, &sums, co, t)
}

/// Refines the scalar gate parameter by bisecting the derivative of the
/// squared column error on `[-M, M]`. Guarded: never returns a `t` with a
/// strictly worse column error than `t_in`.
pub fn update_t(
    a: &[f64],
    b: &DenseMatrix,
    c: &[f64],
    co: &[f64],
    bound: f64,
    t_in: f64,
    bisect_iterations: usize,
) -> f64 {
    let (maxes, sums) = column_terms(b, c);
    if maxes.iter().zip(&sums).all(|(x, y)| x == y) {
        // Mixed prediction independent of t.
        return t_in;
    }
    let deriv = |t: f64| -> f64 {
        let mut acc = 0.0;
        for i in 0..a.len() {
            let x = co[i] + t;
            let alpha = sigmoid(x);
            let p = alpha * maxes[i] + (1.0 - alpha) * sums[i];
            acc += 2.0 * (p - a[i]) * alpha * (1.0 - alpha) * (maxes[i] - sums[i]);
        }
        acc
    };

    let d_lo = deriv(-bound);
    let d_hi = deriv(bound);
    let mut candidates = vec![t_in];
    if d_lo * d_hi < 0.0 {
        let mut lo = -bound;
        let mut hi = bound;
        for _ in 0..bisect_iterations {
            let mid = 0.5 * (lo + hi);
            if deriv(mid) * d_lo > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        candidates.push(0.5 * (lo + hi));
    }
    // The squared error need not be unimodal in t; a coarse grid keeps the
    // pick-best step from settling on the nearest stationary point.
    for g in 0..=8 {
        candidates.push(-bound + g as f64 * bound / 4.0);
    }

    let mut best_t = t_in;
    let mut best_err = column_error_from_terms(a, &maxes, &sums, co, t_in);
    for &t in &candidates[1..] {
        let err = column_error_from_terms(a, &maxes, &sums, co, t);
        if err < best_err {
            best_err = err;
            best_t = t;
        }
    }
    best_t
}

/// One column update: NNLS against the frozen coefficient matrix, then the
/// gate-parameter refinement, kept only if the true column error improves.
#[allow(clippy::too_many_arguments)]
pub fn solve_mix_regression(
    a: &[f64],
    b: &DenseMatrix,
    c0: &[f64],
    co: &[f64],
    t0: f64,
    bound: f64,
    nnls_config: &NnlsConfig,
    bisect_iterations: usize,
) -> Result<(Vec<f64>, f64)> {
    debug_assert_eq!(a.len(), b.rows());
    debug_assert_eq!(c0.len(), b.cols());
    debug_assert_eq!(co.len(), b.rows());

    let alpha: Vec<f64> = co.iter().map(|&x| sigmoid(x + t0)).collect();
    let y = build_coefficient_matrix(b, c0, &alpha);
    let sol = nnls_solve(&y, a, nnls_config)?;
    let t1 = update_t(a, b, &sol.x, co, bound, t0, bisect_iterations);

    // Gate-only fallback: when the linearized factor step does not pay off,
    // the gate parameter can still move on the current coefficients.
    let t_alt = update_t(a, b, c0, co, bound, t0, bisect_iterations);
    let err_alt = column_error(a, b, c0, co, t_alt);
    let err1 = column_error(a, b, &sol.x, co, t1);
    if err1 < err_alt {
        Ok((sol.x, t1))
    } else {
        Ok((c0.to_vec(), t_alt))
    }
}

fn model_error(a: &DenseMatrix, fact: &MixedFactorization) -> Result<f64> {
    let recon = mixed_product(fact)?;
    Ok(frobenius_error(a, &recon)?.0)
}

/// Fits the mixed linear-tropical model to a nonnegative matrix.
///
/// Returns the lowest-error state among the initial one and all `niter`
/// iterates, along with the objective trace.
pub fn latitude_fit(
    a: &DenseMatrix,
    config: &SolverConfig,
) -> Result<(MixedFactorization, FitReport)> {
    config.validate()?;
    a.ensure_nonnegative()?;
    let (n, m) = (a.rows(), a.cols());
    if n < 2 || m < 2 {
        return Err(Error::DegenerateInit { rows: n, cols: m });
    }

    let (mut b, mut c) = match config.init_mode {
        InitMode::Nmf => {
            let mut nmf_cfg = config.nmf_config.clone();
            nmf_cfg.k = config.k;
            let (b0, _) = random_factors(n, m, config.k, config.seed);
            let (b, c, _) = nmf_fit_from(a, &b0, &nmf_cfg)?;
            (b, c)
        }
        InitMode::Random => random_factors(n, m, config.k, config.seed),
    };

    let params = init_parameters(a, &b, &c, config.bound)?;
    let mut co = params.co().to_vec();
    let mut ro = params.ro().to_vec();

    // Best tracking starts from the initial state; the fully clamped
    // parameter assignment is also evaluated as an initial candidate so the
    // returned error never loses to an essentially-NMF state.
    let initial = MixedFactorization::new(b.clone(), c.clone(), params.clone())?;
    let mut best_error = model_error(a, &initial)?;
    let mut best = initial;
    let mut best_iteration = 0usize;
    {
        let clamped = ParamVectors::all_clamped_low(n, m, config.bound)?;
        let candidate = MixedFactorization::new(b.clone(), c.clone(), clamped)?;
        let err = model_error(a, &candidate)?;
        if err < best_error {
            best_error = err;
            best = candidate;
        }
    }

    let at = a.transpose();
    let mut error_trace = Vec::with_capacity(config.niter);
    let mut wall_time_per_iteration = Vec::with_capacity(config.niter);

    for iter in 1..=config.niter {
        let start = Instant::now();

        // C-sweep: each column touches only (A^j, B, C^j, co, ro_j), so the
        // columns are independent and the parallel order cannot matter.
        let col_results: Vec<(Vec<f64>, f64)> = (0..m)
            .into_par_iter()
            .map(|j| {
                solve_mix_regression(
                    &at.row(j).to_vec(),
                    &b,
                    &c.col(j),
                    &co,
                    ro[j],
                    config.bound,
                    &config.nnls_config,
                    config.bisect_iterations,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        for (j, (cj, tj)) in col_results.into_iter().enumerate() {
            c.set_col(j, &cj);
            ro[j] = tj;
        }

        // B-sweep on the transposed problem.
        let ct = c.transpose();
        let row_results: Vec<(Vec<f64>, f64)> = (0..n)
            .into_par_iter()
            .map(|i| {
                solve_mix_regression(
                    &a.row(i).to_vec(),
                    &ct,
                    &b.row(i).to_vec(),
                    &ro,
                    co[i],
                    config.bound,
                    &config.nnls_config,
                    config.bisect_iterations,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, (bi, ti)) in row_results.into_iter().enumerate() {
            b.set_row(i, &bi);
            co[i] = ti;
        }

        let params = ParamVectors::new(co.clone(), ro.clone(), config.bound)?;
        let state = MixedFactorization::new(b.clone(), c.clone(), params)?;
        let err = model_error(a, &state)?;
        error_trace.push(err);
        wall_time_per_iteration.push(start.elapsed().as_secs_f64());
        if err < best_error {
            best_error = err;
            best = state;
            best_iteration = iter;
        }
    }

    Ok((
        best,
        FitReport {
            error_trace,
            best_error,
            best_iteration,
            wall_time_per_iteration,
        },
    ))
}

/// Convenience: the gate matrix of a fitted model.
pub fn fitted_alpha(fact: &MixedFactorization) -> DenseMatrix {
    alpha_matrix(&fact.params)
}
