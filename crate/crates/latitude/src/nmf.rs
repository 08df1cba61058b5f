//! Nonnegative matrix factorization by projected alternating least squares.
//!
//! Each half-step solves the unconstrained least squares problem through
//! (lightly ridged) normal equations and clamps negatives to zero. The
//! projection breaks monotonicity, so the best iterate seen is returned.

use crate::error::{Error, Result};
use crate::matrix::{frobenius_error, DenseMatrix};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct NmfConfig {
    pub k: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Stop when the relative objective improvement drops below this.
    pub relative_improvement_floor: f64,
}

impl NmfConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            max_iterations: 100,
            seed: 0,
            relative_improvement_floor: 1e-5,
        }
    }
}

/// Factors with i.i.d. uniform [0, 1] entries, deterministic in the seed.
pub fn random_factors(n: usize, m: usize, k: usize, seed: u64) -> (DenseMatrix, DenseMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = DenseMatrix::from_vec(n, k, (0..n * k).map(|_| rng.gen()).collect()).unwrap();
    let c = DenseMatrix::from_vec(k, m, (0..k * m).map(|_| rng.gen()).collect()).unwrap();
    (b, c)
}

fn to_na(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.values())
}

fn from_na(m: &DMatrix<f64>) -> DenseMatrix {
    let mut values = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            values.push(m[(i, j)]);
        }
    }
    DenseMatrix::from_vec(m.nrows(), m.ncols(), values).unwrap()
}

/// Solves `argmin_X ||A - B X||_F` via normal equations with a ridge of
/// `1e-12 * trace`, then clamps negatives to zero.
fn projected_solve(b: &DMatrix<f64>, a: &DMatrix<f64>) -> DMatrix<f64> {
    let gram = b.transpose() * b;
    let rhs = b.transpose() * a;
    let trace: f64 = gram.diagonal().iter().sum();
    if trace == 0.0 {
        return DMatrix::zeros(b.ncols(), a.ncols());
    }
    let ridge = 1e-12 * trace;
    let mut reg = gram;
    for i in 0..reg.nrows() {
        reg[(i, i)] += ridge;
    }
    let mut x = match reg.clone().cholesky() {
        Some(chol) => chol.solve(&rhs),
        None => {
            let dims = (reg.nrows(), rhs.ncols());
            let svd = reg.svd(true, true);
            svd.solve(&rhs, 1e-13)
                .unwrap_or_else(|_| DMatrix::zeros(dims.0, dims.1))
        }
    };
    x.iter_mut().for_each(|v| {
        if *v < 0.0 {
            *v = 0.0;
        }
    });
    x
}

/// Runs projected ALS from the given initial left factor.
pub fn nmf_fit_from(
    a: &DenseMatrix,
    b0: &DenseMatrix,
    config: &NmfConfig,
) -> Result<(DenseMatrix, DenseMatrix, Vec<f64>)> {
    if config.k == 0 || config.max_iterations == 0 {
        return Err(Error::InvalidConfig(
            "nmf rank and iteration count must be at least 1".into(),
        ));
    }
    a.ensure_nonnegative()?;
    if b0.rows() != a.rows() || b0.cols() != config.k {
        return Err(Error::DimensionMismatch {
            op: "nmf initial factor",
            left_rows: a.rows(),
            left_cols: config.k,
            right_rows: b0.rows(),
            right_cols: b0.cols(),
        });
    }
    if a.frobenius_norm() == 0.0 {
        let b = DenseMatrix::zeros(a.rows(), config.k);
        let c = DenseMatrix::zeros(config.k, a.cols());
        return Ok((b, c, vec![0.0]));
    }

    let a_na = to_na(a);
    let at_na = a_na.transpose();
    let mut b = to_na(b0);
    let mut c;

    let mut trace = Vec::with_capacity(config.max_iterations);
    let mut best: Option<(DMatrix<f64>, DMatrix<f64>, f64)> = None;
    let mut prev_err = f64::INFINITY;

    for _ in 0..config.max_iterations {
        c = projected_solve(&b, &a_na);
        b = projected_solve(&c.transpose(), &at_na).transpose();

        let err = {
            let recon = from_na(&(&b * &c));
            frobenius_error(a, &recon)?.0
        };
        trace.push(err);
        if best.as_ref().map_or(true, |(_, _, e)| err < *e) {
            best = Some((b.clone(), c.clone(), err));
        }
        if prev_err.is_finite() && prev_err > 0.0 {
            let improvement = (prev_err - err) / prev_err;
            if improvement < config.relative_improvement_floor {
                break;
            }
        }
        prev_err = err;
    }

    let (bb, cc, _) = best.expect("at least one iteration ran");
    Ok((from_na(&bb), from_na(&cc), trace))
}

/// Projected-ALS NMF from a random start.
pub fn nmf_fit(
    a: &DenseMatrix,
    config: &NmfConfig,
) -> Result<(DenseMatrix, DenseMatrix, Vec<f64>)> {
    let (b0, _) = random_factors(a.rows(), a.cols(), config.k, config.seed);
    nmf_fit_from(a, &b0, config)
}
