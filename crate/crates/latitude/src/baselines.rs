//! Reference methods and cross-method comparison: truncated SVD, NMF, and
//! the mixed-model solver at full and truncated rank.

use crate::error::{Error, Result};
use crate::matrix::{frobenius_error, matmul, DenseMatrix};
use crate::model::mixed_product;
use crate::nmf::{nmf_fit_from, random_factors, NmfConfig};
use crate::solver::{latitude_fit, SolverConfig};
use nalgebra::DMatrix;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Latitude,
    /// The mixed-model solver at rank k-1, offsetting its extra parameter
    /// degrees of freedom.
    Lattrunc,
    Nmf,
    Svd,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Latitude => "latitude",
            Method::Lattrunc => "lattrunc",
            Method::Nmf => "nmf",
            Method::Svd => "svd",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "latitude" => Ok(Method::Latitude),
            "lattrunc" => Ok(Method::Lattrunc),
            "nmf" => Ok(Method::Nmf),
            "svd" => Ok(Method::Svd),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MethodResult {
    pub method: String,
    pub k: usize,
    pub abs_error: f64,
    pub rel_error: f64,
    pub wall_seconds: f64,
}

/// Shared knobs for the comparison runs.
#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub niter: usize,
    pub bound: f64,
    pub nmf_max_iterations: usize,
    pub bisect_iterations: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            niter: 40,
            bound: 5.0,
            nmf_max_iterations: 100,
            bisect_iterations: 50,
        }
    }
}

/// Best rank-k approximation of `a` in Frobenius norm.
pub fn truncated_svd(a: &DenseMatrix, k: usize) -> Result<DenseMatrix> {
    let limit = a.rows().min(a.cols());
    if k > limit {
        return Err(Error::RankTooLarge { k, limit });
    }
    let na = DMatrix::from_row_slice(a.rows(), a.cols(), a.values());
    let svd = na.svd(true, true);
    let u = svd
        .u
        .as_ref()
        .ok_or_else(|| Error::Numerical("SVD did not produce U".into()))?;
    let vt = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::Numerical("SVD did not produce V^T".into()))?;
    let sv = &svd.singular_values;

    // Singular values are not guaranteed sorted; pick the k largest by
    // index order for determinism.
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&x, &y| sv[y].partial_cmp(&sv[x]).unwrap().then(x.cmp(&y)));

    let mut out = DenseMatrix::zeros(a.rows(), a.cols());
    for &s in order.iter().take(k) {
        let sigma = sv[s];
        for i in 0..a.rows() {
            let uis = u[(i, s)] * sigma;
            for j in 0..a.cols() {
                out.set(i, j, out.get(i, j) + uis * vt[(s, j)]);
            }
        }
    }
    Ok(out)
}

/// Frobenius error of the best rank-k approximation (Eckart-Young optimum).
pub fn truncated_svd_error(a: &DenseMatrix, k: usize) -> Result<(f64, f64)> {
    let recon = truncated_svd(a, k)?;
    frobenius_error(a, &recon)
}

/// Fits each method on `a_input` and scores the reconstruction against
/// `a_eval_target` (in synthetic runs: the noise-free matrix).
pub fn run_methods(
    a_eval_target: &DenseMatrix,
    a_input: &DenseMatrix,
    k: usize,
    methods: &[Method],
    seed: u64,
    eval: &EvalConfig,
) -> Result<Vec<MethodResult>> {
    let mut out = Vec::with_capacity(methods.len());
    for &method in methods {
        let start = Instant::now();
        let recon = match method {
            Method::Svd => truncated_svd(a_input, k)?,
            Method::Nmf => {
                let mut cfg = NmfConfig::new(k);
                cfg.seed = seed;
                cfg.max_iterations = eval.nmf_max_iterations;
                let (b0, _) = random_factors(a_input.rows(), a_input.cols(), k, seed);
                let (b, c, _) = nmf_fit_from(a_input, &b0, &cfg)?;
                matmul(&b, &c)?
            }
            Method::Latitude | Method::Lattrunc => {
                let fit_k = if method == Method::Lattrunc {
                    if k < 2 {
                        return Err(Error::InvalidConfig(
                            "lattrunc needs rank k >= 2".into(),
                        ));
                    }
                    k - 1
                } else {
                    k
                };
                let mut cfg = SolverConfig::new(fit_k).with_seed(seed);
                cfg.niter = eval.niter;
                cfg.bound = eval.bound;
                cfg.bisect_iterations = eval.bisect_iterations;
                cfg.nmf_config.max_iterations = eval.nmf_max_iterations;
                let (fact, _) = latitude_fit(a_input, &cfg)?;
                mixed_product(&fact)?
            }
        };
        let seconds = start.elapsed().as_secs_f64();
        let (abs_error, rel_error) = frobenius_error(a_eval_target, &recon)?;
        out.push(MethodResult {
            method: method.name().to_string(),
            k,
            abs_error,
            rel_error,
            wall_seconds: seconds,
        });
    }
    Ok(out)
}
