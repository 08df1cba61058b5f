//! Nonnegative least squares: `argmin_{x >= 0} ||b - Bx||_2`.
//!
//! Lawson-Hanson active-set method. The ranks in this crate are small
//! (k <= 40 everywhere the solver is used), where the active-set method
//! terminates exactly and deterministically.

use crate::error::Result;
use crate::matrix::DenseMatrix;
use nalgebra::{DMatrix, DVector};

/// Solver knobs. `None` fields fall back to input-derived defaults:
/// tolerance `1e-10 * max column norm` and budget `3 * columns`.
#[derive(Debug, Clone, Default)]
pub struct NnlsConfig {
    pub kkt_tolerance: Option<f64>,
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct NnlsSolution {
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub converged: bool,
}

/// Least-norm solution of the least squares problem restricted to the
/// passive columns. SVD-based so rank-deficient passive sets cannot fail.
fn restricted_least_squares(b: &DenseMatrix, rhs: &[f64], passive: &[usize]) -> Vec<f64> {
    let n = b.rows();
    let p = passive.len();
    let mut sub = DMatrix::<f64>::zeros(n, p);
    for (pj, &j) in passive.iter().enumerate() {
        for i in 0..n {
            sub[(i, pj)] = b.get(i, j);
        }
    }
    let rhs = DVector::from_column_slice(rhs);
    let svd = sub.svd(true, true);
    let eps = 1e-13 * svd.singular_values.max().max(1.0);
    match svd.solve(&rhs, eps) {
        Ok(z) => z.iter().copied().collect(),
        Err(_) => vec![0.0; p],
    }
}

pub fn nnls_solve(b: &DenseMatrix, rhs: &[f64], config: &NnlsConfig) -> Result<NnlsSolution> {
    assert_eq!(rhs.len(), b.rows(), "right-hand side length mismatch");
    let n = b.rows();
    let k = b.cols();

    let max_col_norm = (0..k)
        .map(|j| (0..n).map(|i| b.get(i, j) * b.get(i, j)).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    let tol = config.kkt_tolerance.unwrap_or(1e-10 * max_col_norm.max(1.0));
    let max_iter = config.max_iterations.unwrap_or(3 * k).max(1);

    let mut x = vec![0.0f64; k];
    let mut passive = vec![false; k];
    // An index ejected immediately after entering is barred from re-entry
    // until a different index enters (anti-cycling); dropping a column that
    // merely hit its bound during the step-back must not ban it, or the
    // dual test below would declare convergence at a suboptimal point.
    let mut banned = vec![false; k];
    let mut converged = false;

    let residual = |x: &[f64]| -> Vec<f64> {
        let mut r = rhs.to_vec();
        for i in 0..n {
            let bi = b.row(i);
            let mut acc = 0.0;
            for s in 0..k {
                acc += bi[s] * x[s];
            }
            r[i] -= acc;
        }
        r
    };

    let mut best_x = x.clone();
    let mut best_obj = rhs.iter().map(|v| v * v).sum::<f64>();

    for _ in 0..max_iter {
        // Dual vector w = B^T (b - Bx); the entering index is the most
        // positive w among inactive columns, ties to the smallest index.
        let r = residual(&x);
        let dual = |j: usize| -> f64 { (0..n).map(|i| b.get(i, j) * r[i]).sum() };
        let mut enter: Option<usize> = None;
        let mut w_best = tol;
        for j in 0..k {
            if passive[j] || banned[j] {
                continue;
            }
            let wj = dual(j);
            if wj > w_best {
                w_best = wj;
                enter = Some(j);
            }
        }
        let Some(j_enter) = enter else {
            // Optimal only if the banned columns also satisfy the dual test.
            converged = (0..k)
                .filter(|&j| !passive[j] && banned[j])
                .all(|j| dual(j) <= tol);
            break;
        };
        passive[j_enter] = true;
        banned.iter_mut().for_each(|f| *f = false);

        // Inner loop: restricted solve, step back to feasibility if needed.
        loop {
            let pset: Vec<usize> = (0..k).filter(|&j| passive[j]).collect();
            let z = restricted_least_squares(b, rhs, &pset);
            if z.iter().all(|&v| v > 0.0) {
                for (pj, &j) in pset.iter().enumerate() {
                    x[j] = z[pj];
                }
                for j in 0..k {
                    if !passive[j] {
                        x[j] = 0.0;
                    }
                }
                break;
            }
            // Largest feasible step from x toward z.
            let mut step = f64::INFINITY;
            for (pj, &j) in pset.iter().enumerate() {
                if z[pj] <= 0.0 {
                    let denom = x[j] - z[pj];
                    if denom > 0.0 {
                        step = step.min(x[j] / denom);
                    } else {
                        step = 0.0;
                    }
                }
            }
            for (pj, &j) in pset.iter().enumerate() {
                x[j] += step * (z[pj] - x[j]);
            }
            // Only the blocking variables (driven to their bound by the
            // step) leave the passive set; they stay eligible to re-enter.
            for (pj, &j) in pset.iter().enumerate() {
                if z[pj] <= 0.0 && x[j] <= 1e-12 {
                    x[j] = 0.0;
                    passive[j] = false;
                    if j == j_enter {
                        banned[j] = true;
                    }
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }

        let r = residual(&x);
        let obj = r.iter().map(|v| v * v).sum::<f64>();
        if obj < best_obj {
            best_obj = obj;
            best_x = x.clone();
        }
    }

    let mut x = if converged { x } else { best_x };
    // Feasibility is a hard contract even at tolerance boundaries.
    for v in x.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let residual_norm = residual(&x).iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(NnlsSolution {
        x,
        residual_norm,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let b = DenseMatrix::identity(2);
        let sol = nnls_solve(&b, &[2.0, 3.0], &NnlsConfig::default()).unwrap();
        assert!((sol.x[0] - 2.0).abs() < 1e-12);
        assert!((sol.x[1] - 3.0).abs() < 1e-12);
        assert!(sol.residual_norm < 1e-12);
        assert!(sol.converged);
    }

    #[test]
    fn active_constraint() {
        // Unconstrained optimum is [2/3, -1/3]; the feasible optimum over
        // all support sets is [0.4, 0].
        let b = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let sol = nnls_solve(&b, &[1.0, 0.0], &NnlsConfig::default()).unwrap();
        assert!((sol.x[0] - 0.4).abs() < 1e-10);
        assert!(sol.x[1].abs() < 1e-12);
    }

    #[test]
    fn zero_rhs() {
        let b = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let sol = nnls_solve(&b, &[0.0, 0.0], &NnlsConfig::default()).unwrap();
        assert_eq!(sol.x, vec![0.0, 0.0]);
        assert_eq!(sol.residual_norm, 0.0);
    }

    #[test]
    fn objective_never_exceeds_rhs_norm() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let n = rng.gen_range(2..10);
            let k = rng.gen_range(1..6);
            let b = DenseMatrix::from_vec(n, k, (0..n * k).map(|_| rng.gen()).collect()).unwrap();
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let sol = nnls_solve(&b, &rhs, &NnlsConfig::default()).unwrap();
            let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(sol.residual_norm <= rhs_norm + 1e-12);
            assert!(sol.x.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn deterministic() {
        let b = DenseMatrix::from_rows(&[vec![2.0, 1.0, 0.3], vec![1.0, 2.0, 0.9]]).unwrap();
        let a = nnls_solve(&b, &[1.0, -0.5], &NnlsConfig::default()).unwrap();
        let c = nnls_solve(&b, &[1.0, -0.5], &NnlsConfig::default()).unwrap();
        assert_eq!(a.x, c.x);
        assert_eq!(a.residual_norm, c.residual_norm);
    }

    #[test]
    fn rank_deficient_columns() {
        // Duplicate columns must not break the restricted solve.
        let b = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        let sol = nnls_solve(&b, &[1.0, 2.0], &NnlsConfig::default()).unwrap();
        assert!(sol.residual_norm < 1e-10);
        assert!(sol.x.iter().all(|&v| v >= 0.0));
    }
}
