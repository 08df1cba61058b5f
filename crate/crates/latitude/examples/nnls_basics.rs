//! Nonnegative least squares on a small overdetermined system.

use latitude::{nnls_solve, DenseMatrix, NnlsConfig};

fn main() {
    // Unconstrained least squares would drive the second coefficient
    // negative; the NNLS optimum pins it at zero instead.
    let b = DenseMatrix::from_rows(&[
        vec![2.0, 1.0],
        vec![1.0, 2.0],
        vec![1.0, 1.0],
    ])
    .unwrap();
    let rhs = [1.0, -0.2, 0.4];

    let sol = nnls_solve(&b, &rhs, &NnlsConfig::default()).unwrap();
    println!("x = {:?}", sol.x);
    println!("residual norm = {:.6}", sol.residual_norm);
    println!("converged = {}", sol.converged);
    assert!(sol.x.iter().all(|&v| v >= 0.0));

    // The config exposes the KKT tolerance and the iteration budget; the
    // defaults are derived from the input scale.
    let tight = NnlsConfig {
        kkt_tolerance: Some(1e-14),
        max_iterations: Some(50),
    };
    let sol2 = nnls_solve(&b, &rhs, &tight).unwrap();
    assert_eq!(sol.x, sol2.x);
}
