//! Mixed linear-tropical matrix factorization.
//!
//! A nonnegative matrix is modeled per entry as a convex combination of the
//! standard product `BC` and the max-times (subtropical) product `B (x) C`
//! of two nonnegative factors, gated by `alpha_ij = sigma(co_i + ro_j)`.
//! The crate provides the model and its products ([`model`], [`matrix`]),
//! the alternating solver ([`solver`]), its NNLS and NMF building blocks
//! ([`nnls`], [`nmf`]), SVD/NMF baselines ([`baselines`]), a synthetic
//! experiment harness ([`synth`]) and CSV/CLI plumbing ([`io`], [`cli`]).
//!
//! See the `examples/` directory for runnable walkthroughs of each
//! capability.

pub mod baselines;
pub mod cli;
pub mod error;
pub mod io;
pub mod matrix;
pub mod model;
pub mod nmf;
pub mod nnls;
pub mod solver;
pub mod synth;

pub use error::{Error, Result};
pub use matrix::{frobenius_error, matmul, maxtimes_product, DenseMatrix};
pub use model::{
    alpha_matrix, constant_factor_alpha, mixed_product, mixed_product_with_alpha, sigmoid,
    MixedFactorization, ParamVectors,
};
pub use nmf::{nmf_fit, random_factors, NmfConfig};
pub use nnls::{nnls_solve, NnlsConfig, NnlsSolution};
pub use solver::{latitude_fit, FitReport, InitMode, SolverConfig};
pub use synth::{gen_planted, sweep, SweepAxis, SynthMode, SynthSpec};
