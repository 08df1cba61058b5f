//! The mixed linear-tropical model: factors plus sigmoid-gated parameters.
//!
//! An entry of the mixed product is the convex combination
//! `alpha_ij * (B (x) C)_ij + (1 - alpha_ij) * (BC)_ij`, where
//! `alpha_ij = sigma(co_i + ro_j)` blends the max-times and standard
//! products per entry.

use crate::error::{Error, Result};
use crate::matrix::{matmul, maxtimes_product, DenseMatrix};

/// Logistic sigmoid `1 / (1 + e^{-x})`.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Row and column parameter vectors, bounded by `bound` in absolute value.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVectors {
    co: Vec<f64>,
    ro: Vec<f64>,
    bound: f64,
}

impl ParamVectors {
    /// The bound the original experiments used; sigma(5) = 0.9933 already
    /// saturates the gate.
    pub const DEFAULT_BOUND: f64 = 5.0;

    pub fn new(co: Vec<f64>, ro: Vec<f64>, bound: f64) -> Result<Self> {
        if !(bound > 0.0) || !bound.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "parameter bound must be a positive finite number, got {bound}"
            )));
        }
        if co.is_empty() || ro.is_empty() {
            return Err(Error::InvalidConfig(
                "parameter vectors must be non-empty".into(),
            ));
        }
        for (which, v) in [("co", &co), ("ro", &ro)] {
            for (i, &x) in v.iter().enumerate() {
                if !x.is_finite() || x.abs() > bound {
                    return Err(Error::InvalidConfig(format!(
                        "{which}[{i}] = {x} is outside [-{bound}, {bound}]"
                    )));
                }
            }
        }
        Ok(Self { co, ro, bound })
    }

    /// All parameters at `-bound`: the mixed product is then as close to the
    /// plain product as the model allows.
    pub fn all_clamped_low(n: usize, m: usize, bound: f64) -> Result<Self> {
        Self::new(vec![-bound; n], vec![-bound; m], bound)
    }

    pub fn co(&self) -> &[f64] {
        &self.co
    }

    pub fn ro(&self) -> &[f64] {
        &self.ro
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }
}

/// Gate matrix `alpha_ij = sigma(co_i + ro_j)`; every entry lies in (0, 1).
pub fn alpha_matrix(params: &ParamVectors) -> DenseMatrix {
    let (n, m) = (params.co.len(), params.ro.len());
    let mut out = DenseMatrix::zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            out.set(i, j, sigmoid(params.co[i] + params.ro[j]));
        }
    }
    out
}

/// A full model: nonnegative factors `B` (n x k), `C` (k x m) and the gate
/// parameters.
#[derive(Debug, Clone)]
pub struct MixedFactorization {
    pub b: DenseMatrix,
    pub c: DenseMatrix,
    pub params: ParamVectors,
}

impl MixedFactorization {
    pub fn new(b: DenseMatrix, c: DenseMatrix, params: ParamVectors) -> Result<Self> {
        if b.cols() != c.rows() {
            return Err(Error::DimensionMismatch {
                op: "mixed factorization",
                left_rows: b.rows(),
                left_cols: b.cols(),
                right_rows: c.rows(),
                right_cols: c.cols(),
            });
        }
        b.ensure_nonnegative()?;
        c.ensure_nonnegative()?;
        if params.co.len() != b.rows() || params.ro.len() != c.cols() {
            return Err(Error::InvalidConfig(format!(
                "parameter lengths ({}, {}) do not match factor dimensions ({}, {})",
                params.co.len(),
                params.ro.len(),
                b.rows(),
                c.cols()
            )));
        }
        Ok(Self { b, c, params })
    }

    pub fn rank(&self) -> usize {
        self.b.cols()
    }
}

/// The mixed linear-tropical product of a factorization.
pub fn mixed_product(fact: &MixedFactorization) -> Result<DenseMatrix> {
    let alpha = alpha_matrix(&fact.params);
    mixed_product_with_alpha(&fact.b, &fact.c, &alpha)
}

/// Per-entry convex combination of the max-times and standard products with
/// an explicit gate matrix.
pub fn mixed_product_with_alpha(
    b: &DenseMatrix,
    c: &DenseMatrix,
    alpha: &DenseMatrix,
) -> Result<DenseMatrix> {
    let mt = maxtimes_product(b, c)?;
    let st = matmul(b, c)?;
    if alpha.rows() != mt.rows() || alpha.cols() != mt.cols() {
        return Err(Error::DimensionMismatch {
            op: "mixed_product_with_alpha",
            left_rows: mt.rows(),
            left_cols: mt.cols(),
            right_rows: alpha.rows(),
            right_cols: alpha.cols(),
        });
    }
    let cols = alpha.cols();
    for (idx, &a) in alpha.values().iter().enumerate() {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::AlphaOutOfRange {
                row: idx / cols,
                col: idx % cols,
                value: a,
            });
        }
    }
    let mut out = DenseMatrix::zeros(mt.rows(), mt.cols());
    for i in 0..mt.rows() {
        for j in 0..mt.cols() {
            let a = alpha.get(i, j);
            let (lo, hi) = (mt.get(i, j), st.get(i, j));
            // Coincident products (always the case at k = 1) collapse
            // exactly, without convex-combination rounding.
            let v = if lo == hi { hi } else { a * lo + (1.0 - a) * hi };
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Exact-fit gate for constant factors:
/// `alpha_ij = (A_ij - (BC)_ij) / ((B (x) C)_ij - (BC)_ij)`.
///
/// Every entry of `A` must lie strictly inside the bracket formed by the two
/// products; coincident products make the formula undefined and are rejected.
pub fn constant_factor_alpha(
    a: &DenseMatrix,
    b: &DenseMatrix,
    c: &DenseMatrix,
) -> Result<DenseMatrix> {
    let mt = maxtimes_product(b, c)?;
    let st = matmul(b, c)?;
    if a.rows() != mt.rows() || a.cols() != mt.cols() {
        return Err(Error::DimensionMismatch {
            op: "constant_factor_alpha",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: mt.rows(),
            right_cols: mt.cols(),
        });
    }
    let mut out = DenseMatrix::zeros(a.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let lo = mt.get(i, j);
            let hi = st.get(i, j);
            let denom = lo - hi;
            if denom == 0.0 {
                return Err(Error::DegenerateEntry { row: i, col: j });
            }
            let v = a.get(i, j);
            let alpha = (v - hi) / denom;
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::OutOfBracket {
                    row: i,
                    col: j,
                    value: v,
                    lo,
                    hi,
                });
            }
            out.set(i, j, alpha);
        }
    }
    Ok(out)
}
