//! Dense row-major matrices and the semiring products.
//!
//! `DenseMatrix` is the universal data carrier of the crate. Besides the
//! usual product it provides the max-times (subtropical) product, where the
//! sum over rank-1 terms is replaced by an element-wise maximum.

use crate::error::{Error, Result};

/// A dense real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major values, rejecting non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if values.len() != rows * cols {
            return Err(Error::BadLength {
                rows,
                cols,
                len: values.len(),
            });
        }
        for (idx, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: idx / cols,
                    col: idx % cols,
                    value: v,
                });
            }
        }
        Ok(Self { rows, cols, values })
    }

    /// Builds a matrix from nested rows, rejecting ragged input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let cols = rows[0].len();
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::BadLength {
                    rows: rows.len(),
                    cols,
                    len: i * cols + r.len(),
                });
            }
            values.extend_from_slice(r);
        }
        Self::from_vec(rows.len(), cols, values)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.values[i * n + i] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * self.cols + j] = v;
    }

    /// Borrow row `i` as a slice.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn set_row(&mut self, i: usize, row: &[f64]) {
        debug_assert_eq!(row.len(), self.cols);
        self.values[i * self.cols..(i + 1) * self.cols].copy_from_slice(row);
    }

    /// Copy column `j` into a new vector.
    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_col(&mut self, j: usize, col: &[f64]) {
        debug_assert_eq!(col.len(), self.rows);
        for i in 0..self.rows {
            self.set(i, j, col[i]);
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Checks that every entry is >= 0.
    pub fn ensure_nonnegative(&self) -> Result<()> {
        for (idx, &v) in self.values.iter().enumerate() {
            if v < 0.0 {
                return Err(Error::NegativeEntry {
                    row: idx / self.cols,
                    col: idx % self.cols,
                    value: v,
                });
            }
        }
        Ok(())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn check_product_dims(&self, other: &DenseMatrix, op: &'static str) -> Result<()> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op,
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(())
    }
}

/// Standard matrix product `(BC)_{ij} = sum_s B_is C_sj`.
pub fn matmul(b: &DenseMatrix, c: &DenseMatrix) -> Result<DenseMatrix> {
    b.check_product_dims(c, "matmul")?;
    let (n, k, m) = (b.rows(), b.cols(), c.cols());
    let mut out = DenseMatrix::zeros(n, m);
    for i in 0..n {
        let bi = b.row(i);
        for s in 0..k {
            let bis = bi[s];
            if bis == 0.0 {
                continue;
            }
            let cs = c.row(s);
            let oi = &mut out.values[i * m..(i + 1) * m];
            for j in 0..m {
                oi[j] += bis * cs[j];
            }
        }
    }
    Ok(out)
}

/// Max-times (subtropical) product `(B (x) C)_{ij} = max_s B_is C_sj`.
///
/// Both factors must be nonnegative; the product is then nonnegative and
/// bounded above entrywise by the standard product.
pub fn maxtimes_product(b: &DenseMatrix, c: &DenseMatrix) -> Result<DenseMatrix> {
    b.check_product_dims(c, "maxtimes_product")?;
    b.ensure_nonnegative()?;
    c.ensure_nonnegative()?;
    let (n, k, m) = (b.rows(), b.cols(), c.cols());
    let mut out = DenseMatrix::zeros(n, m);
    for i in 0..n {
        let bi = b.row(i);
        let oi = &mut out.values[i * m..(i + 1) * m];
        for j in 0..m {
            oi[j] = f64::NEG_INFINITY;
        }
        for s in 0..k {
            let bis = bi[s];
            let cs = c.row(s);
            for j in 0..m {
                let v = bis * cs[j];
                if v > oi[j] {
                    oi[j] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Absolute and relative Frobenius reconstruction error.
///
/// The relative error divides by `||A||_F`; when both matrices are zero the
/// pair `(0, 0)` is returned, and a zero-norm reference with nonzero residual
/// is rejected.
pub fn frobenius_error(a: &DenseMatrix, ahat: &DenseMatrix) -> Result<(f64, f64)> {
    if a.rows() != ahat.rows() || a.cols() != ahat.cols() {
        return Err(Error::DimensionMismatch {
            op: "frobenius_error",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: ahat.rows(),
            right_cols: ahat.cols(),
        });
    }
    let abs = a
        .values()
        .iter()
        .zip(ahat.values())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let norm = a.frobenius_norm();
    if norm == 0.0 {
        if abs == 0.0 {
            return Ok((0.0, 0.0));
        }
        return Err(Error::ZeroNormReference);
    }
    Ok((abs, abs / norm))
}
