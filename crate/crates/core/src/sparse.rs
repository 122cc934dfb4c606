//! Compressed-sparse-column matrices sized for desk-scale LP instances.
//!
//! The solver only needs matrix-vector products with A and its transpose,
//! column access, the operator 1-norm (max column absolute sum), a spectral
//! norm estimate, and column submatrix extraction, so that is all this
//! module provides.

use crate::error::{Error, Result};
use crate::vecops;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>, // cols + 1 entries
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets.
    ///
    /// Rejects out-of-range indices, non-finite values, and duplicate
    /// positions. Explicit zeros are accepted (and checked for duplication)
    /// but not stored.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidInstance(format!(
                    "triplet ({r}, {c}, {v}) outside a {rows}x{cols} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "non-finite entry {v} at ({r}, {c})"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> =
            triplets.iter().map(|&(r, c, v)| (c, r, v)).collect();
        sorted.sort_by_key(|&(c, r, _)| (c, r));
        for pair in sorted.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(Error::InvalidInstance(format!(
                    "duplicate entry at position ({}, {})",
                    pair[0].1, pair[0].0
                )));
            }
        }
        let mut col_ptr = vec![0usize; cols + 1];
        let mut row_idx = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        for &(c, r, v) in &sorted {
            if v != 0.0 {
                col_ptr[c + 1] += 1;
                row_idx.push(r);
                values.push(v);
            }
        }
        for j in 0..cols {
            col_ptr[j + 1] += col_ptr[j];
        }
        Ok(SparseMatrix {
            rows,
            cols,
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Builds a matrix from a dense row-major table; zeros are dropped.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch("ragged dense matrix".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        SparseMatrix::from_triplets(m, n, &triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// True iff the matrix has no stored (nonzero) entries.
    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Iterates over the `(row, value)` pairs of column `j`.
    pub fn col(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.col_ptr[j];
        let hi = self.col_ptr[j + 1];
        self.row_idx[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    /// All stored entries as `(row, col, value)`, column-major sorted.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for j in 0..self.cols {
            for (i, v) in self.col(j) {
                out.push((i, j, v));
            }
        }
        out
    }

    /// `out = A x`.
    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        out.fill(0.0);
        for j in 0..self.cols {
            let xj = x[j];
            if xj != 0.0 {
                for (i, v) in self.col(j) {
                    out[i] += v * xj;
                }
            }
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.matvec_into(x, &mut out);
        out
    }

    /// `out = A^T y`.
    pub fn tr_matvec_into(&self, y: &[f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        for j in 0..self.cols {
            out[j] = self.col_dot(j, y);
        }
    }

    pub fn tr_matvec(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        self.tr_matvec_into(y, &mut out);
        out
    }

    /// Inner product of column `j` with `y`.
    pub fn col_dot(&self, j: usize, y: &[f64]) -> f64 {
        self.col(j).map(|(i, v)| v * y[i]).sum()
    }

    /// Operator 1-norm: the largest column absolute sum. Zero for a matrix
    /// with no stored entries.
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| self.col(j).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// New matrix keeping the listed columns, in the given order.
    pub fn column_submatrix(&self, keep: &[usize]) -> SparseMatrix {
        let mut col_ptr = vec![0usize; keep.len() + 1];
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        for (jj, &j) in keep.iter().enumerate() {
            assert!(j < self.cols, "column index out of range");
            for (i, v) in self.col(j) {
                row_idx.push(i);
                values.push(v);
            }
            col_ptr[jj + 1] = row_idx.len();
        }
        SparseMatrix {
            rows: self.rows,
            cols: keep.len(),
            col_ptr,
            row_idx,
            values,
        }
    }

    /// Horizontal concatenation `[self | I_m | -I_m]`, used by the phase-one
    /// system.
    pub fn hstack_signed_identities(&self) -> SparseMatrix {
        let m = self.rows;
        let mut col_ptr = self.col_ptr.clone();
        let mut row_idx = self.row_idx.clone();
        let mut values = self.values.clone();
        for sign in [1.0, -1.0] {
            for i in 0..m {
                row_idx.push(i);
                values.push(sign);
                col_ptr.push(row_idx.len());
            }
        }
        SparseMatrix {
            rows: m,
            cols: self.cols + 2 * m,
            col_ptr,
            row_idx,
            values,
        }
    }

    /// Upper estimate of the squared spectral norm `lambda_max(A^T A)`.
    ///
    /// Power iteration on A^T A from a fixed pseudo-random start vector
    /// (deterministic across runs), run until the Rayleigh quotient settles
    /// to ~0.1% or 500 rounds, then inflated by 5% to absorb the remaining
    /// iteration error.
    pub fn spectral_norm_sq_upper(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Fixed-seed LCG start vector: deterministic, and in practice never
        // orthogonal to the dominant eigenspace.
        let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut v: Vec<f64> = (0..self.cols).map(|_| next()).collect();
        let norm = vecops::norm2(&v);
        v.iter_mut().for_each(|e| *e /= norm);
        let mut av = vec![0.0; self.rows];
        let mut rho = 0.0f64;
        let mut prev = -1.0f64;
        for _ in 0..500 {
            self.matvec_into(&v, &mut av);
            rho = vecops::dot(&av, &av); // Rayleigh quotient of A^T A at unit v
            if (rho - prev).abs() <= 1e-3 * rho {
                break;
            }
            prev = rho;
            self.tr_matvec_into(&av, &mut v);
            let norm = vecops::norm2(&v);
            if norm == 0.0 {
                break; // v fell into the kernel; rho already holds the quotient
            }
            v.iter_mut().for_each(|e| *e /= norm);
        }
        (rho * 1.05).max(f64::MIN_POSITIVE)
    }

    /// Dense row-major copy, for tests and the exact oracles.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.cols]; self.rows];
        for j in 0..self.cols {
            for (i, v) in self.col(j) {
                out[i][j] = v;
            }
        }
        out
    }
}
