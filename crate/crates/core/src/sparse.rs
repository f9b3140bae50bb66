//! Compressed sparse column matrices.
//!
//! The game matrices are very sparse (two nonzeros per column of `A`, one
//! per column of `D`), so everything upstream of the solver's basis
//! factorization stays in this format.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            col_ptr: vec![0; cols + 1],
            row_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are
    /// summed; explicit zeros are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        for &(r, c, _) in &entries {
            if r >= rows || c >= cols {
                return Err(Error::Dimension(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
        }
        entries.sort_by_key(|&(r, c, _)| (c, r));

        let mut col_ptr = vec![0usize; cols + 1];
        let mut row_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().expect("previous entry") += v;
                continue;
            }
            row_idx.push(r);
            values.push(v);
            col_ptr[c + 1] += 1;
            last = Some((r, c));
        }
        for c in 0..cols {
            col_ptr[c + 1] += col_ptr[c];
        }
        let mut m = Self {
            rows,
            cols,
            col_ptr,
            row_idx,
            values,
        };
        m.prune_zeros();
        Ok(m)
    }

    pub fn from_dense(dense: &[Vec<f64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let triplets = dense.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(move |(c, &v)| (r, c, v))
        });
        Self::from_triplets(rows, cols, triplets).expect("dense input is rectangular")
    }

    fn prune_zeros(&mut self) {
        if !self.values.iter().any(|&v| v == 0.0) {
            return;
        }
        let mut col_ptr = vec![0usize; self.cols + 1];
        let mut row_idx = Vec::with_capacity(self.row_idx.len());
        let mut values = Vec::with_capacity(self.values.len());
        for c in 0..self.cols {
            for k in self.col_ptr[c]..self.col_ptr[c + 1] {
                if self.values[k] != 0.0 {
                    row_idx.push(self.row_idx[k]);
                    values.push(self.values[k]);
                }
            }
            col_ptr[c + 1] = row_idx.len();
        }
        self.col_ptr = col_ptr;
        self.row_idx = row_idx;
        self.values = values;
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

    /// Nonzeros of column `c` as `(row, value)` pairs, in increasing row order.
    pub fn col(&self, c: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_ptr[c]..self.col_ptr[c + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.col(c).find(|&(i, _)| i == r).map_or(0.0, |(_, v)| v)
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "vector length must match columns");
        let mut out = vec![0.0; self.rows];
        for (c, &xc) in x.iter().enumerate() {
            if xc == 0.0 {
                continue;
            }
            for (r, v) in self.col(c) {
                out[r] += v * xc;
            }
        }
        out
    }

    /// `selfᵀ * y`.
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows, "vector length must match rows");
        (0..self.cols)
            .map(|c| self.col(c).map(|(r, v)| v * y[r]).sum())
            .collect()
    }

    /// `self * other`.
    pub fn matmul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut triplets = Vec::new();
        for c in 0..other.cols {
            for (k, vk) in other.col(c) {
                for (r, v) in self.col(k) {
                    triplets.push((r, c, v * vk));
                }
            }
        }
        SparseMatrix::from_triplets(self.rows, other.cols, triplets)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack {} columns on {} columns",
                self.cols, other.cols
            )));
        }
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for c in 0..self.cols {
            triplets.extend(self.col(c).map(|(r, v)| (r, c, v)));
            triplets.extend(other.col(c).map(|(r, v)| (r + self.rows, c, v)));
        }
        SparseMatrix::from_triplets(self.rows + other.rows, self.cols, triplets)
    }

    /// Appends columns given as `(row, value)` lists.
    pub fn with_extra_columns(&self, extra: &[Vec<(usize, f64)>]) -> Result<SparseMatrix> {
        let mut triplets = Vec::with_capacity(self.nnz() + extra.len());
        for c in 0..self.cols {
            triplets.extend(self.col(c).map(|(r, v)| (r, c, v)));
        }
        for (k, col) in extra.iter().enumerate() {
            triplets.extend(col.iter().map(|&(r, v)| (r, self.cols + k, v)));
        }
        SparseMatrix::from_triplets(self.rows, self.cols + extra.len(), triplets)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.cols]; self.rows];
        for c in 0..self.cols {
            for (r, v) in self.col(c) {
                out[r][c] = v;
            }
        }
        out
    }
}
