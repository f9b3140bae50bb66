//! Dense LU with partial pivoting, stored column-major.
//!
//! Basis matrices of the game LP are sparse, so elimination skips zero
//! multipliers and the triangular solves skip zero entries of the
//! right-hand side.

use crate::error::{Error, Result};

const SINGULAR_PIVOT: f64 = 1e-11;

#[derive(Debug, Clone)]
pub(crate) struct DenseLu {
    n: usize,
    /// `P A = L U`; unit `L` below the diagonal, `U` on and above, column-major.
    lu: Vec<f64>,
    /// Row `i` of `P A` is row `perm[i]` of `A`.
    perm: Vec<usize>,
}

impl DenseLu {
    /// Factors the column-major `n x n` matrix `a`.
    pub(crate) fn factor(n: usize, mut a: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(a.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let col_k = k * n;
            let (mut p, mut best) = (k, a[col_k + k].abs());
            for i in k + 1..n {
                let v = a[col_k + i].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best < SINGULAR_PIVOT {
                return Err(Error::Numerical(format!(
                    "singular basis (pivot {best:.3e} in column {k})"
                )));
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    a.swap(j * n + p, j * n + k);
                }
            }
            let pivot = a[col_k + k];
            for i in k + 1..n {
                a[col_k + i] /= pivot;
            }
            let (head, tail) = a.split_at_mut((k + 1) * n);
            let lcol = &head[col_k + k + 1..col_k + n];
            for j in k + 1..n {
                let col_j = &mut tail[(j - k - 1) * n..(j - k) * n];
                let ukj = col_j[k];
                if ukj == 0.0 {
                    continue;
                }
                for (dst, &l) in col_j[k + 1..].iter_mut().zip(lcol) {
                    *dst -= l * ukj;
                }
            }
        }
        Ok(Self { n, lu: a, perm })
    }

    /// Solves `A x = b` in place.
    pub(crate) fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for k in 0..n {
            let yk = y[k];
            if yk == 0.0 {
                continue;
            }
            let col = &self.lu[k * n..(k + 1) * n];
            for i in k + 1..n {
                y[i] -= col[i] * yk;
            }
        }
        for k in (0..n).rev() {
            let col = &self.lu[k * n..(k + 1) * n];
            y[k] /= col[k];
            let yk = y[k];
            if yk == 0.0 {
                continue;
            }
            for i in 0..k {
                y[i] -= col[i] * yk;
            }
        }
        b.copy_from_slice(&y);
    }

    /// Solves `Aᵀ x = b` in place.
    pub(crate) fn solve_transpose(&self, b: &mut [f64]) {
        let n = self.n;
        let mut z = b.to_vec();
        for k in 0..n {
            let col = &self.lu[k * n..(k + 1) * n];
            let dot: f64 = col[..k].iter().zip(&z[..k]).map(|(u, z)| u * z).sum();
            z[k] = (z[k] - dot) / col[k];
        }
        for k in (0..n).rev() {
            let col = &self.lu[k * n..(k + 1) * n];
            let dot: f64 = col[k + 1..].iter().zip(&z[k + 1..]).map(|(l, w)| l * w).sum();
            z[k] -= dot;
        }
        for (i, &p) in self.perm.iter().enumerate() {
            b[p] = z[i];
        }
    }
}
