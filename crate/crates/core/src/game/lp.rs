use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// `minimize cᵀx  s.t.  A_eq x = b_eq,  A_ub x ≤ b_ub,  x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub c: Vec<f64>,
    pub a_eq: SparseMatrix,
    pub b_eq: Vec<f64>,
    pub a_ub: SparseMatrix,
    pub b_ub: Vec<f64>,
}

impl LinearProgram {
    pub fn new(
        c: Vec<f64>,
        a_eq: SparseMatrix,
        b_eq: Vec<f64>,
        a_ub: SparseMatrix,
        b_ub: Vec<f64>,
    ) -> Result<Self> {
        let n = c.len();
        if a_eq.cols() != n || a_ub.cols() != n {
            return Err(Error::Dimension(format!(
                "{n} costs but constraint blocks have {} and {} columns",
                a_eq.cols(),
                a_ub.cols()
            )));
        }
        if a_eq.rows() != b_eq.len() || a_ub.rows() != b_ub.len() {
            return Err(Error::Dimension(format!(
                "right-hand sides of length {} and {} for {} and {} rows",
                b_eq.len(),
                b_ub.len(),
                a_eq.rows(),
                a_ub.rows()
            )));
        }
        if c.iter().chain(&b_eq).chain(&b_ub).any(|v| !v.is_finite()) {
            return Err(Error::Argument("LP data contains non-finite values".into()));
        }
        Ok(Self {
            c,
            a_eq,
            b_eq,
            a_ub,
            b_ub,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.c.len()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.c.iter().zip(x).map(|(c, x)| c * x).sum()
    }

    /// Largest violation of the equality, inequality and sign constraints.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        let eq = self
            .a_eq
            .mul_vec(x)
            .iter()
            .zip(&self.b_eq)
            .map(|(ax, b)| (ax - b).abs())
            .fold(0.0, f64::max);
        let ub = self
            .a_ub
            .mul_vec(x)
            .iter()
            .zip(&self.b_ub)
            .map(|(ax, b)| (ax - b).max(0.0))
            .fold(0.0, f64::max);
        let sign = x.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
        eq.max(ub).max(sign)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl LpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::IterationLimit => "iteration_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Final iterate (optimal vertex when `status` is optimal).
    pub x: Vec<f64>,
    pub objective: f64,
    /// Row duals `y` with `cᵀ − yᵀA ≥ 0` at optimality.
    pub duals_eq: Vec<f64>,
    pub duals_ub: Vec<f64>,
    pub iterations: usize,
    pub degenerate_pivots: usize,
    pub bland_pivots: usize,
    pub refactorizations: usize,
    pub primal_residual: f64,
    /// Smallest reduced cost over eligible nonbasic columns.
    pub min_reduced_cost: f64,
}

/// Anything that can solve a [`LinearProgram`].
pub trait LpSolver {
    fn name(&self) -> &'static str;
    fn solve(&self, lp: &LinearProgram) -> Result<LpSolution>;
}
