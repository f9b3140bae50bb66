//! Two-phase revised simplex.
//!
//! The problem is brought to standard form with one slack per inequality
//! row and one artificial per equality row (and per inequality row with a
//! negative right-hand side). Phase one minimizes the sum of artificials;
//! artificials left in the basis at zero are pivoted out where possible and
//! otherwise stay pinned at zero, which absorbs redundant equality rows.
//!
//! Both phases run on a right-hand side perturbed by `A δ` for a small
//! random `δ ≥ 0` on the structural and slack columns, which keeps basic
//! values away from zero. The true right-hand side is restored at the end
//! and any basic variable it drives negative is repaired by dual simplex
//! pivots from the (dual feasible) final basis.
//!
//! Pricing is Dantzig's most negative reduced cost. After
//! [`RevisedSimplex::bland_after`] consecutive degenerate pivots the solver
//! switches to Bland's smallest-index rule until a pivot makes progress.
//! The basis is kept as a dense LU factorization plus a product-form eta
//! file, refactored every [`RevisedSimplex::refactor_interval`] pivots.

use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lp::{LinearProgram, LpSolution, LpSolver, LpStatus};
use super::lu::DenseLu;
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;
use crate::{DUAL_TOL, PRIMAL_TOL};

const PIVOT_TOL: f64 = 1e-9;
const RATIO_TIE: f64 = 1e-12;
const DEGENERATE_STEP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RevisedSimplex {
    /// Total pivot budget over both phases; `None` scales with problem size.
    pub max_iterations: Option<usize>,
    pub refactor_interval: usize,
    pub bland_after: usize,
    /// Scale of the right-hand side perturbation relative to `max |b|`;
    /// zero disables it.
    pub perturbation: f64,
}

impl Default for RevisedSimplex {
    fn default() -> Self {
        Self {
            max_iterations: None,
            refactor_interval: 100,
            bland_after: 50,
            perturbation: 1e-7,
        }
    }
}

impl LpSolver for RevisedSimplex {
    fn name(&self) -> &'static str {
        "revised-simplex"
    }

    fn solve(&self, lp: &LinearProgram) -> Result<LpSolution> {
        let mut state = State::new(lp, self)?;
        state.run()
    }
}

struct Eta {
    row: usize,
    pivot: f64,
    others: Vec<(usize, f64)>,
}

struct Basis {
    lu: DenseLu,
    etas: Vec<Eta>,
}

impl Basis {
    fn ftran(&self, v: &mut [f64]) {
        self.lu.solve(v);
        for eta in &self.etas {
            let xr = v[eta.row] / eta.pivot;
            v[eta.row] = xr;
            if xr != 0.0 {
                for &(i, w) in &eta.others {
                    v[i] -= w * xr;
                }
            }
        }
    }

    fn btran(&self, v: &mut [f64]) {
        for eta in self.etas.iter().rev() {
            let dot: f64 = eta.others.iter().map(|&(i, w)| w * v[i]).sum();
            v[eta.row] = (v[eta.row] - dot) / eta.pivot;
        }
        self.lu.solve_transpose(v);
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    IterationLimit,
}

struct State<'a> {
    lp: &'a LinearProgram,
    options: &'a RevisedSimplex,
    a: SparseMatrix,
    m: usize,
    n: usize,
    m_eq: usize,
    art_row: Vec<usize>,
    art_sign: Vec<f64>,
    rhs: Vec<f64>,
    true_rhs: Vec<f64>,
    basic: Vec<usize>,
    pos: Vec<usize>,
    x_b: Vec<f64>,
    basis: Basis,
    iterations: usize,
    max_iterations: usize,
    degenerate_pivots: usize,
    bland_pivots: usize,
    refactorizations: usize,
}

impl<'a> State<'a> {
    fn new(lp: &'a LinearProgram, options: &'a RevisedSimplex) -> Result<Self> {
        let a = lp.a_eq.vstack(&lp.a_ub)?;
        let (m_eq, m_ub, n) = (lp.a_eq.rows(), lp.a_ub.rows(), lp.n_vars());
        let m = m_eq + m_ub;
        let true_rhs: Vec<f64> = lp.b_eq.iter().chain(&lp.b_ub).copied().collect();
        let rhs = perturbed(&a, m_eq, &true_rhs, options.perturbation);

        let mut art_row = Vec::new();
        let mut art_sign = Vec::new();
        let mut basic = vec![0usize; m];
        for i in 0..m {
            if i >= m_eq && rhs[i] >= 0.0 {
                basic[i] = n + (i - m_eq);
            } else {
                basic[i] = n + m_ub + art_row.len();
                art_row.push(i);
                art_sign.push(if rhs[i] < 0.0 { -1.0 } else { 1.0 });
            }
        }
        let total = n + m_ub + art_row.len();
        let mut pos = vec![usize::MAX; total];
        for (i, &j) in basic.iter().enumerate() {
            pos[j] = i;
        }
        let max_iterations = options
            .max_iterations
            .unwrap_or_else(|| 1_000 + 50 * (m + n));
        let mut state = Self {
            lp,
            options,
            a,
            m,
            n,
            m_eq,
            art_row,
            art_sign,
            rhs,
            true_rhs,
            basic,
            pos,
            x_b: vec![0.0; m],
            basis: Basis {
                lu: DenseLu::factor(0, Vec::new())?,
                etas: Vec::new(),
            },
            iterations: 0,
            max_iterations,
            degenerate_pivots: 0,
            bland_pivots: 0,
            refactorizations: 0,
        };
        state.refactor()?;
        Ok(state)
    }

    fn first_art(&self) -> usize {
        self.n + (self.m - self.m_eq)
    }

    fn is_art(&self, j: usize) -> bool {
        j >= self.first_art()
    }

    fn scatter_column(&self, j: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        if j < self.n {
            for (i, v) in self.a.col(j) {
                out[i] = v;
            }
        } else if j < self.first_art() {
            out[self.m_eq + (j - self.n)] = 1.0;
        } else {
            let k = j - self.first_art();
            out[self.art_row[k]] = self.art_sign[k];
        }
    }

    fn dot_column(&self, y: &[f64], j: usize) -> f64 {
        if j < self.n {
            self.a.col(j).map(|(i, v)| y[i] * v).sum()
        } else if j < self.first_art() {
            y[self.m_eq + (j - self.n)]
        } else {
            let k = j - self.first_art();
            y[self.art_row[k]] * self.art_sign[k]
        }
    }

    fn cost(&self, phase: Phase, j: usize) -> f64 {
        match phase {
            Phase::One => {
                if self.is_art(j) {
                    1.0
                } else {
                    0.0
                }
            }
            Phase::Two => {
                if j < self.n {
                    self.lp.c[j]
                } else {
                    0.0
                }
            }
        }
    }

    fn refactor(&mut self) -> Result<()> {
        let m = self.m;
        let mut dense = vec![0.0; m * m];
        let mut col = vec![0.0; m];
        for p in 0..m {
            self.scatter_column(self.basic[p], &mut col);
            dense[p * m..(p + 1) * m].copy_from_slice(&col);
        }
        self.basis = Basis {
            lu: DenseLu::factor(m, dense)?,
            etas: Vec::new(),
        };
        let mut x = self.rhs.clone();
        self.basis.ftran(&mut x);
        for v in &mut x {
            if *v < 0.0 && *v > -PRIMAL_TOL {
                *v = 0.0;
            }
        }
        self.x_b = x;
        self.refactorizations += 1;
        Ok(())
    }

    fn duals(&self, phase: Phase) -> Vec<f64> {
        let mut y: Vec<f64> = self.basic.iter().map(|&j| self.cost(phase, j)).collect();
        self.basis.btran(&mut y);
        y
    }

    fn pivot(&mut self, r: usize, q: usize, w: &[f64], theta: f64) -> Result<()> {
        for (x, &wi) in self.x_b.iter_mut().zip(w) {
            *x -= theta * wi;
        }
        self.x_b[r] = theta;
        let leaving = self.basic[r];
        self.pos[leaving] = usize::MAX;
        self.basic[r] = q;
        self.pos[q] = r;
        let others = w
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i != r && v != 0.0)
            .map(|(i, &v)| (i, v))
            .collect();
        self.basis.etas.push(Eta {
            row: r,
            pivot: w[r],
            others,
        });
        self.iterations += 1;
        if self.basis.etas.len() >= self.options.refactor_interval {
            self.refactor()?;
        }
        Ok(())
    }

    fn run_phase(&mut self, phase: Phase) -> Result<PhaseEnd> {
        let mut consecutive_degenerate = 0usize;
        let mut w = vec![0.0; self.m];
        loop {
            if self.iterations >= self.max_iterations {
                return Ok(PhaseEnd::IterationLimit);
            }
            let bland = consecutive_degenerate >= self.options.bland_after;
            let y = self.duals(phase);

            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.first_art() {
                if self.pos[j] != usize::MAX {
                    continue;
                }
                let d = self.cost(phase, j) - self.dot_column(&y, j);
                if d >= -DUAL_TOL {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                if entering.map_or(true, |(_, best)| d < best) {
                    entering = Some((j, d));
                }
            }
            let Some((q, _)) = entering else {
                return Ok(PhaseEnd::Optimal);
            };

            self.scatter_column(q, &mut w);
            self.basis.ftran(&mut w);

            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let wi = w[i];
                let ratio = if phase == Phase::Two && self.is_art(self.basic[i]) {
                    if wi.abs() <= PIVOT_TOL {
                        continue;
                    }
                    0.0
                } else if wi > PIVOT_TOL {
                    self.x_b[i].max(0.0) / wi
                } else {
                    continue;
                };
                let better = match leave {
                    None => true,
                    Some((r, best)) => {
                        if ratio < best - RATIO_TIE {
                            true
                        } else if ratio <= best + RATIO_TIE {
                            if bland {
                                self.basic[i] < self.basic[r]
                            } else {
                                wi.abs() > w[r].abs()
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, theta)) = leave else {
                return Ok(PhaseEnd::Unbounded);
            };

            if theta <= DEGENERATE_STEP {
                consecutive_degenerate += 1;
                self.degenerate_pivots += 1;
            } else {
                consecutive_degenerate = 0;
            }
            if bland {
                self.bland_pivots += 1;
            }
            self.pivot(r, q, &w, theta)?;
        }
    }

    /// Pivots zero-level artificials out of the basis where a structural or
    /// slack column can replace them.
    fn drive_out_artificials(&mut self) -> Result<()> {
        let mut w = vec![0.0; self.m];
        for r in 0..self.m {
            if !self.is_art(self.basic[r]) {
                continue;
            }
            let mut rho = vec![0.0; self.m];
            rho[r] = 1.0;
            self.basis.btran(&mut rho);
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.first_art() {
                if self.pos[j] != usize::MAX {
                    continue;
                }
                let v = self.dot_column(&rho, j).abs();
                if v > 1e-7 && best.map_or(true, |(_, b)| v > b) {
                    best = Some((j, v));
                }
            }
            if let Some((q, _)) = best {
                self.scatter_column(q, &mut w);
                self.basis.ftran(&mut w);
                let theta = self.x_b[r] / w[r];
                self.pivot(r, q, &w, theta)?;
            }
        }
        Ok(())
    }

    /// Dual simplex pivots on the most negative basic variable until the
    /// basis is primal feasible again.
    fn dual_cleanup(&mut self) -> Result<LpStatus> {
        let mut w = vec![0.0; self.m];
        let mut cleaned = 0usize;
        loop {
            let leave = self
                .x_b
                .iter()
                .enumerate()
                .filter(|&(i, &x)| x < -PRIMAL_TOL && !self.is_art(self.basic[i]))
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i);
            let Some(r) = leave else {
                for x in &mut self.x_b {
                    if *x < 0.0 && *x >= -PRIMAL_TOL {
                        *x = 0.0;
                    }
                }
                if cleaned > 0 {
                    debug!("dual cleanup took {cleaned} pivots");
                }
                return Ok(LpStatus::Optimal);
            };
            if self.iterations >= self.max_iterations {
                return Ok(LpStatus::IterationLimit);
            }
            let y = self.duals(Phase::Two);
            let mut rho = vec![0.0; self.m];
            rho[r] = 1.0;
            self.basis.btran(&mut rho);
            let mut entering: Option<(usize, f64)> = None;
            for j in 0..self.first_art() {
                if self.pos[j] != usize::MAX {
                    continue;
                }
                let alpha = self.dot_column(&rho, j);
                if alpha >= -PIVOT_TOL {
                    continue;
                }
                let d = (self.cost(Phase::Two, j) - self.dot_column(&y, j)).max(0.0);
                let ratio = d / -alpha;
                if entering.map_or(true, |(_, best)| ratio < best) {
                    entering = Some((j, ratio));
                }
            }
            let Some((q, _)) = entering else {
                return Ok(LpStatus::Infeasible);
            };
            self.scatter_column(q, &mut w);
            self.basis.ftran(&mut w);
            let theta = self.x_b[r] / w[r];
            self.pivot(r, q, &w, theta)?;
            cleaned += 1;
        }
    }

    fn infeasibility(&self) -> f64 {
        self.basic
            .iter()
            .zip(&self.x_b)
            .filter(|(&j, _)| self.is_art(j))
            .map(|(_, &x)| x.abs())
            .sum()
    }

    fn run(&mut self) -> Result<LpSolution> {
        let scale = self.rhs.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
        let mut status = LpStatus::Optimal;

        if !self.art_row.is_empty() {
            match self.run_phase(Phase::One)? {
                PhaseEnd::Optimal => {}
                PhaseEnd::IterationLimit => status = LpStatus::IterationLimit,
                PhaseEnd::Unbounded => {
                    return Err(Error::Numerical("phase one reported an unbounded ray".into()))
                }
            }
            if status == LpStatus::Optimal {
                self.refactor()?;
                if self.infeasibility() > PRIMAL_TOL * scale {
                    status = LpStatus::Infeasible;
                } else {
                    self.drive_out_artificials()?;
                }
            }
            debug!(
                "phase one done after {} pivots, infeasibility {:.3e}",
                self.iterations,
                self.infeasibility()
            );
        }

        if status == LpStatus::Optimal {
            status = match self.run_phase(Phase::Two)? {
                PhaseEnd::Optimal => LpStatus::Optimal,
                PhaseEnd::Unbounded => LpStatus::Unbounded,
                PhaseEnd::IterationLimit => LpStatus::IterationLimit,
            };
        }
        self.rhs = self.true_rhs.clone();
        self.refactor()?;
        if status == LpStatus::Optimal {
            status = self.dual_cleanup()?;
        }

        let mut x = vec![0.0; self.n];
        for (i, &j) in self.basic.iter().enumerate() {
            if j < self.n {
                x[j] = self.x_b[i];
            }
        }
        let y = self.duals(Phase::Two);
        let min_reduced_cost = (0..self.first_art())
            .filter(|&j| self.pos[j] == usize::MAX)
            .map(|j| self.cost(Phase::Two, j) - self.dot_column(&y, j))
            .fold(f64::INFINITY, f64::min);
        let min_reduced_cost = if min_reduced_cost.is_finite() { min_reduced_cost } else { 0.0 };
        let primal_residual = self.lp.primal_residual(&x);
        if status == LpStatus::Optimal && primal_residual > PRIMAL_TOL * scale {
            return Err(Error::Numerical(format!(
                "optimal basis violates constraints by {primal_residual:.3e}"
            )));
        }
        debug!(
            "simplex {}: {} pivots ({} degenerate, {} Bland), {} refactorizations",
            status.as_str(),
            self.iterations,
            self.degenerate_pivots,
            self.bland_pivots,
            self.refactorizations
        );
        Ok(LpSolution {
            status,
            objective: self.lp.objective(&x),
            x,
            duals_eq: y[..self.m_eq].to_vec(),
            duals_ub: y[self.m_eq..].to_vec(),
            iterations: self.iterations,
            degenerate_pivots: self.degenerate_pivots,
            bland_pivots: self.bland_pivots,
            refactorizations: self.refactorizations,
            primal_residual,
            min_reduced_cost,
        })
    }
}

/// `b + A δ` for a random `δ ≥ 0` over structural and slack columns, with
/// entries of `δ` in `[scale, 2 scale] · max(1, max |b|)`.
fn perturbed(a: &SparseMatrix, m_eq: usize, b: &[f64], scale: f64) -> Vec<f64> {
    let mut rhs = b.to_vec();
    if scale <= 0.0 {
        return rhs;
    }
    let size = b.iter().fold(1.0_f64, |acc, v| acc.max(v.abs())) * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for j in 0..a.cols() {
        let delta = size * rng.gen_range(1.0..2.0);
        for (i, v) in a.col(j) {
            rhs[i] += v * delta;
        }
    }
    for v in &mut rhs[m_eq..] {
        *v += size * rng.gen_range(1.0..2.0);
    }
    rhs
}
