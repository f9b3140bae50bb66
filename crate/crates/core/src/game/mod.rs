//! The ambush game as a linear program.
//!
//! BLUE picks a unit origin → destination flow `p`; RED picks an ambush
//! area. With `W` the area × edge loss matrix, BLUE solves
//!
//! ```text
//! minimize (1 − λ) z + λ Σ_e p_e len_e
//! s.t.     W p − 1 z ≤ 0,  A p = b,  p ≥ 0,  z ≥ 0
//! ```
//!
//! The LP duals of the `W p ≤ z` rows, rescaled to sum to one, are RED's
//! equilibrium strategy.

pub mod lp;
mod lu;
pub mod simplex;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use lp::{LinearProgram, LpSolution, LpSolver, LpStatus};
pub use simplex::RevisedSimplex;

use crate::environment::{AmbushAreaSet, OutcomeMap};
use crate::error::{Error, Result};
use crate::network::{assemble_area_matrix, assemble_outcome_matrix, FlowSystem, Network};
use crate::sparse::SparseMatrix;
use crate::{PRIMAL_TOL, TIE_TOL};

/// Which traversals of an area cost BLUE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossModel {
    /// Every edge entering node `j` costs `α_j` to the area holding `j`
    /// (`W = S · D`).
    Inflow,
    /// Only edges crossing into an area from outside cost `α_head`; moves
    /// inside an area are free. Identical to `Inflow` for per-node areas.
    #[default]
    Entry,
}

impl LossModel {
    pub fn as_str(self) -> &'static str {
        match self {
            LossModel::Inflow => "inflow",
            LossModel::Entry => "entry",
        }
    }

    /// Whether traversing `edge` costs anything to its head's area.
    pub fn charges(self, areas: &AmbushAreaSet, tail: usize, head: usize) -> bool {
        match self {
            LossModel::Inflow => true,
            LossModel::Entry => areas.area_of(tail) != areas.area_of(head),
        }
    }
}

impl fmt::Display for LossModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LossModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inflow" => Ok(LossModel::Inflow),
            "entry" => Ok(LossModel::Entry),
            other => Err(Error::Argument(format!(
                "unknown loss model '{other}' (expected inflow or entry)"
            ))),
        }
    }
}

/// Area × edge loss matrix `W` for `model`.
pub fn loss_matrix(
    network: &Network,
    outcome: &OutcomeMap,
    areas: &AmbushAreaSet,
    model: LossModel,
) -> Result<SparseMatrix> {
    match model {
        LossModel::Inflow => {
            let d = assemble_outcome_matrix(network, outcome)?;
            assemble_area_matrix(network, areas)?.matmul(&d)
        }
        LossModel::Entry => {
            assemble_area_matrix(network, areas)?;
            if outcome.len() != network.node_count() {
                return Err(Error::Dimension(format!(
                    "outcome map has {} entries for {} nodes",
                    outcome.len(),
                    network.node_count()
                )));
            }
            let alpha = outcome.alpha();
            let triplets = network
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, e)| model.charges(areas, e.tail, e.head))
                .map(|(k, e)| (areas.area_of(e.head), k, alpha[e.head]));
            SparseMatrix::from_triplets(areas.len(), network.edge_count(), triplets)
        }
    }
}

/// The assembled LP plus what is needed to read a strategy back out of it.
#[derive(Debug, Clone, PartialEq)]
pub struct GameLp {
    pub lp: LinearProgram,
    pub n_edges: usize,
    pub lambda: f64,
}

/// Assembles the game LP over variables `(p_1, …, p_|E|, z)`.
pub fn build_game_lp(loss: &SparseMatrix, flow: &FlowSystem, lengths: &[f64], lambda: f64) -> Result<GameLp> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::Argument(format!("lambda must lie in [0, 1), got {lambda}")));
    }
    let n_edges = flow.a.cols();
    if loss.cols() != n_edges || lengths.len() != n_edges {
        return Err(Error::Dimension(format!(
            "loss matrix has {} columns and {} lengths for {n_edges} edges",
            loss.cols(),
            lengths.len()
        )));
    }
    if flow.b.len() != flow.a.rows() {
        return Err(Error::Dimension("flow right-hand side does not match A".into()));
    }
    let mut c: Vec<f64> = lengths.iter().map(|l| lambda * l).collect();
    c.push(1.0 - lambda);
    let a_eq = flow.a.with_extra_columns(&[Vec::new()])?;
    let z_col: Vec<(usize, f64)> = (0..loss.rows()).map(|r| (r, -1.0)).collect();
    let a_ub = loss.with_extra_columns(&[z_col])?;
    let lp = LinearProgram::new(c, a_eq, flow.b.clone(), a_ub, vec![0.0; loss.rows()])?;
    Ok(GameLp {
        lp,
        n_edges,
        lambda,
    })
}

/// BLUE's strategy as returned by the solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedStrategy {
    pub p: Vec<f64>,
    pub lambda: f64,
    pub z_star: f64,
}

/// RED's strategy and the value it attains against a given `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedStrategy {
    pub q: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub solver: String,
    pub status: LpStatus,
    pub iterations: usize,
    pub degenerate_pivots: usize,
    pub bland_pivots: usize,
    pub refactorizations: usize,
    pub z_star: f64,
    pub objective: f64,
    /// `‖A p − b‖∞` of the extracted strategy.
    pub flow_residual: f64,
    pub min_reduced_cost: f64,
    /// RED's equilibrium strategy recovered from the LP duals.
    pub dual_q: Vec<f64>,
}

/// Solves with the default revised simplex.
pub fn solve_simplex(game: &GameLp) -> Result<(MixedStrategy, SolveReport)> {
    solve_with(game, &RevisedSimplex::default())
}

pub fn solve_with(game: &GameLp, solver: &dyn LpSolver) -> Result<(MixedStrategy, SolveReport)> {
    let sol = solver.solve(&game.lp)?;
    let p: Vec<f64> = sol.x[..game.n_edges].iter().map(|&v| v.max(0.0)).collect();
    let z_star = sol.x[game.n_edges];
    let flow_residual = game
        .lp
        .a_eq
        .mul_vec(&sol.x)
        .iter()
        .zip(&game.lp.b_eq)
        .map(|(ax, b)| (ax - b).abs())
        .fold(0.0, f64::max);
    let mu: Vec<f64> = sol.duals_ub.iter().map(|y| (-y).max(0.0)).collect();
    let total: f64 = mu.iter().sum();
    let dual_q = if total > TIE_TOL {
        mu.iter().map(|m| m / total).collect()
    } else {
        vec![1.0 / mu.len().max(1) as f64; mu.len()]
    };
    let report = SolveReport {
        solver: solver.name().to_string(),
        status: sol.status,
        iterations: sol.iterations,
        degenerate_pivots: sol.degenerate_pivots,
        bland_pivots: sol.bland_pivots,
        refactorizations: sol.refactorizations,
        z_star,
        objective: sol.objective,
        flow_residual,
        min_reduced_cost: sol.min_reduced_cost,
        dual_q,
    };
    Ok((
        MixedStrategy {
            p,
            lambda: game.lambda,
            z_star,
        },
        report,
    ))
}

/// RED's best response to `p`: uniform over the areas whose loss is within
/// [`TIE_TOL`] of the maximum.
pub fn red_best_response(loss: &SparseMatrix, p: &[f64]) -> RedStrategy {
    let v = loss.mul_vec(p);
    let value = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if v.is_empty() {
        return RedStrategy { q: Vec::new(), value: 0.0 };
    }
    let ties: Vec<bool> = v.iter().map(|&x| x >= value - TIE_TOL).collect();
    let count = ties.iter().filter(|&&t| t).count() as f64;
    RedStrategy {
        q: ties.iter().map(|&t| if t { 1.0 / count } else { 0.0 }).collect(),
        value,
    }
}

/// `V = qᵀ W p`.
pub fn strategic_outcome(p: &[f64], q: &[f64], loss: &SparseMatrix) -> f64 {
    loss.mul_vec(p).iter().zip(q).map(|(v, q)| v * q).sum()
}

/// Gap between the regularized objective of `p` against its best response
/// and the lower bound certified by RED playing `q`:
///
/// ```text
/// upper = (1 − λ) max(W p) + λ lenᵀp
/// lower = min over unit flows p' of (1 − λ) qᵀ W p' + λ lenᵀp'
/// ```
///
/// The minimum is a shortest path. The gap is zero exactly when `(p, q)` is
/// an equilibrium of the regularized game.
pub fn duality_gap(
    p: &[f64],
    q: &[f64],
    loss: &SparseMatrix,
    flow: &FlowSystem,
    network: &Network,
    lambda: f64,
) -> Result<f64> {
    if p.len() != network.edge_count() || q.len() != loss.rows() {
        return Err(Error::Dimension(format!(
            "p has {} entries for {} edges, q has {} for {} areas",
            p.len(),
            network.edge_count(),
            q.len(),
            loss.rows()
        )));
    }
    let residual = flow.residual(p);
    if residual > 1e3 * PRIMAL_TOL || p.iter().any(|&v| v < -PRIMAL_TOL) {
        return Err(Error::InfeasibleFlow(format!(
            "candidate violates flow conservation by {residual:.3e}"
        )));
    }
    let lengths = network.lengths();
    let energy: f64 = p.iter().zip(&lengths).map(|(p, l)| p * l).sum();
    let worst = red_best_response(loss, p).value;
    let upper = (1.0 - lambda) * worst + lambda * energy;
    let wq = loss.tr_mul_vec(q);
    let weights: Vec<f64> = wq
        .iter()
        .zip(&lengths)
        .map(|(w, l)| ((1.0 - lambda) * w + lambda * l).max(0.0))
        .collect();
    let (lower, _) = network
        .shortest_path(&weights)
        .ok_or(Error::Connectivity)?;
    Ok(upper - lower)
}
