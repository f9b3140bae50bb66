use crate::environment::{AmbushAreaSet, OutcomeMap};
use crate::error::{Error, Result};
use crate::network::Network;
use crate::sparse::SparseMatrix;

/// Flow conservation `A p = b`: node-arc incidence with `-1` at the tail and
/// `+1` at the head; `b` is `-1` at the origin and `+1` at the destination.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowSystem {
    pub a: SparseMatrix,
    pub b: Vec<f64>,
}

impl FlowSystem {
    /// `‖A p − b‖∞`.
    pub fn residual(&self, p: &[f64]) -> f64 {
        self.a
            .mul_vec(p)
            .iter()
            .zip(&self.b)
            .map(|(ap, b)| (ap - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `D` (node × edge outcome of inflows) and `S` (area × node membership).
#[derive(Debug, Clone, PartialEq)]
pub struct GameMatrices {
    pub d: SparseMatrix,
    pub s: SparseMatrix,
}

impl GameMatrices {
    pub fn new(network: &Network, outcome: &OutcomeMap, areas: &AmbushAreaSet) -> Result<Self> {
        Ok(Self {
            d: assemble_outcome_matrix(network, outcome)?,
            s: assemble_area_matrix(network, areas)?,
        })
    }

    /// `S · D`: the area × edge loss of one traversal.
    pub fn sd(&self) -> Result<SparseMatrix> {
        self.s.matmul(&self.d)
    }
}

pub fn assemble_flow(network: &Network) -> FlowSystem {
    let triplets = network
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(k, e)| [(e.tail, k, -1.0), (e.head, k, 1.0)]);
    let a = SparseMatrix::from_triplets(network.node_count(), network.edge_count(), triplets)
        .expect("edge endpoints are valid node ids");
    let mut b = vec![0.0; network.node_count()];
    b[network.origin()] = -1.0;
    b[network.destination()] = 1.0;
    FlowSystem { a, b }
}

/// `D_jk = α_j` when edge `k` enters node `j`.
pub fn assemble_outcome_matrix(network: &Network, outcome: &OutcomeMap) -> Result<SparseMatrix> {
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
        .map(|(k, e)| (e.head, k, alpha[e.head]));
    SparseMatrix::from_triplets(network.node_count(), network.edge_count(), triplets)
}

/// `S_ij = 1` iff node `j` lies in area `i`.
pub fn assemble_area_matrix(network: &Network, areas: &AmbushAreaSet) -> Result<SparseMatrix> {
    if areas.node_area().len() != network.node_count() {
        return Err(Error::Dimension(format!(
            "area assignment covers {} nodes, network has {}",
            areas.node_area().len(),
            network.node_count()
        )));
    }
    let triplets = areas.node_area().iter().enumerate().map(|(j, &a)| (a, j, 1.0));
    SparseMatrix::from_triplets(areas.len(), network.node_count(), triplets)
}
