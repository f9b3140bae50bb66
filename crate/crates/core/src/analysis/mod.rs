//! Metrics on solved strategies, path realization and Monte Carlo checks.

mod montecarlo;
mod paths;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use montecarlo::{path_loss, simulate, SimulationResult};
pub use paths::{cancel_cycles, decompose_paths, is_acyclic, PathEnsemble, WeightedPath};

use crate::environment::{AmbushAreaSet, AreaLayout};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::network::{Method, Network};

/// Flows below this are treated as absent when walking the support of `p`.
pub const FLOW_EPS: f64 = 1e-12;

/// The metrics of one solved instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub method: Method,
    pub n: usize,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub lambda: f64,
    pub seed: u64,
    /// Strategic outcome `V` against RED's best response.
    pub outcome: f64,
    /// Expected travelled distance in meters.
    pub energy: f64,
    pub spreading: f64,
    /// Median-crossing entropy in nats; `None` when nothing crosses.
    pub entropy: Option<f64>,
    /// `−Σ p_e ln p_e` over edges.
    pub edge_entropy: f64,
}

/// `E = Σ p_e · len_e`.
pub fn metric_energy(p: &[f64], network: &Network) -> f64 {
    p.iter().zip(network.edges()).map(|(p, e)| p * e.length).sum()
}

/// Flow entering each area from a node outside it.
pub fn area_entry_flow(p: &[f64], network: &Network, areas: &AmbushAreaSet) -> Vec<f64> {
    let mut entry = vec![0.0; areas.len()];
    for (pe, e) in p.iter().zip(network.edges()) {
        let (a_tail, a_head) = (areas.area_of(e.tail), areas.area_of(e.head));
        if a_tail != a_head {
            entry[a_head] += pe;
        }
    }
    entry
}

/// Surface fraction of the areas entered with probability above `p_min`.
pub fn metric_spreading(p: &[f64], network: &Network, areas: &AmbushAreaSet, p_min: f64) -> Result<f64> {
    if !(p_min > 0.0) {
        return Err(Error::Argument(format!("p_min must be positive, got {p_min}")));
    }
    let entry = area_entry_flow(p, network, areas);
    let surface = areas.surface();
    let total: f64 = surface.iter().sum();
    let covered: f64 = entry
        .iter()
        .zip(surface)
        .filter(|(e, _)| **e > p_min)
        .map(|(_, s)| s)
        .sum();
    Ok(if total > 0.0 { covered / total } else { 0.0 })
}

/// Net flow crossing the perpendicular bisector of origin → destination,
/// keyed by the ambush area holding each crossing point. Crossings towards
/// the destination count positive.
pub fn bisector_crossings(p: &[f64], network: &Network, areas: &AmbushAreaSet) -> BTreeMap<usize, f64> {
    let nodes = network.nodes();
    let (o, d) = (nodes[network.origin()], nodes[network.destination()]);
    let mid = Point::new((o.x + d.x) / 2.0, (o.y + d.y) / 2.0);
    let side = |q: Point| (q.x - mid.x) * (d.x - o.x) + (q.y - mid.y) * (d.y - o.y);

    let mut sections = BTreeMap::new();
    for (&pe, e) in p.iter().zip(network.edges()) {
        if pe <= FLOW_EPS {
            continue;
        }
        let (t, h) = (nodes[e.tail], nodes[e.head]);
        let (st, sh) = (side(t), side(h));
        let sign = if st < 0.0 && sh >= 0.0 {
            1.0
        } else if sh < 0.0 && st >= 0.0 {
            -1.0
        } else {
            continue;
        };
        let section = match areas.layout() {
            AreaLayout::Grid { .. } => {
                let f = st / (st - sh);
                let x = Point::new(t.x + f * (h.x - t.x), t.y + f * (h.y - t.y));
                areas.locate(x).expect("grid layout locates every point")
            }
            AreaLayout::Nodes => {
                if st.abs() <= sh.abs() {
                    areas.area_of(e.tail)
                } else {
                    areas.area_of(e.head)
                }
            }
        };
        *sections.entry(section).or_insert(0.0) += sign * pe;
    }
    sections
}

/// Shannon entropy (nats) of the normalized net crossing mass per section
/// of the origin–destination bisector. Negative sections count as zero.
pub fn metric_entropy(p: &[f64], network: &Network, areas: &AmbushAreaSet) -> Result<f64> {
    let masses: Vec<f64> = bisector_crossings(p, network, areas)
        .into_values()
        .map(|m| m.max(0.0))
        .collect();
    entropy_of(&masses)
}

/// `−Σ m ln m` of `masses` normalized to sum 1.
pub fn entropy_of(masses: &[f64]) -> Result<f64> {
    let total: f64 = masses.iter().sum();
    if !(total > FLOW_EPS) {
        return Err(Error::UndefinedEntropy);
    }
    Ok(masses
        .iter()
        .filter(|&&m| m > 0.0)
        .map(|&m| {
            let x = m / total;
            -x * x.ln()
        })
        .sum::<f64>()
        .max(0.0))
}

/// `−Σ p_e ln p_e` over edges with positive flow.
pub fn edge_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.ln()).sum()
}
