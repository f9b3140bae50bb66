use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::FLOW_EPS;
use crate::error::{Error, Result};
use crate::network::Network;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPath {
    pub nodes: Vec<usize>,
    pub edges: Vec<usize>,
    pub weight: f64,
}

/// A finite mixture of origin → destination paths realizing a flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEnsemble {
    pub paths: Vec<WeightedPath>,
    /// `Σ_e (p_e − p̃_e)`: flow removed by cycle cancellation.
    pub residual_cycle_flow: f64,
}

impl PathEnsemble {
    pub fn total_weight(&self) -> f64 {
        self.paths.iter().map(|p| p.weight).sum()
    }

    /// `Σ_k w_k 1_{path_k}` as an edge flow.
    pub fn reconstruct(&self, n_edges: usize) -> Vec<f64> {
        let mut flow = vec![0.0; n_edges];
        for path in &self.paths {
            for &e in &path.edges {
                flow[e] += path.weight;
            }
        }
        flow
    }
}

/// Finds a directed cycle in the support of `p` as a list of edge ids.
fn find_cycle(p: &[f64], network: &Network, out: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = network.node_count();
    // 0 unvisited, 1 on stack, 2 done
    let mut color = vec![0u8; n];
    let mut via = vec![usize::MAX; n];
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = 1;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next < out[u].len() {
                let k = out[u][*next];
                *next += 1;
                if p[k] <= FLOW_EPS {
                    continue;
                }
                let v = network.edges()[k].head;
                match color[v] {
                    0 => {
                        color[v] = 1;
                        via[v] = k;
                        stack.push((v, 0));
                    }
                    1 => {
                        let mut cycle = vec![k];
                        let mut w = u;
                        while w != v {
                            let e = via[w];
                            cycle.push(e);
                            w = network.edges()[e].tail;
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                color[u] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Whether the support of `p` contains no directed cycle.
pub fn is_acyclic(p: &[f64], network: &Network) -> bool {
    find_cycle(p, network, &network.out_edges()).is_none()
}

/// Repeatedly removes the bottleneck flow of a directed cycle in the support
/// of `p` until none is left. Conservation is untouched and no edge flow
/// increases.
pub fn cancel_cycles(p: &[f64], network: &Network) -> Vec<f64> {
    let out = network.out_edges();
    let mut flow = p.to_vec();
    while let Some(cycle) = find_cycle(&flow, network, &out) {
        let bottleneck = cycle.iter().map(|&k| flow[k]).fold(f64::INFINITY, f64::min);
        for &k in &cycle {
            flow[k] -= bottleneck;
            if flow[k] <= FLOW_EPS {
                flow[k] = 0.0;
            }
        }
    }
    flow
}

#[derive(PartialEq)]
struct Wide(f64, usize);

impl Eq for Wide {}

impl PartialOrd for Wide {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Wide {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Widest origin → destination path in the support of `flow`.
fn widest_path(flow: &[f64], network: &Network, out: &[Vec<usize>]) -> Option<(f64, Vec<usize>)> {
    let n = network.node_count();
    let mut width = vec![0.0_f64; n];
    let mut via = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let (o, d) = (network.origin(), network.destination());
    width[o] = f64::INFINITY;
    let mut heap = BinaryHeap::from([Wide(f64::INFINITY, o)]);
    while let Some(Wide(w, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == d {
            break;
        }
        for &k in &out[u] {
            let v = network.edges()[k].head;
            let cand = w.min(flow[k]);
            if flow[k] > FLOW_EPS && !done[v] && cand > width[v] {
                width[v] = cand;
                via[v] = k;
                heap.push(Wide(cand, v));
            }
        }
    }
    if !done[d] || width[d] <= FLOW_EPS {
        return None;
    }
    let mut edges = Vec::new();
    let mut v = d;
    while v != o {
        let k = via[v];
        edges.push(k);
        v = network.edges()[k].tail;
    }
    edges.reverse();
    Some((width[d], edges))
}

/// Greedy decomposition of a unit flow into weighted paths, widest path
/// first. Cycles are cancelled beforehand.
pub fn decompose_paths(p: &[f64], network: &Network) -> Result<PathEnsemble> {
    if p.len() != network.edge_count() {
        return Err(Error::Dimension(format!(
            "flow has {} entries for {} edges",
            p.len(),
            network.edge_count()
        )));
    }
    let acyclic = cancel_cycles(p, network);
    let residual_cycle_flow = p.iter().zip(&acyclic).map(|(a, b)| a - b).sum();
    let out = network.out_edges();
    let mut flow = acyclic;
    let mut paths = Vec::new();
    while let Some((w, edges)) = widest_path(&flow, network, &out) {
        for &k in &edges {
            flow[k] -= w;
            if flow[k] <= FLOW_EPS {
                flow[k] = 0.0;
            }
        }
        let mut nodes = vec![network.origin()];
        nodes.extend(edges.iter().map(|&k| network.edges()[k].head));
        paths.push(WeightedPath { nodes, edges, weight: w });
    }
    if paths.is_empty() {
        return Err(Error::InfeasibleFlow("no origin-destination path carries flow".into()));
    }
    Ok(PathEnsemble {
        paths,
        residual_cycle_flow,
    })
}
