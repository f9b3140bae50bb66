//! Directed networks over the environment and the game's matrices.

mod delaunay;
mod matrices;
mod sampling;

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use delaunay::{delaunay_edges, triangulate, triangulate_ranked, Triangulation};
pub use matrices::{assemble_area_matrix, assemble_flow, assemble_outcome_matrix, FlowSystem, GameMatrices};
pub use sampling::{grid8_edges, sample_nodes_random, sample_nodes_uniform, Lattice};

use crate::error::{Error, Result};
use crate::geom::{Bounds, Point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    /// Euclidean length in meters.
    pub length: f64,
}

/// A directed graph with an origin and a destination. Node ids are indices
/// into [`Network::nodes`], edge ids indices into [`Network::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    nodes: Vec<Point>,
    edges: Vec<Edge>,
    origin: usize,
    destination: usize,
}

impl Network {
    /// Builds a network from directed `(tail, head)` pairs. Lengths are the
    /// Euclidean distances between endpoints.
    pub fn new(nodes: Vec<Point>, arcs: &[(usize, usize)], origin: usize, destination: usize) -> Result<Self> {
        let n = nodes.len();
        if origin >= n || destination >= n {
            return Err(Error::Argument(format!(
                "terminals ({origin}, {destination}) out of range for {n} nodes"
            )));
        }
        if origin == destination {
            return Err(Error::Argument("origin and destination coincide".into()));
        }
        let mut edges = Vec::with_capacity(arcs.len());
        for &(tail, head) in arcs {
            if tail >= n || head >= n {
                return Err(Error::Argument(format!("edge ({tail}, {head}) references a missing node")));
            }
            if tail == head {
                return Err(Error::Argument(format!("self-loop at node {tail}")));
            }
            edges.push(Edge {
                tail,
                head,
                length: nodes[tail].distance(nodes[head]),
            });
        }
        let network = Self {
            nodes,
            edges,
            origin,
            destination,
        };
        if !network.reachable_from_origin()[destination] {
            return Err(Error::Connectivity);
        }
        Ok(network)
    }

    /// Two directed edges per undirected pair.
    pub fn from_undirected(
        nodes: Vec<Point>,
        pairs: &[(usize, usize)],
        origin: usize,
        destination: usize,
    ) -> Result<Self> {
        let arcs: Vec<_> = pairs.iter().flat_map(|&(i, j)| [(i, j), (j, i)]).collect();
        Self::new(nodes, &arcs, origin, destination)
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn destination(&self) -> usize {
        self.destination
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.length).collect()
    }

    /// Outgoing edge ids per node.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for (k, e) in self.edges.iter().enumerate() {
            out[e.tail].push(k);
        }
        out
    }

    fn reach(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            if forward {
                adj[e.tail].push(e.head);
            } else {
                adj[e.head].push(e.tail);
            }
        }
        let mut seen = vec![false; self.nodes.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn reachable_from_origin(&self) -> Vec<bool> {
        self.reach(self.origin, true)
    }

    pub fn reaching_destination(&self) -> Vec<bool> {
        self.reach(self.destination, false)
    }

    /// Drops every node that is not on some origin → destination walk,
    /// together with its edges. Node order is preserved.
    pub fn pruned(&self) -> Result<Network> {
        Ok(self.pruned_with_map()?.0)
    }

    /// As [`Network::pruned`], also returning the original id of every kept
    /// edge.
    pub fn pruned_with_map(&self) -> Result<(Network, Vec<usize>)> {
        let fwd = self.reachable_from_origin();
        let bwd = self.reaching_destination();
        let keep: Vec<bool> = fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect();
        if !keep[self.destination] {
            return Err(Error::Connectivity);
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, &p) in self.nodes.iter().enumerate() {
            if keep[i] {
                remap[i] = nodes.len();
                nodes.push(p);
            }
        }
        let mut edges = Vec::new();
        let mut kept = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if keep[e.tail] && keep[e.head] {
                kept.push(k);
                edges.push(Edge {
                    tail: remap[e.tail],
                    head: remap[e.head],
                    length: e.length,
                });
            }
        }
        let network = Network {
            nodes,
            edges,
            origin: remap[self.origin],
            destination: remap[self.destination],
        };
        Ok((network, kept))
    }

    /// Shortest origin → destination path under nonnegative edge weights,
    /// as `(distance, edge ids)`.
    pub fn shortest_path(&self, weights: &[f64]) -> Option<(f64, Vec<usize>)> {
        use std::cmp::Ordering;
        use std::collections::BinaryHeap;

        #[derive(PartialEq)]
        struct Item(f64, usize);
        impl Eq for Item {}
        impl PartialOrd for Item {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Item {
            fn cmp(&self, other: &Self) -> Ordering {
                other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
            }
        }

        let out = self.out_edges();
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        let mut via = vec![usize::MAX; self.nodes.len()];
        dist[self.origin] = 0.0;
        let mut heap = BinaryHeap::from([Item(0.0, self.origin)]);
        while let Some(Item(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &k in &out[u] {
                let v = self.edges[k].head;
                let nd = d + weights[k].max(0.0);
                if nd < dist[v] {
                    dist[v] = nd;
                    via[v] = k;
                    heap.push(Item(nd, v));
                }
            }
        }
        if !dist[self.destination].is_finite() {
            return None;
        }
        let mut path = Vec::new();
        let mut v = self.destination;
        while v != self.origin {
            let k = via[v];
            path.push(k);
            v = self.edges[k].tail;
        }
        path.reverse();
        Some((dist[self.destination], path))
    }
}

/// Network construction methods: sampling plus connectivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Random sampling, Delaunay connectivity.
    #[serde(rename = "rdm")]
    Rdm,
    /// Uniform lattice, 8-connected.
    #[serde(rename = "uni8")]
    Uni8,
    /// Uniform lattice, Delaunay connectivity.
    #[serde(rename = "uniD")]
    UniD,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Rdm, Method::Uni8, Method::UniD];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Rdm => "rdm",
            Method::Uni8 => "uni8",
            Method::UniD => "uniD",
        }
    }

    /// Whether the construction depends on the seed.
    pub fn is_random(self) -> bool {
        self == Method::Rdm
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rdm" => Ok(Method::Rdm),
            "uni8" => Ok(Method::Uni8),
            "uniD" | "unid" => Ok(Method::UniD),
            other => Err(Error::Argument(format!(
                "unknown method '{other}' (expected rdm, uni8 or uniD)"
            ))),
        }
    }
}

/// Samples nodes, connects them, and keeps only nodes lying on some
/// origin → destination walk. Lattice methods snap the terminals to the
/// nearest lattice node; `rdm` appends them as extra nodes.
pub fn build_network(
    method: Method,
    bounds: Bounds,
    n: usize,
    seed: u64,
    origin: Point,
    destination: Point,
) -> Result<Network> {
    for (name, p) in [("origin", origin), ("destination", destination)] {
        if !bounds.contains(p) {
            return Err(Error::Argument(format!(
                "{name} ({}, {}) is outside the environment bounds",
                p.x, p.y
            )));
        }
    }
    let network = match method {
        Method::Rdm => {
            let pts = sample_nodes_random(bounds, n, seed, origin, destination)?;
            let pairs = delaunay_edges(&pts)?;
            let (o, d) = (pts.len() - 2, pts.len() - 1);
            if pts[o] == pts[d] {
                return Err(Error::Argument("origin and destination coincide".into()));
            }
            Network::from_undirected(pts, &pairs, o, d)?
        }
        Method::Uni8 | Method::UniD => {
            let lattice = sample_nodes_uniform(bounds, n)?;
            let (o, d) = (lattice.snap(bounds, origin), lattice.snap(bounds, destination));
            if o == d {
                return Err(Error::Argument(
                    "origin and destination snap to the same lattice node".into(),
                ));
            }
            let pairs = if method == Method::Uni8 {
                grid8_edges(&lattice)
            } else {
                delaunay_edges(&lattice.points)?
            };
            Network::from_undirected(lattice.points, &pairs, o, d)?
        }
    };
    network.pruned()
}
