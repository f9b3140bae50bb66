//! Road graphs: a JSON document with `nodes` (`id`, `lat`, `lon`) and `ways`
//! (`nodes` list, `maxspeed` in m/s, optional `oneway`).
//!
//! ```json
//! {
//!   "nodes": [{"id": 1, "lat": 43.73, "lon": 7.42}, {"id": 2, "lat": 43.73, "lon": 7.421}],
//!   "ways": [{"id": 10, "nodes": [1, 2], "maxspeed": 13.9, "oneway": false}]
//! }
//! ```

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::hgt::METERS_PER_DEGREE;
use crate::error::{Error, Result};
use crate::geom::{Bounds, Point};
use crate::network::Network;

#[derive(Debug, Deserialize)]
struct RawNode {
    id: i64,
    lat: f64,
    lon: f64,
}

#[derive(Debug, Deserialize)]
struct RawWay {
    #[serde(default)]
    id: Option<i64>,
    nodes: Vec<i64>,
    maxspeed: f64,
    #[serde(default)]
    oneway: bool,
}

#[derive(Debug, Deserialize)]
struct RawGraph {
    nodes: Vec<RawNode>,
    ways: Vec<RawWay>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoadNode {
    pub id: i64,
    pub lat: f64,
    pub lon: f64,
    /// Projected position in meters.
    pub position: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoadEdge {
    /// Indices into [`RoadGraph::nodes`].
    pub from: usize,
    pub to: usize,
    pub length: f64,
    pub max_speed: f64,
    pub oneway: bool,
}

/// A directed road graph projected to local meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoadGraph {
    pub nodes: Vec<RoadNode>,
    pub edges: Vec<RoadEdge>,
    pub bounds: Bounds,
    /// Projection center `(lat, lon)` in degrees.
    pub center: (f64, f64),
    /// Meters subtracted after projection so every node has `x, y ≥ 0`.
    pub offset: Point,
}

impl RoadGraph {
    /// Local meters of a geographic coordinate under this graph's projection.
    pub fn project(&self, lat: f64, lon: f64) -> Point {
        let p = equirectangular(self.center, lat, lon);
        Point::new(p.x - self.offset.x, p.y - self.offset.y)
    }

    pub fn nearest_node(&self, p: Point) -> usize {
        let mut best = 0;
        for (i, n) in self.nodes.iter().enumerate() {
            if n.position.distance(p) < self.nodes[best].position.distance(p) {
                best = i;
            }
        }
        best
    }

    /// Directed network between the road nodes nearest to `origin` and
    /// `destination`, pruned to nodes on some route, with the speed limit of
    /// every remaining edge.
    pub fn to_network(&self, origin: Point, destination: Point) -> Result<(Network, Vec<f64>)> {
        let (o, d) = (self.nearest_node(origin), self.nearest_node(destination));
        if o == d {
            return Err(Error::Argument(
                "origin and destination snap to the same road node".into(),
            ));
        }
        let nodes = self.nodes.iter().map(|n| n.position).collect();
        let arcs: Vec<_> = self.edges.iter().map(|e| (e.from, e.to)).collect();
        let (network, kept) = Network::new(nodes, &arcs, o, d)?.pruned_with_map()?;
        let speeds = kept.iter().map(|&k| self.edges[k].max_speed).collect();
        Ok((network, speeds))
    }
}

fn equirectangular(center: (f64, f64), lat: f64, lon: f64) -> Point {
    let (lat0, lon0) = center;
    Point::new(
        (lon - lon0) * METERS_PER_DEGREE * lat0.to_radians().cos(),
        (lat - lat0) * METERS_PER_DEGREE,
    )
}

pub fn read_road_graph(text: &str) -> Result<RoadGraph> {
    let raw: RawGraph = serde_json::from_str(text)?;
    let mut problems = Vec::new();
    let mut index = HashMap::new();
    for (i, n) in raw.nodes.iter().enumerate() {
        if index.insert(n.id, i).is_some() {
            problems.push(format!("node {} is defined twice", n.id));
        }
        if !(n.lat.is_finite() && n.lon.is_finite() && n.lat.abs() <= 90.0) {
            problems.push(format!("node {} has invalid coordinates", n.id));
        }
    }
    if raw.nodes.is_empty() {
        problems.push("road graph has no nodes".into());
    }
    for (w, way) in raw.ways.iter().enumerate() {
        let name = way.id.map_or_else(|| format!("#{w}"), |id| id.to_string());
        if !(way.maxspeed > 0.0 && way.maxspeed.is_finite()) {
            problems.push(format!("way {name} has non-positive maxspeed {}", way.maxspeed));
        }
        if way.nodes.len() < 2 {
            problems.push(format!("way {name} has fewer than two nodes"));
        }
        for id in &way.nodes {
            if !index.contains_key(id) {
                problems.push(format!("way {name} references missing node {id}"));
            }
        }
    }
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }

    let count = raw.nodes.len() as f64;
    let center = (
        raw.nodes.iter().map(|n| n.lat).sum::<f64>() / count,
        raw.nodes.iter().map(|n| n.lon).sum::<f64>() / count,
    );
    let projected: Vec<Point> = raw.nodes.iter().map(|n| equirectangular(center, n.lat, n.lon)).collect();
    let offset = Point::new(
        projected.iter().map(|p| p.x).fold(f64::INFINITY, f64::min),
        projected.iter().map(|p| p.y).fold(f64::INFINITY, f64::min),
    );
    let nodes: Vec<RoadNode> = raw
        .nodes
        .iter()
        .zip(&projected)
        .map(|(n, p)| RoadNode {
            id: n.id,
            lat: n.lat,
            lon: n.lon,
            position: Point::new(p.x - offset.x, p.y - offset.y),
        })
        .collect();
    let bounds = Bounds::new(
        nodes.iter().map(|n| n.position.x).fold(0.0, f64::max),
        nodes.iter().map(|n| n.position.y).fold(0.0, f64::max),
    );

    let mut edges = Vec::new();
    for way in &raw.ways {
        for pair in way.nodes.windows(2) {
            let (a, b) = (index[&pair[0]], index[&pair[1]]);
            if a == b {
                continue;
            }
            let length = nodes[a].position.distance(nodes[b].position);
            edges.push(RoadEdge {
                from: a,
                to: b,
                length,
                max_speed: way.maxspeed,
                oneway: way.oneway,
            });
            if !way.oneway {
                edges.push(RoadEdge {
                    from: b,
                    to: a,
                    length,
                    max_speed: way.maxspeed,
                    oneway: false,
                });
            }
        }
    }
    Ok(RoadGraph {
        nodes,
        edges,
        bounds,
        center,
        offset,
    })
}
