//! GeoJSON and SVG renderings of a solved strategy.
//!
//! Coordinates are the environment's local meters. Edge width follows the
//! flow `p_e`, area shading follows `α`, and red circles mark RED's areas
//! with radius following `q`.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::environment::{AmbushAreaSet, AreaLayout};
use crate::error::{Error, Result};
use crate::geom::{Bounds, Point};
use crate::network::Network;

/// Edges below this flow are drawn grey in SVG output.
pub const FAINT_FLOW: f64 = 1e-4;

/// Everything needed to draw a strategy.
#[derive(Debug, Clone, Copy)]
pub struct StrategyView<'a> {
    pub network: &'a Network,
    pub bounds: Bounds,
    pub p: &'a [f64],
    pub q: &'a [f64],
    pub areas: &'a AmbushAreaSet,
    pub alpha: &'a [f64],
}

impl StrategyView<'_> {
    /// Largest node `α` in each area.
    fn area_alpha(&self) -> Vec<f64> {
        let mut out = vec![0.0_f64; self.areas.len()];
        for (j, &a) in self.alpha.iter().enumerate() {
            let i = self.areas.area_of(j);
            out[i] = out[i].max(a);
        }
        out
    }

    /// Representative point of each area.
    fn area_anchor(&self) -> Vec<Point> {
        match self.areas.layout() {
            AreaLayout::Grid { .. } => self.areas.cells().iter().map(|c| c.center()).collect(),
            AreaLayout::Nodes => {
                let mut sum = vec![(0.0, 0.0, 0usize); self.areas.len()];
                for (j, p) in self.network.nodes().iter().enumerate() {
                    let s = &mut sum[self.areas.area_of(j)];
                    s.0 += p.x;
                    s.1 += p.y;
                    s.2 += 1;
                }
                sum.iter()
                    .map(|&(x, y, n)| {
                        let n = n.max(1) as f64;
                        Point::new(x / n, y / n)
                    })
                    .collect()
            }
        }
    }
}

/// A FeatureCollection of edge lines (`flow`), areas (`alpha`, `q`) and the
/// two terminals.
pub fn export_geojson(view: &StrategyView) -> String {
    let nodes = view.network.nodes();
    let mut features = Vec::new();
    for (k, e) in view.network.edges().iter().enumerate() {
        let (a, b) = (nodes[e.tail], nodes[e.head]);
        features.push(json!({
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": [[a.x, a.y], [b.x, b.y]]},
            "properties": {"kind": "edge", "id": k, "tail": e.tail, "head": e.head,
                           "length": e.length, "flow": view.p[k]},
        }));
    }
    let alpha = view.area_alpha();
    let anchors = view.area_anchor();
    for i in 0..view.areas.len() {
        let geometry = match view.areas.layout() {
            AreaLayout::Grid { .. } => {
                let c = view.areas.cells()[i];
                json!({"type": "Polygon", "coordinates": [[
                    [c.x0, c.y0], [c.x1, c.y0], [c.x1, c.y1], [c.x0, c.y1], [c.x0, c.y0]
                ]]})
            }
            AreaLayout::Nodes => json!({"type": "Point", "coordinates": [anchors[i].x, anchors[i].y]}),
        };
        features.push(json!({
            "type": "Feature",
            "geometry": geometry,
            "properties": {"kind": "area", "id": i, "alpha": alpha[i], "q": view.q[i],
                           "surface": view.areas.surface()[i]},
        }));
    }
    for (kind, j) in [("origin", view.network.origin()), ("destination", view.network.destination())] {
        let p = nodes[j];
        features.push(json!({
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [p.x, p.y]},
            "properties": {"kind": kind, "node": j},
        }));
    }
    let doc = json!({"type": "FeatureCollection", "features": features});
    serde_json::to_string_pretty(&doc).expect("GeoJSON serializes") + "\n"
}

/// Edge flows read back from [`export_geojson`] output, indexed by edge id.
pub fn read_geojson_flows(text: &str) -> Result<Vec<f64>> {
    let doc: Value = serde_json::from_str(text)?;
    let features = doc
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Data("GeoJSON has no features array".into()))?;
    let mut flows = Vec::new();
    for f in features {
        let props = &f["properties"];
        if props["kind"] != "edge" {
            continue;
        }
        let id = props["id"]
            .as_u64()
            .ok_or_else(|| Error::Data("edge feature without integer id".into()))? as usize;
        let flow = props["flow"]
            .as_f64()
            .ok_or_else(|| Error::Data(format!("edge {id} has no numeric flow")))?;
        if flows.len() <= id {
            flows.resize(id + 1, f64::NAN);
        }
        flows[id] = flow;
    }
    if let Some(id) = flows.iter().position(|f| f.is_nan()) {
        return Err(Error::Data(format!("edge {id} is missing")));
    }
    Ok(flows)
}

const SVG_SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

/// An SVG drawing of the strategy.
pub fn export_svg(view: &StrategyView) -> String {
    let span = view.bounds.width.max(view.bounds.height).max(f64::MIN_POSITIVE);
    let scale = (SVG_SIZE - 2.0 * MARGIN) / span;
    let w = view.bounds.width * scale + 2.0 * MARGIN;
    let h = view.bounds.height * scale + 2.0 * MARGIN;
    let px = |p: Point| (MARGIN + p.x * scale, MARGIN + (view.bounds.height - p.y) * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w:.1}" height="{h:.1}" fill="white"/>"#);

    let alpha = view.area_alpha();
    let anchors = view.area_anchor();
    if let AreaLayout::Grid { .. } = view.areas.layout() {
        for (c, a) in view.areas.cells().iter().zip(&alpha) {
            let (x0, y1) = px(Point::new(c.x0, c.y1));
            let _ = writeln!(
                s,
                r##"<rect class="area" x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="#8c6d46" fill-opacity="{:.3}" stroke="#cccccc" stroke-width="0.5"/>"##,
                (c.x1 - c.x0) * scale,
                (c.y1 - c.y0) * scale,
                0.5 * a
            );
        }
    }

    let nodes = view.network.nodes();
    let max_flow = view.p.iter().copied().fold(0.0_f64, f64::max).max(f64::MIN_POSITIVE);
    let mut order: Vec<usize> = (0..view.network.edge_count()).collect();
    order.sort_by(|&a, &b| view.p[a].total_cmp(&view.p[b]).then(a.cmp(&b)));
    for k in order {
        let e = view.network.edges()[k];
        let ((x1, y1), (x2, y2)) = (px(nodes[e.tail]), px(nodes[e.head]));
        let (stroke, width) = if view.p[k] < FAINT_FLOW {
            ("#bbbbbb", 0.4)
        } else {
            ("#1f4e9c", 0.8 + 5.0 * view.p[k] / max_flow)
        };
        let _ = writeln!(
            s,
            r#"<line class="edge" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-width="{width:.3}"/>"#
        );
    }

    let radius = 0.45 * view.areas.reach().max(span / 40.0) * scale;
    for (i, &q) in view.q.iter().enumerate() {
        if q > 0.0 {
            let (cx, cy) = px(anchors[i]);
            let _ = writeln!(
                s,
                r#"<circle class="ambush" cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="red" fill-opacity="0.35" stroke="red"/>"#,
                radius * q.sqrt()
            );
        }
    }
    for (fill, j) in [("#2a9d2a", view.network.origin()), ("#000000", view.network.destination())] {
        let (x, y) = px(nodes[j]);
        let _ = writeln!(
            s,
            r#"<rect class="terminal" x="{:.2}" y="{:.2}" width="8" height="8" fill="{fill}"/>"#,
            x - 4.0,
            y - 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Network {
        let nodes = vec![
            Point::new(0.0, 1.0),
            Point::new(1.0, 2.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 1.0),
        ];
        Network::new(nodes, &[(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3).unwrap()
    }

    #[test]
    fn geojson_round_trip_and_svg_circles() {
        let net = diamond();
        let areas = AmbushAreaSet::per_node(net.nodes());
        let p = [0.5, 0.5, 0.5, 0.5];
        let q = [0.0, 1.0, 0.0, 0.0];
        let alpha = [0.0, 1.0, 1.0, 0.0];
        let view = StrategyView {
            network: &net,
            bounds: Bounds::new(2.0, 2.0),
            p: &p,
            q: &q,
            areas: &areas,
            alpha: &alpha,
        };
        let text = export_geojson(&view);
        assert_eq!(read_geojson_flows(&text).unwrap(), p.to_vec());
        let svg = export_svg(&view);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}
