//! Terrain, vehicles, missions, the local outcome map and ambush areas.
//!
//! Coordinates are meters in a local frame with the origin at the south-west
//! corner: `x` grows east, `y` grows north. Height grids are stored
//! row-major from the north-west corner, so grid row 0 sits at
//! `y = height`.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Bounds, Point, Rect};
use crate::network::Network;

#[derive(Debug, Clone, PartialEq)]
pub struct HeightGrid {
    rows: usize,
    cols: usize,
    spacing: f64,
    elevations: Vec<f64>,
    void_mask: Vec<bool>,
}

impl HeightGrid {
    pub fn new(
        rows: usize,
        cols: usize,
        spacing: f64,
        elevations: Vec<f64>,
        void_mask: Vec<bool>,
    ) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::Argument(format!(
                "height grid needs at least 2x2 samples, got {rows}x{cols}"
            )));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::Argument(format!("grid spacing must be positive, got {spacing}")));
        }
        if elevations.len() != rows * cols || void_mask.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} samples, got {} elevations and {} mask entries",
                rows * cols,
                elevations.len(),
                void_mask.len()
            )));
        }
        if let Some(i) = (0..rows * cols).find(|&i| !void_mask[i] && !elevations[i].is_finite()) {
            return Err(Error::Data(format!(
                "non-finite elevation at row {}, col {}",
                i / cols,
                i % cols
            )));
        }
        Ok(Self {
            rows,
            cols,
            spacing,
            elevations,
            void_mask,
        })
    }

    /// Samples `f(x, y)` at every grid post.
    pub fn from_fn(rows: usize, cols: usize, spacing: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut elevations = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let y = (rows - 1 - r) as f64 * spacing;
            for c in 0..cols {
                elevations.push(f(c as f64 * spacing, y));
            }
        }
        Self::new(rows, cols, spacing, elevations, vec![false; rows * cols])
    }

    pub fn flat(rows: usize, cols: usize, spacing: f64, elevation: f64) -> Result<Self> {
        Self::from_fn(rows, cols, spacing, |_, _| elevation)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn elevations(&self) -> &[f64] {
        &self.elevations
    }

    pub fn void_mask(&self) -> &[bool] {
        &self.void_mask
    }

    pub fn is_void(&self, row: usize, col: usize) -> bool {
        self.void_mask[row * self.cols + col]
    }

    pub fn void_count(&self) -> usize {
        self.void_mask.iter().filter(|&&v| v).count()
    }

    pub fn elevation(&self, row: usize, col: usize) -> Option<f64> {
        let i = row * self.cols + col;
        (!self.void_mask[i]).then(|| self.elevations[i])
    }

    pub fn bounds(&self) -> Bounds {
        Bounds::new(
            (self.cols - 1) as f64 * self.spacing,
            (self.rows - 1) as f64 * self.spacing,
        )
    }

    /// Replaces every void sample by the value of the nearest valid sample
    /// (breadth-first over the 4-neighborhood, ties to the first reached).
    /// Returns the filled grid and the number of samples that were filled.
    pub fn fill_voids(&self) -> Result<(HeightGrid, usize)> {
        let n = self.rows * self.cols;
        let filled_count = self.void_count();
        if filled_count == n {
            return Err(Error::Data("height grid has no valid samples".into()));
        }
        let mut values = self.elevations.clone();
        let mut known = self.void_mask.iter().map(|v| !v).collect::<Vec<_>>();
        let mut queue: std::collections::VecDeque<usize> = (0..n).filter(|&i| known[i]).collect();
        while let Some(i) = queue.pop_front() {
            let (r, c) = (i / self.cols, i % self.cols);
            let mut visit = |j: usize| {
                if !known[j] {
                    known[j] = true;
                    values[j] = values[i];
                    queue.push_back(j);
                }
            };
            if r > 0 {
                visit(i - self.cols);
            }
            if r + 1 < self.rows {
                visit(i + self.cols);
            }
            if c > 0 {
                visit(i - 1);
            }
            if c + 1 < self.cols {
                visit(i + 1);
            }
        }
        let grid = HeightGrid::new(self.rows, self.cols, self.spacing, values, vec![false; n])?;
        Ok((grid, filled_count))
    }

    /// Bilinear interpolation of the elevation at `p`.
    pub fn interpolate(&self, p: Point) -> Result<f64> {
        let bounds = self.bounds();
        if !bounds.contains(p) {
            return Err(Error::OutOfBounds { x: p.x, y: p.y });
        }
        let fx = p.x / self.spacing;
        // fractional row counted from the north edge
        let fr = (bounds.height - p.y) / self.spacing;
        let c0 = (fx.floor() as usize).min(self.cols - 2);
        let r0 = (fr.floor() as usize).min(self.rows - 2);
        let tx = (fx - c0 as f64).clamp(0.0, 1.0);
        let tr = (fr - r0 as f64).clamp(0.0, 1.0);
        let void = || Error::DataVoid { x: p.x, y: p.y };
        let z00 = self.elevation(r0, c0).ok_or_else(void)?;
        let z01 = self.elevation(r0, c0 + 1).ok_or_else(void)?;
        let z10 = self.elevation(r0 + 1, c0).ok_or_else(void)?;
        let z11 = self.elevation(r0 + 1, c0 + 1).ok_or_else(void)?;
        let top = z00 + (z01 - z00) * tx;
        let bottom = z10 + (z11 - z10) * tx;
        Ok(top + (bottom - top) * tr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TerrainKind {
    Offroad,
    Road,
}

/// A bounded rectangular region. Off-road environments carry a height grid
/// whose extent defines the bounds; road environments only carry bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    bounds: Bounds,
    height: Option<HeightGrid>,
    kind: TerrainKind,
}

impl Environment {
    pub fn offroad(height: HeightGrid) -> Self {
        Self {
            bounds: height.bounds(),
            height: Some(height),
            kind: TerrainKind::Offroad,
        }
    }

    pub fn road(bounds: Bounds) -> Self {
        Self {
            bounds,
            height: None,
            kind: TerrainKind::Road,
        }
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn height(&self) -> Option<&HeightGrid> {
        self.height.as_ref()
    }

    pub fn kind(&self) -> TerrainKind {
        self.kind
    }

    fn grid(&self) -> Result<&HeightGrid> {
        self.height
            .as_ref()
            .ok_or_else(|| Error::Argument("slope requires an off-road environment with terrain".into()))
    }

    /// Slope magnitude `|∇z|` at `p`, from central differences of the
    /// bilinear surface with a step of one grid spacing. Near the border the
    /// stencil is clipped to the bounds.
    pub fn slope_at(&self, p: Point) -> Result<f64> {
        let grid = self.grid()?;
        if !self.bounds.contains(p) {
            return Err(Error::OutOfBounds { x: p.x, y: p.y });
        }
        let h = grid.spacing();
        let (xm, xp) = ((p.x - h).max(0.0), (p.x + h).min(self.bounds.width));
        let (ym, yp) = ((p.y - h).max(0.0), (p.y + h).min(self.bounds.height));
        let gx = (grid.interpolate(Point::new(xp, p.y))? - grid.interpolate(Point::new(xm, p.y))?) / (xp - xm);
        let gy = (grid.interpolate(Point::new(p.x, yp))? - grid.interpolate(Point::new(p.x, ym))?) / (yp - ym);
        Ok(gx.hypot(gy))
    }

    pub fn speed_at(&self, p: Point, vehicle: &VehicleModel) -> Result<f64> {
        Ok(vehicle.speed_for_slope(self.slope_at(p)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VehicleKind {
    Pedestrian,
    Car,
}

/// Coefficients of the car's linear slope penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeParams {
    /// Slope at which the car reaches its speed floor.
    pub critical_slope: f64,
    /// Speed floor as a fraction of `v_max`.
    pub speed_floor: f64,
}

impl Default for SlopeParams {
    fn default() -> Self {
        Self {
            critical_slope: 0.3,
            speed_floor: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleModel {
    pub kind: VehicleKind,
    /// Peak speed in m/s.
    pub v_max: f64,
    pub slope: SlopeParams,
}

impl VehicleModel {
    /// Peak walking speed of Tobler's hiking function, 6 km/h.
    pub const PEDESTRIAN_PEAK: f64 = 1.666;
    pub const DEFAULT_CAR_SPEED: f64 = 20.0;

    pub fn pedestrian() -> Self {
        Self {
            kind: VehicleKind::Pedestrian,
            v_max: Self::PEDESTRIAN_PEAK,
            slope: SlopeParams::default(),
        }
    }

    pub fn car(v_max: f64) -> Result<Self> {
        if !(v_max > 0.0 && v_max.is_finite()) {
            return Err(Error::Argument(format!("v_max must be positive, got {v_max}")));
        }
        Ok(Self {
            kind: VehicleKind::Car,
            v_max,
            slope: SlopeParams::default(),
        })
    }

    pub fn from_kind(kind: VehicleKind, v_max: Option<f64>) -> Result<Self> {
        let mut model = match kind {
            VehicleKind::Pedestrian => Self::pedestrian(),
            VehicleKind::Car => Self::car(Self::DEFAULT_CAR_SPEED)?,
        };
        if let Some(v) = v_max {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Argument(format!("v_max must be positive, got {v}")));
            }
            model.v_max = v;
        }
        Ok(model)
    }

    /// Speed in m/s on ground of slope magnitude `slope`.
    ///
    /// Pedestrians follow Tobler's hiking function
    /// `v_max * exp(-3.5 |s + 0.05|)`; cars lose speed linearly with slope
    /// down to `speed_floor * v_max` at the critical slope.
    pub fn speed_for_slope(&self, slope: f64) -> f64 {
        match self.kind {
            VehicleKind::Pedestrian => self.v_max * (-3.5 * (slope + 0.05).abs()).exp(),
            VehicleKind::Car => {
                let factor = 1.0 - slope.abs() / self.slope.critical_slope;
                self.v_max * factor.max(self.slope.speed_floor)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissionType {
    /// Moving goods: losses scale with the time spent at a location.
    Transport,
    /// Crossing unseen: any encounter is a total loss.
    Scout,
}

/// Per-node local outcome `α` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeMap {
    alpha: Vec<f64>,
}

impl OutcomeMap {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if let Some((j, a)) = alpha.iter().enumerate().find(|(_, a)| !(0.0..=1.0).contains(*a)) {
            return Err(Error::Argument(format!("alpha[{j}] = {a} is outside [0, 1]")));
        }
        Ok(Self { alpha })
    }

    /// `α = value` everywhere except at the two terminals.
    pub fn uniform(n: usize, value: f64, origin: usize, destination: usize) -> Result<Self> {
        let mut alpha = vec![value; n];
        alpha[origin] = 0.0;
        alpha[destination] = 0.0;
        Self::new(alpha)
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Zeroes `α` on every node sharing an ambush area with either terminal.
    pub fn zero_terminal_areas(&mut self, areas: &AmbushAreaSet, origin: usize, destination: usize) {
        let terminal = [areas.area_of(origin), areas.area_of(destination)];
        for (j, a) in self.alpha.iter_mut().enumerate() {
            if terminal.contains(&areas.area_of(j)) {
                *a = 0.0;
            }
        }
    }
}

/// Per-node outcome for a mission.
///
/// * Off-road transport: `α_j ∝ spacing / speed(node_j)`.
/// * Road transport: `α_j ∝` mean travel time over the edges entering `j`,
///   each edge at `min(edge speed, v_max)`. `edge_speeds` is required.
/// * Scout: `α_j = 1`.
///
/// Transport maps are normalized so the largest non-terminal value is 1.
/// Terminals always get 0.
pub fn compute_outcome_map(
    env: &Environment,
    vehicle: &VehicleModel,
    mission: MissionType,
    network: &Network,
    edge_speeds: Option<&[f64]>,
) -> Result<OutcomeMap> {
    let n = network.node_count();
    if n == 0 {
        return Err(Error::Argument("outcome map needs at least one node".into()));
    }
    let (origin, destination) = (network.origin(), network.destination());
    let is_terminal = |j: usize| j == origin || j == destination;

    if mission == MissionType::Scout {
        let alpha = (0..n).map(|j| if is_terminal(j) { 0.0 } else { 1.0 }).collect();
        return OutcomeMap::new(alpha);
    }

    let times: Vec<f64> = match env.kind() {
        TerrainKind::Offroad => {
            let grid = env.grid()?;
            network
                .nodes()
                .iter()
                .map(|&p| {
                    let v = env.speed_at(p, vehicle)?;
                    if !(v > 0.0) {
                        return Err(Error::Model(format!("zero speed at ({}, {})", p.x, p.y)));
                    }
                    Ok(grid.spacing() / v)
                })
                .collect::<Result<_>>()?
        }
        TerrainKind::Road => {
            let speeds = edge_speeds
                .ok_or_else(|| Error::Argument("road outcome map needs per-edge speeds".into()))?;
            if speeds.len() != network.edge_count() {
                return Err(Error::Dimension(format!(
                    "{} edge speeds for {} edges",
                    speeds.len(),
                    network.edge_count()
                )));
            }
            let mut total = vec![0.0; n];
            let mut count = vec![0usize; n];
            for (edge, &speed) in network.edges().iter().zip(speeds) {
                let v = speed.min(vehicle.v_max);
                if !(v > 0.0) {
                    return Err(Error::Model(format!(
                        "non-positive speed on edge {} -> {}",
                        edge.tail, edge.head
                    )));
                }
                total[edge.head] += edge.length / v;
                count[edge.head] += 1;
            }
            total
                .iter()
                .zip(&count)
                .map(|(&t, &c)| if c == 0 { 0.0 } else { t / c as f64 })
                .collect()
        }
    };

    let max_t = (0..n)
        .filter(|&j| !is_terminal(j))
        .map(|j| times[j])
        .fold(0.0_f64, f64::max);
    let alpha = (0..n)
        .map(|j| {
            if is_terminal(j) || max_t == 0.0 {
                0.0
            } else {
                times[j] / max_t
            }
        })
        .collect();
    OutcomeMap::new(alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AreaLayout {
    /// Square cells of side `reach`, row-major from the south-west corner.
    Grid { cols: usize, rows: usize },
    /// One area per network node; used for road networks.
    Nodes,
}

/// RED's pure strategies: a partition of the network nodes into areas.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbushAreaSet {
    reach: f64,
    layout: AreaLayout,
    cells: Vec<Rect>,
    node_area: Vec<usize>,
    surface: Vec<f64>,
}

impl AmbushAreaSet {
    /// One area per node, each with unit surface.
    pub fn per_node(nodes: &[Point]) -> Self {
        Self {
            reach: 0.0,
            layout: AreaLayout::Nodes,
            cells: nodes
                .iter()
                .map(|p| Rect {
                    x0: p.x,
                    y0: p.y,
                    x1: p.x,
                    y1: p.y,
                })
                .collect(),
            node_area: (0..nodes.len()).collect(),
            surface: vec![1.0; nodes.len()],
        }
    }

    /// Builds a set from an explicit node → area map (unit surfaces).
    pub fn from_assignment(node_area: Vec<usize>, area_count: usize) -> Result<Self> {
        if let Some(&a) = node_area.iter().find(|&&a| a >= area_count) {
            return Err(Error::Argument(format!("area id {a} out of range 0..{area_count}")));
        }
        Ok(Self {
            reach: 0.0,
            layout: AreaLayout::Nodes,
            cells: vec![
                Rect {
                    x0: 0.0,
                    y0: 0.0,
                    x1: 0.0,
                    y1: 0.0
                };
                area_count
            ],
            node_area,
            surface: vec![1.0; area_count],
        })
    }

    pub fn reach(&self) -> f64 {
        self.reach
    }

    pub fn layout(&self) -> AreaLayout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.surface.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surface.is_empty()
    }

    pub fn cells(&self) -> &[Rect] {
        &self.cells
    }

    pub fn node_area(&self) -> &[usize] {
        &self.node_area
    }

    pub fn area_of(&self, node: usize) -> usize {
        self.node_area[node]
    }

    pub fn surface(&self) -> &[f64] {
        &self.surface
    }

    /// Grid cell containing `p` under the half-open rule, clamped so the
    /// far edges of the bounds fall in the last row/column. `None` for
    /// per-node layouts.
    pub fn locate(&self, p: Point) -> Option<usize> {
        match self.layout {
            AreaLayout::Grid { cols, rows } => {
                let c = ((p.x / self.reach).floor().max(0.0) as usize).min(cols - 1);
                let r = ((p.y / self.reach).floor().max(0.0) as usize).min(rows - 1);
                Some(r * cols + c)
            }
            AreaLayout::Nodes => None,
        }
    }
}

/// Tiles `bounds` with squares of side `reach` anchored at the south-west
/// corner (the last row and column are truncated) and assigns each node to
/// the cell containing it.
pub fn tile_ambush_areas(bounds: Bounds, reach: f64, nodes: &[Point]) -> Result<AmbushAreaSet> {
    if !(reach > 0.0 && reach.is_finite()) {
        return Err(Error::Argument(format!("reach must be positive, got {reach}")));
    }
    if reach > bounds.min_side() {
        warn!(
            "reach {reach} exceeds the smallest environment side {}; ambush areas degenerate",
            bounds.min_side()
        );
    }
    let count = |side: f64| ((side / reach).ceil() as usize).max(1);
    let (cols, rows) = (count(bounds.width), count(bounds.height));
    let mut cells = Vec::with_capacity(cols * rows);
    for r in 0..rows {
        for c in 0..cols {
            let x0 = c as f64 * reach;
            let y0 = r as f64 * reach;
            cells.push(Rect {
                x0,
                y0,
                x1: ((c + 1) as f64 * reach).min(bounds.width),
                y1: ((r + 1) as f64 * reach).min(bounds.height),
            });
        }
    }
    let surface = cells.iter().map(Rect::area).collect();
    let mut set = AmbushAreaSet {
        reach,
        layout: AreaLayout::Grid { cols, rows },
        cells,
        node_area: Vec::with_capacity(nodes.len()),
        surface,
    };
    for &p in nodes {
        if !bounds.contains(p) {
            return Err(Error::OutOfBounds { x: p.x, y: p.y });
        }
        let area = set.locate(p).expect("grid layout");
        set.node_area.push(area);
    }
    Ok(set)
}
