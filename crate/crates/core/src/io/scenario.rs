//! Scenario files: one JSON object describing terrain, terminals, vehicle,
//! mission and solver settings.
//!
//! ```json
//! {
//!   "source": {"heightmap": "terrain.asc"},
//!   "origin": [150.0, 350.0],
//!   "destination": {"lat": 43.74, "lon": 7.43},
//!   "vehicle": "car",
//!   "reach": 100.0
//! }
//! ```
//!
//! Only `source`, `origin` and `destination` are required. Geographic
//! terminals need a road-graph source. Unknown keys are reported as
//! warnings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::environment::{MissionType, VehicleKind};
use crate::error::{Error, Result};
use crate::game::LossModel;
use crate::network::Method;
use crate::{DEFAULT_LAMBDA, DEFAULT_P_MIN};

pub const DEFAULT_NODES: usize = 900;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeightFormat {
    Hgt,
    Ascii,
}

/// Exactly one of `heightmap` and `road_graph` is set. Paths are relative
/// to the scenario file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Source {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heightmap: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<HeightFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub road_graph: Option<PathBuf>,
}

impl Source {
    /// Format of the heightmap, from `format` or else the file extension.
    pub fn height_format(&self) -> Option<HeightFormat> {
        let path = self.heightmap.as_ref()?;
        Some(self.format.unwrap_or_else(|| {
            match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase) {
                Some(ext) if ext == "hgt" => HeightFormat::Hgt,
                _ => HeightFormat::Ascii,
            }
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Location {
    /// `[x, y]` in local meters.
    Meters([f64; 2]),
    Geo { lat: f64, lon: f64 },
}

/// A fully defaulted scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub source: Source,
    pub origin: Location,
    pub destination: Location,
    pub vehicle: VehicleKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_max: Option<f64>,
    pub mission: MissionType,
    /// Ambush-area side in meters; one area per node when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reach: Option<f64>,
    pub lambda: f64,
    pub method: Method,
    pub n_nodes: usize,
    pub seed: u64,
    pub p_min: f64,
    pub loss: LossModel,
    /// Directory that relative source paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct RawScenario {
    source: Option<Source>,
    origin: Option<Location>,
    destination: Option<Location>,
    vehicle: Option<VehicleKind>,
    v_max: Option<f64>,
    mission: Option<MissionType>,
    reach: Option<f64>,
    lambda: Option<f64>,
    method: Option<Method>,
    n_nodes: Option<usize>,
    seed: Option<u64>,
    p_min: Option<f64>,
    loss: Option<LossModel>,
    #[serde(flatten)]
    extra: BTreeMap<String, Value>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub method: Option<Method>,
    pub n_nodes: Option<usize>,
    pub seed: Option<u64>,
    pub reach: Option<f64>,
    pub p_min: Option<f64>,
}

impl Scenario {
    /// An in-memory scenario with every optional field at its default and
    /// no source file.
    pub fn new(origin: Location, destination: Location) -> Self {
        Self {
            source: Source::default(),
            origin,
            destination,
            vehicle: VehicleKind::Car,
            v_max: None,
            mission: MissionType::Transport,
            reach: None,
            lambda: DEFAULT_LAMBDA,
            method: Method::UniD,
            n_nodes: DEFAULT_NODES,
            seed: 0,
            p_min: DEFAULT_P_MIN,
            loss: LossModel::default(),
            base_dir: PathBuf::new(),
            warnings: Vec::new(),
        }
    }

    pub fn apply(&mut self, overrides: &Overrides) -> Result<()> {
        if let Some(v) = overrides.lambda {
            self.lambda = v;
        }
        if let Some(v) = overrides.method {
            self.method = v;
        }
        if let Some(v) = overrides.n_nodes {
            self.n_nodes = v;
        }
        if let Some(v) = overrides.seed {
            self.seed = v;
        }
        if let Some(v) = overrides.reach {
            self.reach = Some(v);
        }
        if let Some(v) = overrides.p_min {
            self.p_min = v;
        }
        self.validate()
    }

    /// Checks every field and reports all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        check_source(&self.source, &mut problems);
        for (name, loc) in [("origin", &self.origin), ("destination", &self.destination)] {
            check_location(name, loc, &self.source, &mut problems);
        }
        check_values(self, &mut problems);
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

fn check_source(source: &Source, problems: &mut Vec<String>) {
    match (&source.heightmap, &source.road_graph) {
        (Some(_), Some(_)) => problems.push("source: give either heightmap or road_graph, not both".into()),
        (None, None) => problems.push("source: needs a heightmap or a road_graph".into()),
        (None, Some(_)) if source.format.is_some() => {
            problems.push("source: format applies to heightmaps only".into())
        }
        _ => {}
    }
}

fn check_location(name: &str, loc: &Location, source: &Source, problems: &mut Vec<String>) {
    match *loc {
        Location::Meters([x, y]) => {
            if !(x.is_finite() && y.is_finite()) {
                problems.push(format!("{name}: coordinates must be finite"));
            }
        }
        Location::Geo { lat, lon } => {
            if !(lat.is_finite() && lon.is_finite() && lat.abs() <= 90.0 && lon.abs() <= 180.0) {
                problems.push(format!("{name}: invalid latitude/longitude"));
            }
            if source.road_graph.is_none() {
                problems.push(format!("{name}: latitude/longitude needs a road_graph source"));
            }
        }
    }
}

fn check_values(s: &Scenario, problems: &mut Vec<String>) {
    if let Some(r) = s.reach {
        if !(r > 0.0 && r.is_finite()) {
            problems.push(format!("reach: must be positive, got {r}"));
        }
    }
    if !(0.0..1.0).contains(&s.lambda) {
        problems.push(format!("lambda: must lie in [0, 1), got {}", s.lambda));
    }
    if !(s.p_min > 0.0 && s.p_min.is_finite()) {
        problems.push(format!("p_min: must be positive, got {}", s.p_min));
    }
    let min_nodes = if s.method == Method::Rdm { 2 } else { 4 };
    if s.n_nodes < min_nodes {
        problems.push(format!("n_nodes: {} needs at least {min_nodes}, got {}", s.method, s.n_nodes));
    }
    if let Some(v) = s.v_max {
        if !(v > 0.0 && v.is_finite()) {
            problems.push(format!("v_max: must be positive, got {v}"));
        }
    }
}

/// Parses and validates a scenario. `base_dir` anchors relative paths.
pub fn read_scenario(text: &str, base_dir: &Path) -> Result<Scenario> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| {
        Error::Validation(vec![format!("line {}, column {}: {e}", e.line(), e.column())])
    })?;
    let warnings: Vec<String> = raw
        .extra
        .keys()
        .map(|k| format!("unknown field '{k}' ignored"))
        .collect();
    for w in &warnings {
        warn!("{w}");
    }

    let mut problems = Vec::new();
    for (name, present) in [
        ("source", raw.source.is_some()),
        ("origin", raw.origin.is_some()),
        ("destination", raw.destination.is_some()),
    ] {
        if !present {
            problems.push(format!("{name}: missing required field"));
        }
    }
    let (Some(source), Some(origin), Some(destination)) = (raw.source, raw.origin, raw.destination) else {
        return Err(Error::Validation(problems));
    };
    let scenario = Scenario {
        source,
        origin,
        destination,
        vehicle: raw.vehicle.unwrap_or(VehicleKind::Car),
        v_max: raw.v_max,
        mission: raw.mission.unwrap_or(MissionType::Transport),
        reach: raw.reach,
        lambda: raw.lambda.unwrap_or(DEFAULT_LAMBDA),
        method: raw.method.unwrap_or(Method::UniD),
        n_nodes: raw.n_nodes.unwrap_or(DEFAULT_NODES),
        seed: raw.seed.unwrap_or(0),
        p_min: raw.p_min.unwrap_or(DEFAULT_P_MIN),
        loss: raw.loss.unwrap_or_default(),
        base_dir: base_dir.to_path_buf(),
        warnings,
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn read_scenario_file(path: &Path) -> Result<Scenario> {
    let text = super::read_to_string(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    read_scenario(&text, &base)
}
