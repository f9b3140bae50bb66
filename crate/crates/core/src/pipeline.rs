//! Scenario → network → game → strategy → metrics, end to end.

use std::path::Path;

use log::info;
use serde::Serialize;

use crate::analysis::{
    decompose_paths, edge_entropy, metric_energy, metric_entropy, metric_spreading, simulate, MetricsReport,
    PathEnsemble, SimulationResult,
};
use crate::environment::{
    compute_outcome_map, tile_ambush_areas, AmbushAreaSet, Environment, HeightGrid, OutcomeMap, VehicleModel,
};
use crate::error::{Error, Result};
use crate::game::{
    build_game_lp, duality_gap, loss_matrix, red_best_response, solve_with, LossModel, LpSolver, LpStatus,
    MixedStrategy, RedStrategy, RevisedSimplex, SolveReport,
};
use crate::geom::{Bounds, Point};
use crate::io::export::{export_geojson, export_svg, StrategyView};
use crate::io::hgt::read_hgt_file;
use crate::io::road::{read_road_graph, RoadGraph};
use crate::io::scenario::{HeightFormat, Location, Scenario};
use crate::io::sweep::{write_sweep_csv, SweepRow};
use crate::io::{ascii_grid::read_ascii_grid, read_to_string, write_file};
use crate::network::{assemble_flow, build_network, FlowSystem, Method, Network};
use crate::sparse::SparseMatrix;

/// Terrain or road data behind a scenario.
#[derive(Debug, Clone)]
pub enum SourceData {
    Height(HeightGrid),
    Road(RoadGraph),
}

/// Reads the scenario's source file.
pub fn load_source(scenario: &Scenario) -> Result<SourceData> {
    if let Some(path) = &scenario.source.road_graph {
        let text = read_to_string(&scenario.resolve(path))?;
        return Ok(SourceData::Road(read_road_graph(&text)?));
    }
    let path = scenario
        .source
        .heightmap
        .as_ref()
        .ok_or_else(|| Error::Validation(vec!["source: needs a heightmap or a road_graph".into()]))?;
    let path = scenario.resolve(path);
    let grid = match scenario.source.height_format() {
        Some(HeightFormat::Hgt) => read_hgt_file(&path)?,
        _ => read_ascii_grid(&read_to_string(&path)?)?,
    };
    Ok(SourceData::Height(grid))
}

/// Everything the game needs, built from one scenario.
#[derive(Debug, Clone)]
pub struct Instance {
    pub env: Environment,
    pub network: Network,
    pub areas: AmbushAreaSet,
    pub outcome: OutcomeMap,
    pub flow: FlowSystem,
    pub loss_model: LossModel,
    pub loss: SparseMatrix,
    pub method: Method,
    pub n: usize,
    pub seed: u64,
    pub lambda: f64,
    pub p_min: f64,
    /// Void elevation cells replaced by their nearest neighbor.
    pub filled_voids: usize,
}

fn meters(loc: &Location, name: &str, road: Option<&RoadGraph>) -> Result<Point> {
    match (*loc, road) {
        (Location::Meters([x, y]), _) => Ok(Point::new(x, y)),
        (Location::Geo { lat, lon }, Some(g)) => Ok(g.project(lat, lon)),
        (Location::Geo { .. }, None) => Err(Error::Validation(vec![format!(
            "{name}: latitude/longitude needs a road_graph source"
        )])),
    }
}

/// Builds the instance from in-memory source data.
pub fn build_instance_with(scenario: &Scenario, source: SourceData) -> Result<Instance> {
    let vehicle = VehicleModel::from_kind(scenario.vehicle, scenario.v_max)?;
    let (env, network, speeds, filled_voids) = match source {
        SourceData::Height(grid) => {
            let (grid, filled) = if grid.void_count() > 0 { grid.fill_voids()? } else { (grid, 0) };
            if filled > 0 {
                info!("filled {filled} void elevation cells");
            }
            let env = Environment::offroad(grid);
            let origin = meters(&scenario.origin, "origin", None)?;
            let destination = meters(&scenario.destination, "destination", None)?;
            let network = build_network(
                scenario.method,
                env.bounds(),
                scenario.n_nodes,
                scenario.seed,
                origin,
                destination,
            )?;
            (env, network, None, filled)
        }
        SourceData::Road(graph) => {
            let origin = meters(&scenario.origin, "origin", Some(&graph))?;
            let destination = meters(&scenario.destination, "destination", Some(&graph))?;
            let (network, speeds) = graph.to_network(origin, destination)?;
            (Environment::road(graph.bounds), network, Some(speeds), 0)
        }
    };
    let areas = match scenario.reach {
        Some(reach) => tile_ambush_areas(env.bounds(), reach, network.nodes())?,
        None => AmbushAreaSet::per_node(network.nodes()),
    };
    let mut outcome = compute_outcome_map(&env, &vehicle, scenario.mission, &network, speeds.as_deref())?;
    outcome.zero_terminal_areas(&areas, network.origin(), network.destination());
    let flow = assemble_flow(&network);
    let loss = loss_matrix(&network, &outcome, &areas, scenario.loss)?;
    info!(
        "instance: {} nodes, {} edges, {} areas",
        network.node_count(),
        network.edge_count(),
        areas.len()
    );
    Ok(Instance {
        env,
        network,
        areas,
        outcome,
        flow,
        loss_model: scenario.loss,
        loss,
        method: scenario.method,
        n: scenario.n_nodes,
        seed: scenario.seed,
        lambda: scenario.lambda,
        p_min: scenario.p_min,
        filled_voids,
    })
}

pub fn build_instance(scenario: &Scenario) -> Result<Instance> {
    build_instance_with(scenario, load_source(scenario)?)
}

/// A solved instance.
#[derive(Debug, Clone)]
pub struct Solution {
    pub strategy: MixedStrategy,
    pub report: SolveReport,
    /// RED's best response to the strategy.
    pub red: RedStrategy,
    pub metrics: MetricsReport,
    pub duality_gap: f64,
}

impl Instance {
    pub fn bounds(&self) -> Bounds {
        self.env.bounds()
    }

    /// Solves at the instance's own `λ` with the default simplex.
    pub fn solve(&self) -> Result<Solution> {
        self.solve_at(self.lambda, &RevisedSimplex::default())
    }

    pub fn solve_at(&self, lambda: f64, solver: &dyn LpSolver) -> Result<Solution> {
        let game = build_game_lp(&self.loss, &self.flow, &self.network.lengths(), lambda)?;
        let (strategy, report) = solve_with(&game, solver)?;
        if report.status != LpStatus::Optimal {
            return Err(Error::Solver(format!(
                "{} after {} pivots",
                report.status.as_str(),
                report.iterations
            )));
        }
        let red = red_best_response(&self.loss, &strategy.p);
        let metrics = self.metrics(&strategy.p, lambda)?;
        let gap = duality_gap(&strategy.p, &report.dual_q, &self.loss, &self.flow, &self.network, lambda)?;
        Ok(Solution {
            strategy,
            report,
            red,
            metrics,
            duality_gap: gap,
        })
    }

    pub fn metrics(&self, p: &[f64], lambda: f64) -> Result<MetricsReport> {
        let entropy = match metric_entropy(p, &self.network, &self.areas) {
            Ok(h) => Some(h),
            Err(Error::UndefinedEntropy) => None,
            Err(e) => return Err(e),
        };
        Ok(MetricsReport {
            method: self.method,
            n: self.n,
            n_nodes: self.network.node_count(),
            n_edges: self.network.edge_count(),
            lambda,
            seed: self.seed,
            outcome: red_best_response(&self.loss, p).value,
            energy: metric_energy(p, &self.network),
            spreading: metric_spreading(p, &self.network, &self.areas, self.p_min)?,
            entropy,
            edge_entropy: edge_entropy(p),
        })
    }

    pub fn view<'a>(&'a self, solution: &'a Solution) -> StrategyView<'a> {
        StrategyView {
            network: &self.network,
            bounds: self.bounds(),
            p: &solution.strategy.p,
            q: &solution.red.q,
            areas: &self.areas,
            alpha: self.outcome.alpha(),
        }
    }
}

/// Monte Carlo check of a solution against its analytic expected loss.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    /// `qᵀ W p̃` for the decomposed flow `p̃`.
    pub analytic: f64,
    pub empirical: SimulationResult,
    pub paths: usize,
    pub residual_cycle_flow: f64,
    /// `|analytic − mean| ≤ 3 · standard error`.
    pub within_3se: bool,
}

pub fn simulate_solution(
    instance: &Instance,
    solution: &Solution,
    trials: u64,
    seed: u64,
) -> Result<(PathEnsemble, SimulationReport)> {
    let ensemble = decompose_paths(&solution.strategy.p, &instance.network)?;
    let p_tilde = ensemble.reconstruct(instance.network.edge_count());
    let q = &solution.red.q;
    let analytic = crate::game::strategic_outcome(&p_tilde, q, &instance.loss);
    let empirical = simulate(
        &ensemble,
        q,
        &instance.areas,
        &instance.outcome,
        instance.loss_model,
        trials,
        seed,
    )?;
    let within_3se = (analytic - empirical.mean).abs() <= 3.0 * empirical.std_error + 1e-12;
    let report = SimulationReport {
        analytic,
        empirical,
        paths: ensemble.paths.len(),
        residual_cycle_flow: ensemble.residual_cycle_flow,
        within_3se,
    };
    Ok((ensemble, report))
}

#[derive(Debug, Serialize)]
struct RunReport<'a> {
    config: &'a Scenario,
    status: LpStatus,
    z_star: f64,
    outcome: f64,
    energy: f64,
    spreading: f64,
    entropy: Option<f64>,
    edge_entropy: f64,
    duality_gap: f64,
    nodes: usize,
    edges: usize,
    areas: usize,
    filled_voids: usize,
    warnings: &'a [String],
    red_best_response: &'a [f64],
    solver: &'a SolveReport,
}

/// Writes `strategy.geojson`, `strategy.svg`, `metrics.csv` and
/// `report.json` into `dir`.
pub fn write_artifacts(dir: &Path, scenario: &Scenario, instance: &Instance, solution: &Solution) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let view = instance.view(solution);
    write_file(&dir.join("strategy.geojson"), export_geojson(&view))?;
    write_file(&dir.join("strategy.svg"), export_svg(&view))?;
    write_file(
        &dir.join("metrics.csv"),
        write_sweep_csv(&[SweepRow::ok(solution.metrics.clone())])?,
    )?;
    let m = &solution.metrics;
    let report = RunReport {
        config: scenario,
        status: solution.report.status,
        z_star: solution.strategy.z_star,
        outcome: m.outcome,
        energy: m.energy,
        spreading: m.spreading,
        entropy: m.entropy,
        edge_entropy: m.edge_entropy,
        duality_gap: solution.duality_gap,
        nodes: instance.network.node_count(),
        edges: instance.network.edge_count(),
        areas: instance.areas.len(),
        filled_voids: instance.filled_voids,
        warnings: &scenario.warnings,
        red_best_response: &solution.red.q,
        solver: &solution.report,
    };
    write_file(&dir.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")
}
