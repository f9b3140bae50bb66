// Flat square, uniform outcome, ambush areas one reach wide: the bisector
// between origin and destination crosses seven areas, and the optimal
// strategy spreads over all of them.
//
// `cargo run --release --example seven_sections`

use ambush::environment::{HeightGrid, MissionType};
use ambush::io::scenario::{Location, Scenario};
use ambush::network::Method;
use ambush::pipeline::{build_instance_with, SourceData};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut scenario = Scenario::new(Location::Meters([1.5, 3.5]), Location::Meters([5.5, 3.5]));
    scenario.reach = Some(1.0);
    scenario.mission = MissionType::Scout;
    scenario.method = Method::UniD;
    scenario.n_nodes = 900;

    let terrain = HeightGrid::flat(2, 2, 7.0, 0.0)?;
    let instance = build_instance_with(&scenario, SourceData::Height(terrain))?;
    let solution = instance.solve()?;
    let m = &solution.metrics;

    println!("nodes {} edges {} areas {}", m.n_nodes, m.n_edges, instance.areas.len());
    println!("z*       {:.6}  (1/7 = {:.6})", solution.strategy.z_star, 1.0 / 7.0);
    println!("entropy  {:.4}  (ln 7 = {:.4})", m.entropy.unwrap_or(f64::NAN), 7f64.ln());
    println!("energy   {:.3}", m.energy);
    let r = &solution.report;
    println!(
        "pivots   {} ({} degenerate, {} Bland, {} refactorizations)",
        r.iterations, r.degenerate_pivots, r.bland_pivots, r.refactorizations
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
