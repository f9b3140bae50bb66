// A 700 m square with a hill between origin and destination. Cars avoid
// the slow slopes, pedestrians are slow everywhere, and scouts care about
// exposure only; each vehicle and mission gets its own outcome map and
// optimal mix.
//
// `cargo run --release --example terrain_missions`

use ambush::environment::{HeightGrid, MissionType, VehicleKind};
use ambush::io::scenario::{Location, Scenario};
use ambush::pipeline::{build_instance_with, write_artifacts, SourceData};

pub fn hill() -> Result<HeightGrid, ambush::Error> {
    HeightGrid::from_fn(71, 71, 10.0, |x, y| {
        let (dx, dy) = (x - 350.0, y - 420.0);
        80.0 * (-(dx * dx + dy * dy) / (2.0 * 110.0 * 110.0)).exp()
    })
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let terrain = hill()?;
    println!(
        "{:<11} {:<10} {:>8} {:>8} {:>9} {:>9} {:>8}",
        "vehicle", "mission", "z*", "V", "E (m)", "spread", "entropy"
    );
    for (vehicle, mission) in [
        (VehicleKind::Car, MissionType::Transport),
        (VehicleKind::Pedestrian, MissionType::Transport),
        (VehicleKind::Car, MissionType::Scout),
    ] {
        let mut scenario = Scenario::new(Location::Meters([50.0, 350.0]), Location::Meters([650.0, 350.0]));
        scenario.vehicle = vehicle;
        scenario.mission = mission;
        scenario.reach = Some(100.0);
        scenario.n_nodes = 400;

        let instance = build_instance_with(&scenario, SourceData::Height(terrain.clone()))?;
        let solution = instance.solve()?;
        let m = &solution.metrics;
        println!(
            "{:<11} {:<10} {:>8.4} {:>8.4} {:>9.1} {:>9.3} {:>8.4}",
            format!("{vehicle:?}").to_lowercase(),
            format!("{mission:?}").to_lowercase(),
            solution.strategy.z_star,
            m.outcome,
            m.energy,
            m.spreading,
            m.entropy.unwrap_or(f64::NAN)
        );

        if vehicle == VehicleKind::Car && mission == MissionType::Transport {
            let dir = std::env::temp_dir().join("ambush-terrain-missions");
            write_artifacts(&dir, &scenario, &instance, &solution)?;
            println!("  artifacts in {}", dir.display());
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
