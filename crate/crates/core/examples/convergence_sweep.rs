// How the outcome, entropy and travelled distance evolve with network size
// for each construction method, with and without the energy term, on the
// seven-section square of the `seven_sections` example.
//
// `cargo run --release --example convergence_sweep -- 100,400,900 10`
// (sizes, then random seeds; defaults are smaller).

use ambush::environment::{HeightGrid, MissionType};
use ambush::game::RevisedSimplex;
use ambush::io::scenario::{Location, Scenario};
use ambush::io::sweep::{write_sweep_csv, SweepRow};
use ambush::network::Method;
use ambush::pipeline::{build_instance_with, SourceData};

pub fn sweep(sizes: &[usize], seeds: u64) -> Result<(), Box<dyn std::error::Error>> {
    let terrain = HeightGrid::flat(2, 2, 7.0, 0.0)?;
    let mut rows = Vec::new();
    println!(
        "{:<6} {:>5} {:>5} {:>9} {:>8} {:>9} {:>9}",
        "method", "n", "seed", "V", "entropy", "E(1e-4)", "E(0)"
    );
    for method in Method::ALL {
        for &n in sizes {
            let seed_count = if method.is_random() { seeds } else { 1 };
            for seed in 0..seed_count {
                let mut scenario = Scenario::new(Location::Meters([1.5, 3.5]), Location::Meters([5.5, 3.5]));
                scenario.mission = MissionType::Scout;
                scenario.reach = Some(1.0);
                scenario.method = method;
                scenario.n_nodes = n;
                scenario.seed = seed;
                let instance = build_instance_with(&scenario, SourceData::Height(terrain.clone()))?;
                let solution = instance.solve()?;
                let plain = instance.solve_at(0.0, &RevisedSimplex::default())?;
                println!(
                    "{:<6} {:>5} {:>5} {:>9.5} {:>8.4} {:>9.3} {:>9.3}",
                    method.as_str(),
                    n,
                    seed,
                    solution.metrics.outcome,
                    solution.metrics.entropy.unwrap_or(f64::NAN),
                    solution.metrics.energy,
                    plain.metrics.energy
                );
                rows.push(SweepRow::ok(solution.metrics));
            }
        }
    }
    println!();
    print!("{}", write_sweep_csv(&rows)?);
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    sweep(&[100, 400], 3)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        return run_example();
    }
    let sizes = args[0].split(',').map(str::parse).collect::<Result<Vec<usize>, _>>()?;
    let seeds = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(10);
    sweep(&sizes, seeds)
}
