// Realizes optimal flows as weighted paths, then plays the game by
// sampling: a path for BLUE, an ambush area for RED. The empirical mean
// loss matches `qᵀ W p̃`.
//
// `cargo run --release --example monte_carlo`

use ambush::analysis::{decompose_paths, simulate};
use ambush::environment::{AmbushAreaSet, OutcomeMap};
use ambush::game::{build_game_lp, loss_matrix, red_best_response, solve_simplex, strategic_outcome, LossModel};
use ambush::geom::Point;
use ambush::network::{assemble_flow, Network};

const TRIALS: u64 = 100_000;
const SEED: u64 = 7;

fn play(name: &str, network: &Network, alpha: Vec<f64>) -> Result<(), Box<dyn std::error::Error>> {
    let outcome = OutcomeMap::new(alpha)?;
    let areas = AmbushAreaSet::per_node(network.nodes());
    let loss = loss_matrix(network, &outcome, &areas, LossModel::Entry)?;
    let game = build_game_lp(&loss, &assemble_flow(network), &network.lengths(), 0.0)?;
    let (strategy, _) = solve_simplex(&game)?;
    let red = red_best_response(&loss, &strategy.p);

    let paths = decompose_paths(&strategy.p, network)?;
    let p_tilde = paths.reconstruct(network.edge_count());
    let analytic = strategic_outcome(&p_tilde, &red.q, &loss);
    let sim = simulate(&paths, &red.q, &areas, &outcome, LossModel::Entry, TRIALS, SEED)?;

    println!("{name}");
    for path in &paths.paths {
        println!("  path {:?} weight {:.4}", path.nodes, path.weight);
    }
    println!("  analytic  {analytic:.6}");
    println!(
        "  empirical {:.6} ± {:.6} over {} trials ({:.2} standard errors apart)",
        sim.mean,
        sim.std_error,
        sim.trials,
        if sim.std_error > 0.0 { (sim.mean - analytic).abs() / sim.std_error } else { 0.0 }
    );
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let diamond = Network::new(
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, -1.0),
            Point::new(2.0, 0.0),
        ],
        &[(0, 1), (0, 2), (1, 3), (2, 3)],
        0,
        3,
    )?;
    play("diamond", &diamond, vec![0.0, 0.6, 0.3, 0.0])?;

    let chain = Network::new(
        (0..4).map(|i| Point::new(i as f64, 0.0)).collect(),
        &[(0, 1), (1, 2), (2, 3)],
        0,
        3,
    )?;
    play("chain", &chain, vec![0.0, 0.3, 0.8, 0.0])?;
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
