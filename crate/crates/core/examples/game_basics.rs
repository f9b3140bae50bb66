// The game on a diamond with a short and a long branch: BLUE's optimal
// mix, RED's best response, the duality gap, and how the energy weight
// `λ` trades ambush risk for travelled distance.
//
// `cargo run --example game_basics`

use ambush::environment::{AmbushAreaSet, OutcomeMap};
use ambush::game::{build_game_lp, duality_gap, loss_matrix, red_best_response, solve_simplex, LossModel};
use ambush::geom::Point;
use ambush::network::{assemble_flow, Network};

pub fn diamond() -> Result<Network, ambush::Error> {
    let nodes = vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.5),
        Point::new(1.0, -2.0),
        Point::new(2.0, 0.0),
    ];
    Network::new(nodes, &[(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let network = diamond()?;
    let outcome = OutcomeMap::uniform(4, 0.8, 0, 3)?;
    let areas = AmbushAreaSet::per_node(network.nodes());
    let loss = loss_matrix(&network, &outcome, &areas, LossModel::Entry)?;
    let flow = assemble_flow(&network);
    let lengths = network.lengths();
    println!(
        "short branch {:.3} m, long branch {:.3} m",
        lengths[0] + lengths[2],
        lengths[1] + lengths[3]
    );

    println!("{:>8} {:>8} {:>8} {:>8} {:>10} {:>10}", "lambda", "p_short", "p_long", "z*", "q", "gap");
    for lambda in [0.0, 1e-4, 0.1, 0.5, 0.9] {
        let game = build_game_lp(&loss, &flow, &lengths, lambda)?;
        let (strategy, report) = solve_simplex(&game)?;
        let red = red_best_response(&loss, &strategy.p);
        let gap = duality_gap(&strategy.p, &report.dual_q, &loss, &flow, &network, lambda)?;
        println!(
            "{:>8} {:>8.4} {:>8.4} {:>8.4} {:>10} {:>10.2e}",
            lambda,
            strategy.p[0],
            strategy.p[1],
            strategy.z_star,
            format!("{:.2}/{:.2}", red.q[1], red.q[2]),
            gap
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
