// The eight-node, thirteen-edge example network: flow system `A p = b`,
// outcome matrix `D` and the optimal mixed strategy with one ambush area
// per node.
//
// `cargo run --example supplementary_fixture`

use ambush::environment::{AmbushAreaSet, OutcomeMap};
use ambush::game::{build_game_lp, loss_matrix, red_best_response, solve_simplex, LossModel};
use ambush::geom::Point;
use ambush::network::{assemble_flow, assemble_outcome_matrix, Network};

/// Edges as printed, 1-indexed tail → head.
pub const EDGES: [(usize, usize); 13] = [
    (1, 2),
    (1, 4),
    (1, 6),
    (2, 3),
    (2, 5),
    (3, 8),
    (4, 3),
    (4, 5),
    (4, 7),
    (5, 8),
    (6, 5),
    (6, 7),
    (7, 8),
];

pub fn fixture() -> Result<Network, ambush::Error> {
    let nodes = vec![
        Point::new(0.0, 1.0),
        Point::new(1.0, 2.0),
        Point::new(2.0, 2.0),
        Point::new(1.0, 1.0),
        Point::new(2.0, 1.0),
        Point::new(1.0, 0.0),
        Point::new(2.0, 0.0),
        Point::new(3.0, 1.0),
    ];
    let arcs: Vec<_> = EDGES.iter().map(|&(t, h)| (t - 1, h - 1)).collect();
    Network::new(nodes, &arcs, 0, 7)
}

fn print_matrix(name: &str, rows: &[Vec<f64>]) {
    println!("{name}");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>3}")).collect();
        println!("  {}", cells.join(""));
    }
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let network = fixture()?;
    let outcome = OutcomeMap::uniform(8, 1.0, 0, 7)?;
    let flow = assemble_flow(&network);
    let d = assemble_outcome_matrix(&network, &outcome)?;

    print_matrix("A", &flow.a.to_dense());
    println!("b  {:?}", flow.b);
    print_matrix("D", &d.to_dense());

    let areas = AmbushAreaSet::per_node(network.nodes());
    let loss = loss_matrix(&network, &outcome, &areas, LossModel::Inflow)?;
    let game = build_game_lp(&loss, &flow, &network.lengths(), 0.0)?;
    let (strategy, report) = solve_simplex(&game)?;
    let red = red_best_response(&loss, &strategy.p);

    println!("z* = {:.6} after {} pivots", strategy.z_star, report.iterations);
    for (k, (&(t, h), p)) in EDGES.iter().zip(&strategy.p).enumerate() {
        if *p > 1e-9 {
            println!("  e{:<2} {t} -> {h}  p = {p:.4}", k + 1);
        }
    }
    println!("RED best response q = {:?}", red.q);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
