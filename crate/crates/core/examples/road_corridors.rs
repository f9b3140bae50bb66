// Two equally long road corridors between the same endpoints, one with
// twice the speed limit of the other. Transport losses scale with time
// spent, so the fast corridor is safer and carries more of the flow.
//
// `cargo run --example road_corridors`

use ambush::io::road::read_road_graph;
use ambush::io::scenario::{Location, Scenario};
use ambush::pipeline::{build_instance_with, write_artifacts, SourceData};

pub const TWO_CORRIDORS: &str = r#"{
  "nodes": [
    {"id": 1, "lat": 43.7300, "lon": 7.4200},
    {"id": 2, "lat": 43.7310, "lon": 7.4210},
    {"id": 3, "lat": 43.7310, "lon": 7.4230},
    {"id": 4, "lat": 43.7300, "lon": 7.4240},
    {"id": 5, "lat": 43.7290, "lon": 7.4210},
    {"id": 6, "lat": 43.7290, "lon": 7.4230}
  ],
  "ways": [
    {"id": 100, "nodes": [1, 2, 3, 4], "maxspeed": 13.9},
    {"id": 200, "nodes": [1, 5, 6, 4], "maxspeed": 6.95}
  ]
}"#;

/// Flow leaving the origin on the fast and the slow corridor.
fn solve_corridors() -> Result<(f64, f64, std::path::PathBuf), Box<dyn std::error::Error>> {
    let graph = read_road_graph(TWO_CORRIDORS)?;
    let scenario = Scenario::new(
        Location::Geo { lat: 43.7300, lon: 7.4200 },
        Location::Geo { lat: 43.7300, lon: 7.4240 },
    );
    let north = graph.nodes.iter().position(|n| n.id == 2).expect("node 2");
    let instance = build_instance_with(&scenario, SourceData::Road(graph.clone()))?;
    let solution = instance.solve()?;

    let network = &instance.network;
    let (mut fast, mut slow) = (0.0, 0.0);
    for (e, p) in network.edges().iter().zip(&solution.strategy.p) {
        if e.tail == network.origin() {
            let head = network.nodes()[e.head];
            if head.distance(graph.nodes[north].position) < 1e-6 {
                fast += p;
            } else {
                slow += p;
            }
        }
    }
    let dir = std::env::temp_dir().join("ambush-road-corridors");
    write_artifacts(&dir, &scenario, &instance, &solution)?;
    Ok((fast, slow, dir))
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (fast, slow, dir) = solve_corridors()?;
    println!("fast corridor {fast:.4}");
    println!("slow corridor {slow:.4}");
    println!("artifacts in {}", dir.display());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
