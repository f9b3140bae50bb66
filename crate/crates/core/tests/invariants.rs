mod common;

use ambush::analysis::{cancel_cycles, decompose_paths, is_acyclic, metric_spreading, simulate};
use ambush::environment::{
    compute_outcome_map, tile_ambush_areas, AmbushAreaSet, Environment, HeightGrid, MissionType, OutcomeMap,
    VehicleModel,
};
use ambush::game::{build_game_lp, loss_matrix, red_best_response, solve_simplex, LossModel};
use ambush::io::ascii_grid::{read_ascii_grid, write_ascii_grid};
use ambush::io::export::{export_geojson, export_svg, StrategyView};
use ambush::io::hgt::{read_hgt, write_hgt, HgtResolution, VOID};
use ambush::io::sweep::{write_sweep_csv, SweepRow};
use ambush::network::{assemble_flow, Method, Network};
use ambush::{Bounds, Point};
use common::{diamond, random_game, simple_paths};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Kahn's algorithm on the edges carrying flow.
fn topological_order_exists(p: &[f64], network: &Network) -> bool {
    let n = network.node_count();
    let mut indegree = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for (e, &v) in network.edges().iter().zip(p) {
        if v > 0.0 {
            indegree[e.head] += 1;
            out[e.tail].push(e.head);
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&j| indegree[j] == 0).collect();
    let mut seen = 0;
    while let Some(u) = ready.pop() {
        seen += 1;
        for &v in &out[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                ready.push(v);
            }
        }
    }
    seen == n
}

fn conservation_residual(p: &[f64], network: &Network) -> f64 {
    let mut net = vec![0.0; network.node_count()];
    for (e, v) in network.edges().iter().zip(p) {
        net[e.tail] -= v;
        net[e.head] += v;
    }
    net[network.origin()] += 1.0;
    net[network.destination()] -= 1.0;
    net.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// A unit flow made of weighted simple paths plus circulations around
/// random directed cycles.
fn flow_with_cycles(seed: u64) -> (Network, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(5..=10);
    let nodes: Vec<Point> = (0..n).map(|_| Point::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))).collect();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && i != n - 1 && j != 0 {
                arcs.push((i, j));
            }
        }
    }
    let network = Network::new(nodes, &arcs, 0, n - 1).unwrap();
    let edge = |t: usize, h: usize| network.edges().iter().position(|e| e.tail == t && e.head == h).unwrap();
    let mut p = vec![0.0; network.edge_count()];

    let paths = rng.gen_range(1..=3);
    let mut weights: Vec<f64> = (0..paths).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    for w in weights {
        let mut inner: Vec<usize> = (1..n - 1).filter(|_| rng.gen_bool(0.4)).collect();
        inner.shuffle(&mut rng);
        let mut walk = vec![0];
        walk.extend(inner);
        walk.push(n - 1);
        for pair in walk.windows(2) {
            p[edge(pair[0], pair[1])] += w;
        }
    }
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(2..=4.min(n - 2));
        let mut cycle: Vec<usize> = (1..n - 1).collect();
        cycle.shuffle(&mut rng);
        cycle.truncate(len);
        let c = rng.gen_range(0.05..0.5);
        for k in 0..len {
            p[edge(cycle[k], cycle[(k + 1) % len])] += c;
        }
    }
    (network, p)
}

fn bilinear(grid: &HeightGrid, x: f64, y: f64) -> f64 {
    let h = grid.spacing();
    let top = (grid.rows() - 1) as f64 * h;
    let (fx, fr) = (x / h, (top - y) / h);
    let c = (fx.floor() as usize).min(grid.cols() - 2);
    let r = (fr.floor() as usize).min(grid.rows() - 2);
    let (tx, tr) = (fx - c as f64, fr - r as f64);
    let z = |r: usize, c: usize| grid.elevations()[r * grid.cols() + c];
    let north = z(r, c) * (1.0 - tx) + z(r, c + 1) * tx;
    let south = z(r + 1, c) * (1.0 - tx) + z(r + 1, c + 1) * tx;
    north * (1.0 - tr) + south * tr
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn solved_games_satisfy_the_invariants(seed in 0u64..100_000) {
        let game = random_game(seed);
        let loss = loss_matrix(&game.network, &game.outcome, &game.areas, LossModel::Entry).unwrap();
        let flow = assemble_flow(&game.network);
        let lp = build_game_lp(&loss, &flow, &game.network.lengths(), 0.0).unwrap();
        let (strategy, report) = solve_simplex(&lp).unwrap();
        let p = &strategy.p;

        prop_assert!(conservation_residual(p, &game.network) <= 1e-8);
        let max_wp = loss.mul_vec(p).into_iter().fold(0.0, f64::max);
        prop_assert!((max_wp - strategy.z_star).abs() <= 1e-8);
        let red = red_best_response(&loss, p);
        prop_assert!((red.q.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!((report.dual_q.iter().sum::<f64>() - 1.0).abs() <= 1e-9);

        let ensemble = decompose_paths(p, &game.network).unwrap();
        let rebuilt = ensemble.reconstruct(game.network.edge_count());
        let p_tilde = cancel_cycles(p, &game.network);
        for (a, b) in rebuilt.iter().zip(&p_tilde) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
        prop_assert!((ensemble.total_weight() - 1.0).abs() <= 1e-9);

        // every decomposed path is one of the enumerated simple paths
        let simple = simple_paths(&game.network);
        for path in &ensemble.paths {
            prop_assert!(simple.contains(&path.nodes));
        }
    }

    #[test]
    fn cycle_cancellation_leaves_an_acyclic_unit_flow(seed in 0u64..100_000) {
        let (network, p) = flow_with_cycles(seed);
        prop_assert!(conservation_residual(&p, &network) <= 1e-10);
        let cleaned = cancel_cycles(&p, &network);
        prop_assert!(topological_order_exists(&cleaned, &network));
        prop_assert!(is_acyclic(&cleaned, &network));
        prop_assert!(conservation_residual(&cleaned, &network) <= 1e-10);
        for (a, b) in cleaned.iter().zip(&p) {
            prop_assert!(*a >= 0.0 && *a <= b + 1e-12);
        }
    }

    #[test]
    fn ascii_grids_round_trip(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spacing = rng.gen_range(1.0..100.0);
        let mut elevations = Vec::new();
        let mut mask = Vec::new();
        for _ in 0..50 * 50 {
            let void = rng.gen_bool(0.02);
            mask.push(void);
            elevations.push(if void { 0.0 } else { rng.gen_range(-500.0..5000.0) });
        }
        let grid = HeightGrid::new(50, 50, spacing, elevations, mask).unwrap();
        let back = read_ascii_grid(&write_ascii_grid(&grid)).unwrap();
        prop_assert_eq!((back.rows(), back.cols(), back.spacing()), (50, 50, spacing));
        prop_assert_eq!(back.void_mask(), grid.void_mask());
        for r in 0..50 {
            for c in 0..50 {
                prop_assert_eq!(back.elevation(r, c), grid.elevation(r, c));
            }
        }
    }

    #[test]
    fn slope_matches_an_independent_central_difference(x in 200.0f64..800.0, y in 200.0f64..800.0) {
        let grid = HeightGrid::from_fn(101, 101, 10.0, |x, y| {
            300.0 * (-((x - 500.0).powi(2) + (y - 500.0).powi(2)) / (2.0 * 150.0f64.powi(2))).exp()
        }).unwrap();
        let h = grid.spacing();
        let gx = (bilinear(&grid, x + h, y) - bilinear(&grid, x - h, y)) / (2.0 * h);
        let gy = (bilinear(&grid, x, y + h) - bilinear(&grid, x, y - h)) / (2.0 * h);
        let env = Environment::offroad(grid);
        prop_assert!((env.slope_at(Point::new(x, y)).unwrap() - gx.hypot(gy)).abs() <= 1e-6);
    }

    #[test]
    fn spreading_counts_the_cells_a_walk_enters(seed in 0u64..100_000) {
        // self-avoiding walk over the cells of a 10×10 grid
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cells = vec![(rng.gen_range(0..10i32), rng.gen_range(0..10i32))];
        for _ in 0..rng.gen_range(1..30) {
            let (c, r) = *cells.last().unwrap();
            let moves: Vec<(i32, i32)> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .map(|(dc, dr)| (c + dc, r + dr))
                .filter(|&(c, r)| (0..10).contains(&c) && (0..10).contains(&r) && !cells.contains(&(c, r)))
                .collect();
            if moves.is_empty() {
                break;
            }
            cells.push(moves[rng.gen_range(0..moves.len())]);
        }
        prop_assume!(cells.len() >= 2);
        let nodes: Vec<Point> = cells.iter().map(|&(c, r)| Point::new(c as f64 * 10.0 + 5.0, r as f64 * 10.0 + 5.0)).collect();
        let arcs: Vec<(usize, usize)> = (0..nodes.len() - 1).map(|k| (k, k + 1)).collect();
        let network = Network::new(nodes.clone(), &arcs, 0, nodes.len() - 1).unwrap();
        let areas = tile_ambush_areas(Bounds::new(100.0, 100.0), 10.0, &nodes).unwrap();
        let p = vec![1.0; arcs.len()];
        let spreading = metric_spreading(&p, &network, &areas, 1e-3).unwrap();
        prop_assert!((spreading - (cells.len() - 1) as f64 / 100.0).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 4, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn hgt_tiles_round_trip_bit_exact(seed in 0u64..100_000) {
        let res = HgtResolution::Srtm3;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bytes = Vec::with_capacity(res.byte_len());
        for _ in 0..res.samples() * res.samples() {
            let v: i16 = if rng.gen_bool(0.001) { VOID } else { rng.gen_range(-500..9000) };
            bytes.extend_from_slice(&v.to_be_bytes());
        }
        let grid = read_hgt(&bytes, res, rng.gen_range(-60.0..60.0)).unwrap();
        prop_assert_eq!(write_hgt(&grid, res).unwrap(), bytes);
    }
}

#[test]
fn straight_corridor_spreads_over_three_of_a_hundred_cells() {
    let nodes: Vec<Point> = (0..4).map(|i| Point::new(i as f64 * 10.0 + 5.0, 45.0)).collect();
    let network = Network::new(nodes.clone(), &[(0, 1), (1, 2), (2, 3)], 0, 3).unwrap();
    let areas = tile_ambush_areas(Bounds::new(100.0, 100.0), 10.0, &nodes).unwrap();
    let spreading = metric_spreading(&[1.0; 3], &network, &areas, 1e-3).unwrap();
    assert!((spreading - 0.03).abs() <= 1e-12);
}

#[test]
fn road_outcome_is_proportional_to_travel_time() {
    let nodes = vec![
        Point::new(0.0, 0.0),
        Point::new(100.0, 0.0),
        Point::new(0.0, 100.0),
        Point::new(100.0, 100.0),
    ];
    let network = Network::new(nodes, &[(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3).unwrap();
    let env = Environment::road(Bounds::new(100.0, 100.0));
    let speeds = [10.0, 20.0, 10.0, 20.0];
    let vehicle = VehicleModel::car(30.0).unwrap();
    let alpha = compute_outcome_map(&env, &vehicle, MissionType::Transport, &network, Some(&speeds)).unwrap();
    let alpha = alpha.alpha();
    // 100 m at 10 m/s against 100 m at 20 m/s
    assert!((alpha[1] / alpha[2] - 2.0).abs() <= 1e-12);
    assert_eq!((alpha[0], alpha[3]), (0.0, 0.0));
}

#[test]
fn ambush_on_an_unused_area_never_hits() {
    let network = diamond();
    let outcome = OutcomeMap::new(vec![0.0, 0.6, 0.3, 0.0]).unwrap();
    let areas = AmbushAreaSet::per_node(network.nodes());
    let ensemble = decompose_paths(&[1.0, 0.0, 1.0, 0.0], &network).unwrap();
    let mut q = vec![0.0; 4];
    q[areas.area_of(2)] = 1.0;
    let sim = simulate(&ensemble, &q, &areas, &outcome, LossModel::Entry, 10_000, 3).unwrap();
    assert_eq!(sim.mean, 0.0);
}

#[test]
fn exports_of_an_even_split() {
    let network = diamond();
    let areas = AmbushAreaSet::per_node(network.nodes());
    let p = [0.5; 4];
    let mut q = vec![0.0; 4];
    q[0] = 1.0;
    let view = StrategyView {
        network: &network,
        bounds: Bounds::new(2.0, 2.0),
        p: &p,
        q: &q,
        areas: &areas,
        alpha: &[0.0, 1.0, 1.0, 0.0],
    };
    let doc: serde_json::Value = serde_json::from_str(&export_geojson(&view)).unwrap();
    let edges: Vec<&serde_json::Value> = doc["features"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["geometry"]["type"] == "LineString")
        .collect();
    assert_eq!(edges.len(), 4);
    assert!(edges.iter().all(|f| f["properties"]["flow"] == 0.5));
    assert_eq!(export_svg(&view).matches("<circle").count(), 1);
}

fn sweep_row(method: Method, n: usize, seed: u64) -> SweepRow {
    SweepRow {
        method,
        n,
        lambda: 1e-4,
        seed,
        status: "optimal".into(),
        metrics: None,
    }
}

#[test]
fn sweep_tables_are_sorted_with_one_row_per_run() {
    let one = write_sweep_csv(&[sweep_row(Method::UniD, 100, 0)]).unwrap();
    assert_eq!(one.lines().count(), 2);
    assert_eq!(
        one.lines().next().unwrap(),
        "method,n,sqrt_n,lambda,seed,outcome,energy,spreading,entropy,status"
    );

    let mut rows = Vec::new();
    for method in Method::ALL {
        for n in [100, 400, 900] {
            for seed in 0..10 {
                rows.push(sweep_row(method, n, seed));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    rows.shuffle(&mut rng);
    let csv = write_sweep_csv(&rows).unwrap();
    let keys: Vec<(String, usize, u64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].parse().unwrap(), f[4].parse().unwrap())
        })
        .collect();
    assert_eq!(keys.len(), 90);
    let order = |m: &str| Method::ALL.iter().position(|x| x.as_str() == m).unwrap();
    assert!(keys
        .windows(2)
        .all(|w| (order(&w[0].0), w[0].1, w[0].2) < (order(&w[1].0), w[1].1, w[1].2)));
}
