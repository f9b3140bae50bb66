#![allow(dead_code)]

use ambush::environment::{AmbushAreaSet, OutcomeMap};
use ambush::geom::Point;
use ambush::network::Network;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIXTURE_EDGES: [(usize, usize); 13] = [
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

pub fn fixture() -> Network {
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
    let arcs: Vec<_> = FIXTURE_EDGES.iter().map(|&(t, h)| (t - 1, h - 1)).collect();
    Network::new(nodes, &arcs, 0, 7).unwrap()
}

/// origin 0 → {1, 2} → destination 3, branches of equal length.
pub fn diamond() -> Network {
    let nodes = vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(1.0, -1.0),
        Point::new(2.0, 0.0),
    ];
    Network::new(nodes, &[(0, 1), (0, 2), (1, 3), (2, 3)], 0, 3).unwrap()
}

/// origin 0 → 1 → 2 → destination 3.
pub fn chain() -> Network {
    let nodes = (0..4).map(|i| Point::new(i as f64, 0.0)).collect();
    Network::new(nodes, &[(0, 1), (1, 2), (2, 3)], 0, 3).unwrap()
}

/// A small random game: up to 9 nodes, up to 5 areas, α random in `[0, 1]`
/// with zero at the terminals.
pub struct SmallGame {
    pub network: Network,
    pub outcome: OutcomeMap,
    pub areas: AmbushAreaSet,
}

pub fn random_game(seed: u64) -> SmallGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(4..=9);
        let nodes: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
            .collect();
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && i != n - 1 && j != 0 && rng.gen_bool(0.3) {
                    arcs.push((i, j));
                }
            }
        }
        let Ok(network) = Network::new(nodes, &arcs, 0, n - 1) else {
            continue;
        };
        let area_count = rng.gen_range(2..=5.min(n));
        let node_area: Vec<usize> = (0..n).map(|_| rng.gen_range(0..area_count)).collect();
        let areas = AmbushAreaSet::from_assignment(node_area, area_count).unwrap();
        let alpha: Vec<f64> = (0..n)
            .map(|j| if j == 0 || j == n - 1 { 0.0 } else { rng.gen_range(0.0..1.0) })
            .collect();
        let outcome = OutcomeMap::new(alpha).unwrap();
        let paths = simple_paths(&network);
        if paths.len() >= 2 && paths.len() <= 60 {
            return SmallGame { network, outcome, areas };
        }
    }
}

/// Every simple origin → destination path, as node sequences.
pub fn simple_paths(network: &Network) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); network.node_count()];
    for e in network.edges() {
        out[e.tail].push(e.head);
    }
    let mut paths = Vec::new();
    let mut stack = vec![network.origin()];
    let mut on_path = vec![false; network.node_count()];
    on_path[network.origin()] = true;
    fn walk(
        u: usize,
        d: usize,
        out: &[Vec<usize>],
        stack: &mut Vec<usize>,
        on_path: &mut [bool],
        paths: &mut Vec<Vec<usize>>,
    ) {
        if u == d {
            paths.push(stack.clone());
            return;
        }
        for &v in &out[u] {
            if !on_path[v] {
                on_path[v] = true;
                stack.push(v);
                walk(v, d, out, stack, on_path, paths);
                stack.pop();
                on_path[v] = false;
            }
        }
    }
    walk(network.origin(), network.destination(), &out, &mut stack, &mut on_path, &mut paths);
    paths
}

/// Loss in each area when walking `nodes`: `α` of every node entered from a
/// different area.
pub fn path_losses(nodes: &[usize], areas: &AmbushAreaSet, alpha: &[f64]) -> Vec<f64> {
    let mut loss = vec![0.0; areas.len()];
    for w in nodes.windows(2) {
        let (a, b) = (areas.area_of(w[0]), areas.area_of(w[1]));
        if a != b {
            loss[b] += alpha[w[1]];
        }
    }
    loss
}

/// Area × path payoff matrix of the game where BLUE picks a simple path.
pub fn payoff_matrix(game: &SmallGame) -> (Vec<Vec<usize>>, Vec<Vec<f64>>) {
    let paths = simple_paths(&game.network);
    let mut m = vec![vec![0.0; paths.len()]; game.areas.len()];
    for (c, path) in paths.iter().enumerate() {
        for (a, l) in path_losses(path, &game.areas, game.outcome.alpha()).into_iter().enumerate() {
            m[a][c] = l;
        }
    }
    (paths, m)
}

pub struct FictitiousPlay {
    /// `min_c (q̄ᵀ M)_c`, a lower bound on the value.
    pub lower: f64,
    /// `max_a (M x̄)_a`, an upper bound on the value.
    pub upper: f64,
    pub x: Vec<f64>,
    pub q: Vec<f64>,
}

/// Brown–Robinson fictitious play on `m` (RED maximizes over rows, BLUE
/// minimizes over columns).
pub fn fictitious_play(m: &[Vec<f64>], rounds: usize) -> FictitiousPlay {
    let (rows, cols) = (m.len(), m[0].len());
    let mut row_total = vec![0.0; rows];
    let mut col_total = vec![0.0; cols];
    let mut x_count = vec![0usize; cols];
    let mut q_count = vec![0usize; rows];
    let (mut c, mut r) = (0usize, 0usize);
    for _ in 0..rounds {
        x_count[c] += 1;
        q_count[r] += 1;
        for a in 0..rows {
            row_total[a] += m[a][c];
        }
        for (k, t) in col_total.iter_mut().enumerate() {
            *t += m[r][k];
        }
        r = (0..rows).fold(0, |best, a| if row_total[a] > row_total[best] { a } else { best });
        c = (0..cols).fold(0, |best, k| if col_total[k] < col_total[best] { k } else { best });
    }
    let t = rounds as f64;
    FictitiousPlay {
        lower: col_total.iter().cloned().fold(f64::INFINITY, f64::min) / t,
        upper: row_total.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / t,
        x: x_count.iter().map(|&k| k as f64 / t).collect(),
        q: q_count.iter().map(|&k| k as f64 / t).collect(),
    }
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting; `None` when singular.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() < 1e-12 {
            return None;
        }
        a.swap(p, k);
        b.swap(p, k);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Some(x)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Value of an equilibrium whose supports have equal size `≤ max_k`, found
/// by solving the indifference equations on every pair of supports.
pub fn support_enumeration(m: &[Vec<f64>], max_k: usize) -> Option<f64> {
    let (rows, cols) = (m.len(), m[0].len());
    for k in 1..=max_k.min(rows).min(cols) {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                // BLUE: Σ_c M[r][c] x_c − v = 0 for r in rs, Σ x = 1
                let mut a = Vec::new();
                let mut b = Vec::new();
                for &r in &rs {
                    let mut row: Vec<f64> = cs.iter().map(|&c| m[r][c]).collect();
                    row.push(-1.0);
                    a.push(row);
                    b.push(0.0);
                }
                let mut ones = vec![1.0; k];
                ones.push(0.0);
                a.push(ones.clone());
                b.push(1.0);
                let Some(xv) = solve_dense(a, b) else { continue };
                // RED: Σ_r q_r M[r][c] − v = 0 for c in cs, Σ q = 1
                let mut a = Vec::new();
                let mut b = Vec::new();
                for &c in &cs {
                    let mut row: Vec<f64> = rs.iter().map(|&r| m[r][c]).collect();
                    row.push(-1.0);
                    a.push(row);
                    b.push(0.0);
                }
                a.push(ones);
                b.push(1.0);
                let Some(qv) = solve_dense(a, b) else { continue };

                let (v, w) = (xv[k], qv[k]);
                if (v - w).abs() > 1e-9 || xv[..k].iter().chain(&qv[..k]).any(|&p| p < -1e-12) {
                    continue;
                }
                let red_ok = (0..rows).all(|r| {
                    let payoff: f64 = cs.iter().zip(&xv).map(|(&c, x)| m[r][c] * x).sum();
                    payoff <= v + 1e-9
                });
                let blue_ok = (0..cols).all(|c| {
                    let payoff: f64 = rs.iter().zip(&qv).map(|(&r, q)| q * m[r][c]).sum();
                    payoff >= v - 1e-9
                });
                if red_ok && blue_ok {
                    return Some(v);
                }
            }
        }
    }
    None
}
