//! Node sampling and lattice connectivity.
//!
//! Random sampling draws from ChaCha8 seeded with `seed_from_u64(seed)`;
//! each point takes two consecutive `f64` draws from `rand`'s standard
//! uniform distribution (53-bit mantissa), `x` first, scaled to the bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use robust::{orient2d, Coord};

use crate::error::{Error, Result};
use crate::geom::{Bounds, Point};

/// `n` i.i.d. uniform points over `bounds`, followed by `origin` and
/// `destination` (indices `n` and `n + 1`).
///
/// A draw whose points are all collinear is discarded and the generator
/// continues from its current state.
pub fn sample_nodes_random(
    bounds: Bounds,
    n: usize,
    seed: u64,
    origin: Point,
    destination: Point,
) -> Result<Vec<Point>> {
    if n < 2 {
        return Err(Error::Argument(format!("random sampling needs n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut pts: Vec<Point> = (0..n)
            .map(|_| {
                let x = rng.gen::<f64>() * bounds.width;
                let y = rng.gen::<f64>() * bounds.height;
                Point::new(x, y)
            })
            .collect();
        pts.push(origin);
        pts.push(destination);
        if !all_collinear(&pts) {
            return Ok(pts);
        }
    }
}

fn all_collinear(pts: &[Point]) -> bool {
    let c = |p: Point| Coord { x: p.x, y: p.y };
    let a = pts[0];
    let Some(b) = pts.iter().copied().find(|&p| p != a) else {
        return true;
    };
    pts.iter().all(|&p| orient2d(c(a), c(b), c(p)) == 0.0)
}

/// A `side x side` axis-aligned lattice spanning the bounds, row-major from
/// the south-west corner.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub side: usize,
    pub points: Vec<Point>,
}

impl Lattice {
    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.side + col
    }

    /// Nearest lattice node to `p` (ties go to the lower row/column).
    pub fn snap(&self, bounds: Bounds, p: Point) -> usize {
        let last = (self.side - 1) as f64;
        let nearest = |v: f64, extent: f64| {
            let f = (v / extent * last).clamp(0.0, last);
            let lo = f.floor();
            if f - lo > 0.5 {
                lo as usize + 1
            } else {
                lo as usize
            }
        };
        self.index(nearest(p.y, bounds.height), nearest(p.x, bounds.width))
    }
}

/// `⌊√n⌋ x ⌊√n⌋` lattice with spacing `width / (⌊√n⌋ - 1)` (and likewise
/// vertically).
pub fn sample_nodes_uniform(bounds: Bounds, n: usize) -> Result<Lattice> {
    if n < 4 {
        return Err(Error::Argument(format!("lattice sampling needs n >= 4, got {n}")));
    }
    let side = (n as f64).sqrt().floor() as usize;
    // guard against floating sqrt rounding just below a perfect square
    let side = if (side + 1) * (side + 1) <= n { side + 1 } else { side };
    let last = (side - 1) as f64;
    let mut points = Vec::with_capacity(side * side);
    for r in 0..side {
        let y = bounds.height * r as f64 / last;
        for c in 0..side {
            points.push(Point::new(bounds.width * c as f64 / last, y));
        }
    }
    Ok(Lattice { side, points })
}

/// Rook and diagonal neighbors on the lattice, as undirected pairs `(i, j)`
/// with `i < j`.
pub fn grid8_edges(lattice: &Lattice) -> Vec<(usize, usize)> {
    let k = lattice.side;
    let mut edges = Vec::with_capacity(4 * k * k);
    for r in 0..k {
        for c in 0..k {
            let i = lattice.index(r, c);
            if c + 1 < k {
                edges.push((i, lattice.index(r, c + 1)));
            }
            if r + 1 < k {
                edges.push((i, lattice.index(r + 1, c)));
                if c + 1 < k {
                    edges.push((i, lattice.index(r + 1, c + 1)));
                }
                if c > 0 {
                    edges.push((lattice.index(r + 1, c - 1).min(i), lattice.index(r + 1, c - 1).max(i)));
                }
            }
        }
    }
    edges.sort_unstable();
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_sampling_is_deterministic() {
        let b = Bounds::new(100.0, 100.0);
        let (o, d) = (Point::new(0.0, 50.0), Point::new(100.0, 50.0));
        let a = sample_nodes_random(b, 4, 7, o, d).unwrap();
        assert_eq!(a, sample_nodes_random(b, 4, 7, o, d).unwrap());
        assert_ne!(a, sample_nodes_random(b, 4, 8, o, d).unwrap());
        assert_eq!(sample_nodes_random(b, 2, 1, o, d).unwrap().len(), 4);
        assert!(sample_nodes_random(b, 1, 1, o, d).is_err());
    }

    #[test]
    fn random_sampling_is_uniform_by_quadrant() {
        // binomial(n, 1/4): sd = sqrt(n * 1/4 * 3/4)
        let n = 10_000;
        let b = Bounds::new(100.0, 100.0);
        let pts = sample_nodes_random(b, n, 2024, Point::new(0.0, 0.0), Point::new(1.0, 1.0)).unwrap();
        let mut counts = [0usize; 4];
        for p in &pts[..n] {
            counts[(p.x >= 50.0) as usize + 2 * (p.y >= 50.0) as usize] += 1;
        }
        let mean = n as f64 / 4.0;
        let sd = (n as f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - mean).abs() <= 4.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn lattice_shapes() {
        let b = Bounds::new(290.0, 290.0);
        let l = sample_nodes_uniform(b, 900).unwrap();
        assert_eq!(l.side, 30);
        assert_eq!(l.points.len(), 900);
        assert_eq!(l.points[1].x - l.points[0].x, 290.0 / 29.0);
        let small = sample_nodes_uniform(b, 4).unwrap();
        assert_eq!(
            small.points,
            vec![
                Point::new(0.0, 0.0),
                Point::new(290.0, 0.0),
                Point::new(0.0, 290.0),
                Point::new(290.0, 290.0)
            ]
        );
        assert!(sample_nodes_uniform(b, 3).is_err());
    }

    #[test]
    fn snapping_picks_nearest_node() {
        let b = Bounds::new(10.0, 10.0);
        let l = sample_nodes_uniform(b, 121).unwrap();
        assert_eq!(l.snap(b, Point::new(3.4, 7.6)), l.index(8, 3));
        assert_eq!(l.snap(b, Point::new(0.0, 0.0)), 0);
        assert_eq!(l.snap(b, Point::new(10.0, 10.0)), 120);
    }

    fn degrees(lattice: &Lattice) -> Vec<usize> {
        let mut deg = vec![0; lattice.points.len()];
        for (i, j) in grid8_edges(lattice) {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    #[test]
    fn grid8_degrees() {
        let l = sample_nodes_uniform(Bounds::new(2.0, 2.0), 9).unwrap();
        let deg = degrees(&l);
        assert_eq!(deg[4], 8);
        assert_eq!(deg[0], 3);
        assert_eq!(deg[1], 5);
    }

    #[test]
    fn grid8_edge_count_formula_matches_enumeration() {
        for k in 3..=5 {
            let l = sample_nodes_uniform(Bounds::new(1.0, 1.0), k * k).unwrap();
            // brute force: every pair at Chebyshev distance 1
            let mut brute = 0;
            for a in 0..k * k {
                for b in a + 1..k * k {
                    let (ra, ca) = ((a / k) as i64, (a % k) as i64);
                    let (rb, cb) = ((b / k) as i64, (b % k) as i64);
                    if (ra - rb).abs().max((ca - cb).abs()) == 1 {
                        brute += 1;
                    }
                }
            }
            let formula = 2 * k * (k - 1) + 2 * (k - 1) * (k - 1);
            assert_eq!(grid8_edges(&l).len(), brute);
            assert_eq!(brute, formula);
        }
    }
}
