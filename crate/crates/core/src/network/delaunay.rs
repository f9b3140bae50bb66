//! Bowyer–Watson Delaunay triangulation on exact predicates.
//!
//! Orientation and in-circle tests use adaptive exact arithmetic. Exactly
//! cocircular quadruples are resolved by symbolic perturbation: the point of
//! rank `r` is lifted by `ε^(r+1)` above the paraboloid, so the lowest rank
//! dominates. Ranks default to the input order. The result is the Delaunay
//! triangulation of the perturbed set, which is also a valid Delaunay
//! triangulation of the input.

use std::collections::{HashMap, HashSet};

use robust::{incircle, orient2d, Coord};

use crate::error::{Error, Result};
use crate::geom::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    /// Counter-clockwise vertex triples indexing the input points.
    pub triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    /// Undirected edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut set = HashSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                set.insert((a.min(b), a.max(b)));
            }
        }
        let mut edges: Vec<_> = set.into_iter().collect();
        edges.sort_unstable();
        edges
    }
}

fn coord(p: Point) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

struct Mesh {
    pts: Vec<Point>,
    rank: Vec<usize>,
    /// First index of the three bounding vertices appended after the input.
    super_start: usize,
}

impl Mesh {
    fn orient(&self, a: usize, b: usize, c: usize) -> f64 {
        orient2d(coord(self.pts[a]), coord(self.pts[b]), coord(self.pts[c]))
    }

    /// Whether `d` lies inside the circumcircle of counter-clockwise `t`,
    /// with ties broken by the perturbation.
    fn in_circle(&self, t: [usize; 3], d: usize) -> bool {
        let [a, b, c] = t;
        let det = incircle(
            coord(self.pts[a]),
            coord(self.pts[b]),
            coord(self.pts[c]),
            coord(self.pts[d]),
        );
        if det != 0.0 {
            return det > 0.0;
        }
        let dominant = *[a, b, c, d]
            .iter()
            .min_by_key(|&&v| self.rank[v])
            .expect("four indices");
        if dominant == d {
            // d lifted above the circle's plane: outside
            return false;
        }
        // Lifting a vertex raises the plane on its side of the opposite
        // edge, so d is inside iff it shares that side.
        let (u, v) = match dominant {
            x if x == a => (b, c),
            x if x == b => (c, a),
            _ => (a, b),
        };
        let side_d = self.orient(u, v, d);
        let side_dom = self.orient(u, v, dominant);
        side_d != 0.0 && (side_d > 0.0) == (side_dom > 0.0)
    }
}

/// Delaunay triangulation of `points`. Exact duplicates are ignored (they
/// appear in no triangle).
pub fn triangulate(points: &[Point]) -> Result<Triangulation> {
    let rank: Vec<usize> = (0..points.len()).collect();
    triangulate_ranked(points, &rank)
}

/// As [`triangulate`], with cocircular ties broken by `rank` (a permutation
/// of `0..points.len()`) instead of the input order.
pub fn triangulate_ranked(points: &[Point], rank: &[usize]) -> Result<Triangulation> {
    if rank.len() != points.len() {
        return Err(Error::Triangulation(format!(
            "{} ranks for {} points",
            rank.len(),
            points.len()
        )));
    }
    if points.len() < 3 {
        return Err(Error::Triangulation(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(p) = points.iter().find(|p| !(p.x.is_finite() && p.y.is_finite())) {
        return Err(Error::Triangulation(format!("non-finite point ({}, {})", p.x, p.y)));
    }
    let first = points[0];
    let Some(second) = points.iter().copied().find(|&p| p != first) else {
        return Err(Error::Triangulation("all points coincide".into()));
    };
    let non_collinear = points
        .iter()
        .any(|&p| orient2d(coord(first), coord(second), coord(p)) != 0.0);
    if !non_collinear {
        return Err(Error::Triangulation("all points are collinear".into()));
    }

    let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in points {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1.0);
    let (cx, cy) = (0.5 * (min_x + max_x), 0.5 * (min_y + max_y));
    let far = 1e5 * span;

    let n = points.len();
    let mut pts = points.to_vec();
    pts.push(Point::new(cx - far, cy - far));
    pts.push(Point::new(cx + far, cy - far));
    pts.push(Point::new(cx, cy + far));
    let mut rank = rank.to_vec();
    rank.extend([n, n + 1, n + 2]);
    let mesh = Mesh {
        pts,
        rank,
        super_start: n,
    };

    let mut triangles: Vec<[usize; 3]> = vec![[n, n + 1, n + 2]];
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(n);
    let mut boundary: HashMap<(usize, usize), (usize, usize, u32)> = HashMap::new();

    for i in 0..n {
        let p = points[i];
        if !seen.insert((p.x.to_bits(), p.y.to_bits())) {
            continue;
        }
        boundary.clear();
        let mut k = 0;
        let mut any_bad = false;
        while k < triangles.len() {
            let t = triangles[k];
            if mesh.in_circle(t, i) {
                any_bad = true;
                for e in 0..3 {
                    let (u, v) = (t[e], t[(e + 1) % 3]);
                    boundary
                        .entry((u.min(v), u.max(v)))
                        .and_modify(|entry| entry.2 += 1)
                        .or_insert((u, v, 1));
                }
                triangles.swap_remove(k);
            } else {
                k += 1;
            }
        }
        if !any_bad {
            return Err(Error::Triangulation(format!(
                "point {i} at ({}, {}) found no cavity",
                p.x, p.y
            )));
        }
        let mut new_edges: Vec<_> = boundary
            .values()
            .filter(|&&(_, _, count)| count == 1)
            .map(|&(u, v, _)| (u, v))
            .collect();
        new_edges.sort_unstable();
        for (u, v) in new_edges {
            if mesh.orient(u, v, i) > 0.0 {
                triangles.push([u, v, i]);
            } else {
                return Err(Error::Triangulation(format!(
                    "cavity of point {i} is not star-shaped"
                )));
            }
        }
    }

    triangles.retain(|t| t.iter().all(|&v| v < mesh.super_start));
    triangles.sort_unstable();
    if triangles.is_empty() {
        return Err(Error::Triangulation("no triangles produced".into()));
    }
    Ok(Triangulation { triangles })
}

/// Undirected Delaunay adjacency of `points`.
pub fn delaunay_edges(points: &[Point]) -> Result<Vec<(usize, usize)>> {
    Ok(triangulate(points)?.edges())
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    /// Brute-force check: no input point strictly inside any circumcircle.
    fn assert_empty_circumcircles(points: &[Point], tri: &Triangulation) {
        for t in &tri.triangles {
            let [a, b, c] = t.map(|i| points[i]);
            let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
            let sq = |p: Point| p.x * p.x + p.y * p.y;
            let ux = (sq(a) * (b.y - c.y) + sq(b) * (c.y - a.y) + sq(c) * (a.y - b.y)) / d;
            let uy = (sq(a) * (c.x - b.x) + sq(b) * (a.x - c.x) + sq(c) * (b.x - a.x)) / d;
            let center = Point::new(ux, uy);
            let r = center.distance(a);
            for (k, &p) in points.iter().enumerate() {
                if t.contains(&k) {
                    continue;
                }
                assert!(
                    center.distance(p) >= r - 1e-9 * r.max(1.0),
                    "point {k} inside circumcircle of {t:?}"
                );
            }
        }
    }

    #[test]
    fn single_triangle() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        let tri = triangulate(&pts).unwrap();
        assert_eq!(tri.triangles.len(), 1);
        assert_eq!(tri.edges(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn convex_quad_has_one_diagonal() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.1),
            Point::new(2.2, 1.9),
            Point::new(-0.1, 1.5),
        ];
        assert_eq!(delaunay_edges(&pts).unwrap().len(), 5);
    }

    #[test]
    fn cocircular_square_is_resolved_deterministically() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let a = triangulate(&pts).unwrap();
        assert_eq!(a.triangles.len(), 2);
        assert_eq!(a.edges().len(), 5);
        assert_eq!(a, triangulate(&pts).unwrap());
    }

    #[test]
    fn collinear_points_are_rejected() {
        let pts: Vec<_> = (0..5).map(|i| Point::new(i as f64, 2.0 * i as f64)).collect();
        assert!(matches!(triangulate(&pts), Err(Error::Triangulation(_))));
        assert!(triangulate(&pts[..2]).is_err());
    }

    #[test]
    fn random_points_satisfy_empty_circumcircle() {
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<_> = (0..50)
                .map(|_| Point::new(rng.gen::<f64>() * 100.0, rng.gen::<f64>() * 100.0))
                .collect();
            let tri = triangulate(&pts).unwrap();
            assert_empty_circumcircles(&pts, &tri);
        }
    }

    #[test]
    fn dense_random_and_lattice_sets_are_delaunay() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pts: Vec<_> = (0..200)
            .map(|_| Point::new(rng.gen::<f64>(), rng.gen::<f64>()))
            .collect();
        let tri = triangulate(&pts).unwrap();
        assert_empty_circumcircles(&pts, &tri);
        // Euler: a triangulation of n points with h on the hull has 2n - 2 - h triangles
        let lattice: Vec<_> = (0..8)
            .flat_map(|r| (0..8).map(move |c| Point::new(c as f64 * 0.7, r as f64 * 0.7)))
            .collect();
        let tri = triangulate(&lattice).unwrap();
        assert_empty_circumcircles(&lattice, &tri);
        assert_eq!(tri.triangles.len(), 2 * 64 - 2 - 28);
    }

    #[test]
    fn duplicates_are_ignored() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 0.0),
        ];
        let tri = triangulate(&pts).unwrap();
        assert_eq!(tri.triangles.len(), 1);
    }
}
