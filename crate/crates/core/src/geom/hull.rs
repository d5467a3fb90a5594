//! Convex hull, directional extents and the calipers width/diameter pair.

use super::point::Point;
use super::polygon::Polygon;
use super::predicates::orient2d;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Counter-clockwise convex hull (Andrew's monotone chain), collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient2d(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient2d(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Length of the orthogonal projection of `pts` onto the direction at `angle`.
pub fn directional_extent_pts(pts: &[Point], angle: f64) -> f64 {
    let d = Point::polar(1.0, angle);
    let (lo, hi) = pts
        .iter()
        .map(|p| p.dot(d))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)));
    hi - lo
}

pub fn directional_extent(p: &Polygon, angle: f64) -> f64 {
    directional_extent_pts(p.vertices(), angle)
}

/// Minimum width and maximum extent (diameter) of a point set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extents {
    pub min: f64,
    pub max: f64,
    /// Direction in `[0, π)` along which the extent is minimal.
    pub min_angle: f64,
    /// A pair of points realising the diameter.
    pub max_pair: (Point, Point),
}

pub fn min_max_extent_pts(points: &[Point]) -> Extents {
    let h = convex_hull(points);
    let n = h.len();
    let mut max = 0.0;
    let mut max_pair = (h[0], h[0]);
    for i in 0..n {
        for j in i + 1..n {
            let d = h[i].dist(h[j]);
            if d > max {
                max = d;
                max_pair = (h[i], h[j]);
            }
        }
    }
    if n < 3 {
        return Extents { min: 0.0, max, min_angle: 0.0, max_pair };
    }
    let mut min = f64::INFINITY;
    let mut min_angle = 0.0;
    // Rotating calipers: the minimal width is attained with one side flush to a hull edge.
    let mut j = 1;
    for i in 0..n {
        let a = h[i];
        let b = h[(i + 1) % n];
        let e = b - a;
        let len = e.norm();
        let height = |k: usize| e.cross(h[k] - a) / len;
        while height((j + 1) % n) >= height(j) {
            j = (j + 1) % n;
        }
        let w = height(j);
        if w < min {
            min = w;
            min_angle = (e.perp().angle()).rem_euclid(PI);
        }
    }
    Extents { min, max, min_angle, max_pair }
}

pub fn min_max_extent(p: &Polygon) -> Extents {
    min_max_extent_pts(p.vertices())
}

pub fn euclidean_diameter(pts: &[Point]) -> f64 {
    min_max_extent_pts(pts).max
}

/// Part of a convex polygon (CCW ring) on the side `n · x <= c`.
pub fn clip_halfplane(ring: &[Point], n: Point, c: f64) -> Vec<Point> {
    let m = ring.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let (a, b) = (ring[i], ring[(i + 1) % m]);
        let (sa, sb) = (n.dot(a) - c, n.dot(b) - c);
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            out.push(a + (b - a) * (sa / (sa - sb)));
        }
    }
    out
}
