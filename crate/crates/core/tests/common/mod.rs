//! Shared strategies for the property tests.
#![allow(dead_code)]

use johncut::fixtures::random_convex;
use johncut::{Point, Polygon};
use proptest::prelude::*;
use std::f64::consts::TAU;

/// Star-shaped polygon around the origin: `n` vertices at jittered angles
/// with radii in `[0.3, 1]`.
pub fn star(max_n: usize) -> impl Strategy<Value = Polygon> {
    (3..=max_n)
        .prop_flat_map(|n| (prop::collection::vec(0.3f64..1.0, n), prop::collection::vec(-0.3f64..0.3, n)))
        .prop_filter_map("valid polygon", |(r, j)| {
            let n = r.len();
            let ring = (0..n).map(|k| Point::polar(r[k], TAU * (k as f64 + j[k]) / n as f64)).collect();
            Polygon::new(ring).ok()
        })
}

/// Random convex polygon from the fixture generator.
pub fn convex(max_n: usize) -> impl Strategy<Value = Polygon> {
    (3..=max_n, any::<u64>(), 1.0f64..8.0).prop_filter_map("valid polygon", |(n, seed, aspect)| random_convex(n, seed, aspect).ok())
}

/// Rotation angle, translation and scale.
pub fn motion() -> impl Strategy<Value = (f64, Point, f64)> {
    (0.0f64..TAU, -10.0f64..10.0, -10.0f64..10.0, 0.2f64..5.0).prop_map(|(a, x, y, s)| (a, Point::new(x, y), s))
}

pub fn apply(p: &Polygon, (angle, shift, scale): (f64, Point, f64)) -> Polygon {
    p.rotated(angle).scaled(scale).translated(shift)
}

pub fn map_point(q: Point, (angle, shift, scale): (f64, Point, f64)) -> Point {
    q.rotate(angle) * scale + shift
}

/// Whether `b` is the vertex cycle `a` up to rotation of the start index,
/// within `tol`.
pub fn same_cycle(a: &[Point], b: &[Point], tol: f64) -> bool {
    a.len() == b.len() && (0..b.len()).any(|k| a.iter().enumerate().all(|(i, &p)| p.dist(b[(i + k) % b.len()]) <= tol))
}
