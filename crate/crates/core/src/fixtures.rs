//! Deterministic test polygons.

use crate::error::{Error, Result};
use crate::geom::{convex_hull, Point, Polygon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Fixture parameters understood by [`generate`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureParams {
    /// Koch generation, comb teeth, spiral windings or vertex count.
    pub n: usize,
    /// Koch angle decay, or the notch gap.
    pub eta: f64,
    pub seed: u64,
}

impl Default for FixtureParams {
    fn default() -> Self {
        FixtureParams { n: 3, eta: 0.5, seed: 42 }
    }
}

pub const KINDS: [&str; 7] = ["koch-variant", "comb", "notched-rect", "spiral", "l-shape", "random-convex", "blob"];

pub fn generate(kind: &str, params: FixtureParams) -> Result<Polygon> {
    match kind {
        "koch-variant" => koch_variant(params.n, params.eta),
        "comb" => comb(params.n.max(1)),
        "notched-rect" => notched_rect(params.eta),
        "spiral" => spiral(params.n.max(1)),
        "l-shape" => l_shape(),
        "random-convex" => random_convex(params.n.max(3), params.seed, 1.0),
        "blob" => blob(params.n.max(8), params.seed),
        other => Err(Error::UnknownKind(other.to_string())),
    }
}

/// Tent half-angle of Koch generation `i ≥ 1`: `π/3 · η^{i−1}`.
pub fn koch_angle(i: usize, eta: f64) -> f64 {
    PI / 3.0 * eta.powi(i as i32 - 1)
}

/// Perimeter multiplier of generation `i`: `2/3 + 1/(3 cos φ_i)`.
pub fn koch_multiplier(i: usize, eta: f64) -> f64 {
    2.0 / 3.0 + 1.0 / (3.0 * koch_angle(i, eta).cos())
}

/// Unit equilateral triangle refined `generations` times by replacing the
/// middle third of every edge with an outward isosceles tent.
pub fn koch_variant(generations: usize, eta: f64) -> Result<Polygon> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter(format!("koch eta = {eta}")));
    }
    let h = 3f64.sqrt() / 2.0;
    let mut ring = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, h)];
    for i in 1..=generations {
        let phi = koch_angle(i, eta);
        let n = ring.len();
        let mut next = Vec::with_capacity(4 * n);
        for k in 0..n {
            let (a, b) = (ring[k], ring[(k + 1) % n]);
            let d = b - a;
            let (p1, p2) = (a + d / 3.0, a + d * (2.0 / 3.0));
            // Counter-clockwise ring: the outside is to the right of each edge.
            let out = Point::new(d.y, -d.x).normalized();
            let apex = a + d * 0.5 + out * (d.norm() / 6.0 * phi.tan());
            next.extend([a, p1, apex, p2]);
        }
        ring = next;
    }
    Polygon::new(ring)
}

/// Bar `[0, 2t−1] × [0, 1]` with `t` unit-wide teeth of height 3 and unit gaps.
pub fn comb(teeth: usize) -> Result<Polygon> {
    let w = (2 * teeth - 1) as f64;
    let mut ring = vec![Point::new(0.0, 0.0), Point::new(w, 0.0)];
    for k in (0..teeth).rev() {
        let x0 = 2.0 * k as f64;
        ring.push(Point::new(x0 + 1.0, 4.0));
        ring.push(Point::new(x0, 4.0));
        if k > 0 {
            ring.push(Point::new(x0, 1.0));
            ring.push(Point::new(x0 - 1.0, 1.0));
        }
    }
    Polygon::new(ring)
}

/// `[0, 10] × [0, 1]` with a V-notch of width 0.1 from the top edge at `x = 5`
/// whose tip sits at height `gap`.
pub fn notched_rect(gap: f64) -> Result<Polygon> {
    if !(gap > 0.0 && gap < 1.0) {
        return Err(Error::InvalidParameter(format!("notch gap = {gap}")));
    }
    Polygon::from_coords(&[(0.0, 0.0), (10.0, 0.0), (10.0, 1.0), (5.05, 1.0), (5.0, gap), (4.95, 1.0), (0.0, 1.0)])
}

/// Rectangular spiral corridor of width 1 with `windings` full turns; passes
/// are 2 apart so the walls between them are 1 thick.
pub fn spiral(windings: usize) -> Result<Polygon> {
    spiral_with(windings, 1.0)
}

/// Rectangular spiral with passes 2 apart and corridor width `width < 2`.
pub fn spiral_with(windings: usize, width: f64) -> Result<Polygon> {
    let dirs = [Point::new(1.0, 0.0), Point::new(0.0, 1.0), Point::new(-1.0, 0.0), Point::new(0.0, -1.0)];
    let mut center = vec![Point::new(0.0, 0.0)];
    for k in 0..4 * windings {
        let len = 2.0 * (k / 2 + 1) as f64;
        center.push(*center.last().unwrap() + dirs[k % 4] * len);
    }
    let m = center.len();
    let normal = |k: usize| {
        let d = (center[k + 1] - center[k]).normalized();
        Point::new(d.y, -d.x)
    };
    let mut right = Vec::with_capacity(m);
    let mut left = Vec::with_capacity(m);
    for k in 0..m {
        // Miter offset: the sum of the adjacent unit normals at a right-angle turn.
        let off = match k {
            0 => normal(0),
            _ if k == m - 1 => normal(m - 2),
            _ => normal(k - 1) + normal(k),
        } * (0.5 * width);
        right.push(center[k] + off);
        left.push(center[k] - off);
    }
    left.reverse();
    right.extend(left);
    Polygon::new(right)
}

pub fn l_shape() -> Result<Polygon> {
    Polygon::from_coords(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)])
}

/// Convex hull of `n` random points near the unit circle, stretched by
/// `aspect` along the x axis.
pub fn random_convex(n: usize, seed: u64, aspect: f64) -> Result<Polygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point> = (0..n)
        .map(|k| {
            let a = 2.0 * PI * (k as f64 + rng.gen_range(-0.3..0.3)) / n as f64;
            let r = rng.gen_range(0.85..1.0);
            Point::new(aspect * r * a.cos(), r * a.sin())
        })
        .collect();
    Polygon::new(convex_hull(&pts))
}

/// Star-shaped blob `r(φ) = 1 + Σ a_k cos(kφ + b_k)` with `n` vertices.
pub fn blob(n: usize, seed: u64) -> Result<Polygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64, f64)> =
        (2..=5).map(|k| (k as f64, rng.gen_range(0.03..0.12), rng.gen_range(0.0..2.0 * PI))).collect();
    let ring = (0..n)
        .map(|i| {
            let phi = 2.0 * PI * i as f64 / n as f64;
            let r = 1.0 + modes.iter().map(|&(k, a, b)| a * (k * phi + b).cos()).sum::<f64>();
            Point::polar(r, phi)
        })
        .collect();
    Polygon::new(ring)
}

/// The named polygon corpus used for calibration and acceptance: Koch
/// generations 0–3, combs with 2–5 teeth, three notch gaps, spirals with 2–4
/// windings, an L-shape and six blobs of up to 200 vertices.
pub fn corpus() -> Vec<(String, Polygon)> {
    let mut out = Vec::new();
    for i in 0..=3 {
        out.push((format!("koch-{i}"), koch_variant(i, 0.5)));
    }
    for t in 2..=5 {
        out.push((format!("comb-{t}"), comb(t)));
    }
    for g in [0.1, 0.01, 0.004] {
        out.push((format!("notch-{g}"), notched_rect(g)));
    }
    for w in 2..=4 {
        out.push((format!("spiral-{w}"), spiral(w)));
    }
    out.push(("l-shape".to_string(), l_shape()));
    for (k, n) in [40, 64, 100, 128, 160, 200].into_iter().enumerate() {
        out.push((format!("blob-{n}"), blob(n, k as u64)));
    }
    out.into_iter().map(|(name, p)| (name, p.expect("corpus fixtures are valid"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn koch_perimeters() {
        assert_relative_eq!(koch_variant(0, 0.5).unwrap().perimeter(), 3.0, epsilon = 1e-12);
        assert_relative_eq!(koch_variant(1, 0.5).unwrap().perimeter(), 4.0, epsilon = 1e-12);
        assert_relative_eq!(koch_multiplier(2, 0.5), 2.0 / 3.0 + 1.0 / (3.0 * (PI / 6.0).cos()), epsilon = 1e-15);
        assert_relative_eq!(koch_multiplier(2, 0.5), 1.0515668, epsilon = 1e-7);
        let p3 = koch_variant(3, 0.5).unwrap();
        assert_eq!(p3.len(), 192);
        let expect = 3.0 * (1..=3).map(|i| koch_multiplier(i, 0.5)).product::<f64>();
        assert_relative_eq!(p3.perimeter(), expect, max_relative = 1e-9);
    }

    #[test]
    fn comb_counts() {
        let c = comb(3).unwrap();
        assert_eq!(c.len(), 12);
        assert_eq!(c.concave_indices().len(), 4);
        assert_relative_eq!(c.area(), 5.0 + 3.0 * 3.0, epsilon = 1e-12);
    }

    #[test]
    fn spiral_is_simple() {
        let s = spiral(4).unwrap();
        assert_eq!(s.len(), 34);
        assert!(s.first_self_intersection().is_none());
        let centerline: f64 = (0..16).map(|k| 2.0 * (k / 2 + 1) as f64).sum();
        assert_relative_eq!(s.area(), centerline, epsilon = 1e-9);
    }

    #[test]
    fn random_shapes_are_valid() {
        for seed in 0..10 {
            assert!(random_convex(12, seed, 3.0).unwrap().is_convex());
            assert!(blob(120, seed).unwrap().first_self_intersection().is_none());
        }
        assert!(matches!(generate("hexagon", FixtureParams::default()), Err(Error::UnknownKind(k)) if k == "hexagon"));
    }
}
