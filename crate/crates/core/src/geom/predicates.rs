//! Orientation predicate with a floating-point filter and an exact rational fallback.

use super::point::Point;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

// Error bound of the plain determinant, (3 + 16u)u with u = 2^-53.
const CCW_ERR_BOUND: f64 = 3.330_669_073_875_471_6e-16;

/// Twice the signed area of `(a, b, c)`. The sign is exact: positive for a
/// counter-clockwise turn, negative for clockwise, zero for collinear points.
pub fn orient2d(a: Point, b: Point, c: Point) -> f64 {
    let detleft = (a.x - c.x) * (b.y - c.y);
    let detright = (a.y - c.y) * (b.x - c.x);
    let det = detleft - detright;
    let detsum = detleft.abs() + detright.abs();
    if det.abs() > CCW_ERR_BOUND * detsum {
        return det;
    }
    match orient2d_exact(a, b, c) {
        Ordering::Greater => det.abs().max(f64::MIN_POSITIVE),
        Ordering::Less => -det.abs().max(f64::MIN_POSITIVE),
        Ordering::Equal => 0.0,
    }
}

fn rational(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap_or_else(|| BigRational::from_integer(BigInt::zero()))
}

/// Exact sign of the orientation determinant, evaluated over the rationals.
pub fn orient2d_exact(a: Point, b: Point, c: Point) -> Ordering {
    let (ax, ay) = (rational(a.x), rational(a.y));
    let (bx, by) = (rational(b.x), rational(b.y));
    let (cx, cy) = (rational(c.x), rational(c.y));
    let det = (&ax - &cx) * (&by - &cy) - (&ay - &cy) * (&bx - &cx);
    if det.is_zero() {
        Ordering::Equal
    } else if det.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

pub fn orientation(a: Point, b: Point, c: Point) -> Orientation {
    let d = orient2d(a, b, c);
    if d > 0.0 {
        Orientation::CounterClockwise
    } else if d < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

fn on_segment_collinear(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Exact test whether closed segments `[a, b]` and `[c, d]` share a point.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    use Orientation::Collinear;
    if o1 != o2 && o3 != o4 && o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear {
        return true;
    }
    (o1 == Collinear && on_segment_collinear(a, b, c))
        || (o2 == Collinear && on_segment_collinear(a, b, d))
        || (o3 == Collinear && on_segment_collinear(c, d, a))
        || (o4 == Collinear && on_segment_collinear(c, d, b))
}

/// Exact test for a proper crossing: the open segments meet in a single point
/// that is interior to both.
pub fn segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool {
    if a.x.max(b.x) < c.x.min(d.x) || c.x.max(d.x) < a.x.min(b.x) || a.y.max(b.y) < c.y.min(d.y) || c.y.max(d.y) < a.y.min(b.y) {
        return false;
    }
    orient2d(a, b, c) * orient2d(a, b, d) < 0.0 && orient2d(c, d, a) * orient2d(c, d, b) < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_signs() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.0);
        assert!(orient2d(a, b, Point::new(0.0, 1.0)) > 0.0);
        assert!(orient2d(a, b, Point::new(0.0, -1.0)) < 0.0);
        assert_eq!(orient2d(a, b, Point::new(2.0, 0.0)), 0.0);
    }

    #[test]
    fn near_degenerate_falls_back_to_exact() {
        // Points on the line y = x scaled so the naive determinant rounds badly.
        let a = Point::new(0.5, 0.5);
        let b = Point::new(12.0, 12.0);
        let c = Point::new(24.0, 24.0);
        assert_eq!(orient2d(a, b, c), 0.0);
        let c2 = Point::new(24.0, 24.000000000000004);
        assert_eq!(orient2d_exact(a, b, c2), Ordering::Greater);
        assert!(orient2d(a, b, c2) > 0.0);
    }

    #[test]
    fn exact_agrees_with_filter_on_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let p = |r: &mut rand_chacha::ChaCha8Rng| Point::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            let (a, b, c) = (p(&mut rng), p(&mut rng), p(&mut rng));
            let f = orient2d(a, b, c);
            let e = orient2d_exact(a, b, c);
            assert_eq!(f.partial_cmp(&0.0).unwrap(), e);
        }
    }

    #[test]
    fn crossing_and_touching() {
        let p = Point::new;
        assert!(segments_cross_properly(p(0.0, 0.0), p(1.0, 1.0), p(0.0, 1.0), p(1.0, 0.0)));
        assert!(!segments_cross_properly(p(0.0, 0.0), p(1.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)));
        assert!(segments_intersect(p(0.0, 0.0), p(1.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)));
        assert!(!segments_intersect(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0, 1.0)));
    }
}
