mod common;

use common::{apply, convex, motion, star};
use johncut::geom::{carrot_membership, cigar_membership, convex_hull, min_max_extent, min_max_extent_pts, signed_area};
use johncut::Point;
use proptest::prelude::*;
use std::f64::consts::PI;

fn point() -> impl Strategy<Value = Point> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #[test]
    fn shoelace_matches_trapezoids(p in star(30)) {
        let v = p.vertices();
        let n = v.len();
        let trapezoids: f64 = (0..n).map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            (a.x - b.x) * (a.y + b.y) / 2.0
        }).sum();
        prop_assert!((p.area() - trapezoids).abs() <= 1e-12 * p.area());
        let mut rev = v.to_vec();
        rev.reverse();
        prop_assert!((signed_area(&rev) + signed_area(v)).abs() <= 1e-12 * p.area());
    }

    #[test]
    fn interior_angles_sum(p in star(30)) {
        let sum: f64 = (0..p.len()).map(|i| p.interior_angle(i)).sum();
        prop_assert!((sum - (p.len() as f64 - 2.0) * PI).abs() <= 1e-9);
    }

    #[test]
    fn cigar_is_symmetric(a in point(), b in point(), x in point(), eta in 0.01f64..0.5) {
        prop_assume!(a.dist(b) > 1e-3);
        let m = (a + b) * 0.5;
        let u = (b - a).normalized();
        // Reflection across the perpendicular bisector of [a, b].
        let reflected = x - u * (2.0 * (x - m).dot(u));
        let base = cigar_membership(a, b, eta, x).unwrap();
        prop_assert_eq!(base, cigar_membership(b, a, eta, x).unwrap());
        prop_assert_eq!(base, cigar_membership(a, b, eta, reflected).unwrap());
    }

    #[test]
    fn extents_are_rigid_invariants(p in star(24), (angle, shift, _) in motion()) {
        let e = min_max_extent(&p);
        prop_assert!(e.min <= e.max);
        let moved = min_max_extent(&apply(&p, (angle, shift, 1.0)));
        prop_assert!((moved.min - e.min).abs() <= 1e-9 * e.max);
        prop_assert!((moved.max - e.max).abs() <= 1e-9 * e.max);
        let hull = min_max_extent_pts(&convex_hull(p.vertices()));
        prop_assert!((hull.min - e.min).abs() <= 1e-9 * e.max);
        prop_assert!((hull.max - e.max).abs() <= 1e-9 * e.max);
    }

    #[test]
    fn convex_extent_min_is_a_width(p in convex(20)) {
        let e = min_max_extent(&p);
        let v = p.vertices();
        let n = v.len();
        let brute = (0..n).map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            v.iter().map(|&q| (b - a).cross(q - a).abs() / a.dist(b)).fold(0.0, f64::max)
        }).fold(f64::INFINITY, f64::min);
        prop_assert!((e.min - brute).abs() <= 1e-9 * e.max);
    }

    #[test]
    fn carrot_is_monotone_in_eta(curve in prop::collection::vec(point(), 2..6), k in 0usize..5, s in 0.0f64..1.0, jitter in point(), eta in 0.01f64..0.5, shrink in 0.1f64..1.0) {
        let k = k % (curve.len() - 1);
        let x = curve[k].lerp(curve[k + 1], s) + jitter * (0.1 * eta);
        let small = eta * shrink;
        if carrot_membership(&curve, small, x).unwrap() {
            prop_assert!(carrot_membership(&curve, eta, x).unwrap());
        }
    }

    #[test]
    fn carrot_lies_in_doubled_cigar(a in point(), b in point(), s in 0.0f64..1.3, off in -1.2f64..1.2, eta in 0.01f64..0.5) {
        prop_assume!(a.dist(b) > 1e-3);
        let l = a.dist(b);
        let x = a + (b - a) * s + (b - a).perp().normalized() * (off * eta * l * s);
        // Along [a, a + 2(b − a)] the cigar radius at arclength t ≤ |ab| is ηt.
        let inside = carrot_membership(&[a, b], eta, x).unwrap();
        if s <= 1.0 && off.abs() < 0.99 {
            prop_assert!(inside);
        }
        if inside {
            prop_assert!(cigar_membership(a, a + (b - a) * 2.0, eta, x).unwrap());
        }
    }
}
