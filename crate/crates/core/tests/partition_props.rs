mod common;

use common::{apply, map_point, motion, same_cycle, star};
use johncut::fixtures::{comb, corpus, l_shape, notched_rect, spiral};
use johncut::partition::{merge_polygons, split_by_chord, Chord};
use johncut::semiconvex::{certify_semiconvex, decompose_semiconvex, SemiconvexParams};
use johncut::{Point, Polygon};
use proptest::prelude::*;

fn concave_points(p: &Polygon) -> Vec<Point> {
    p.concave_indices().into_iter().map(|i| p.vertex(i)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn split_then_merge_restores(p in star(20), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let n = p.len();
        let (i, j) = (i.index(n), j.index(n));
        let Ok(s) = split_by_chord(&p, Chord::new(p.vertex(i), p.vertex(j))) else {
            return Ok(());
        };
        let eps = 10.0 * p.eps();
        let h = p.perimeter();
        prop_assert!((s.q1.perimeter() + s.q2.perimeter() - h - 2.0 * s.chord.length()).abs() <= 1e-9 * h);
        prop_assert!((s.q1.area() + s.q2.area() - p.area()).abs() <= 1e-9 * p.area());
        let (merged, shared) = merge_polygons(&s.q1, &s.q2).unwrap();
        prop_assert!((shared - s.chord.length()).abs() <= eps);
        prop_assert!(same_cycle(p.vertices(), merged.vertices(), eps));
        // No new concave vertices, and the counts add up.
        let parent = concave_points(&p);
        for q in [&s.q1, &s.q2] {
            for c in concave_points(q) {
                prop_assert!(parent.iter().any(|v| v.dist(c) <= eps));
            }
        }
        prop_assert!(s.n1 + s.n2 <= parent.len());
    }
}

fn small_corpus() -> Vec<(String, Polygon)> {
    corpus().into_iter().filter(|(_, p)| p.len() <= 40).collect()
}

#[test]
fn semiconvex_pass_is_monotone() {
    let samples = SemiconvexParams::DEFAULT_SAMPLES;
    for (name, p) in small_corpus() {
        for vt in [0.4, 0.2, 0.1, 0.05] {
            if certify_semiconvex(&p, vt, samples).passed() {
                assert!(certify_semiconvex(&p, vt / 2.0, samples).passed(), "{name} at {vt}");
            }
        }
    }
}

#[test]
fn semiconvex_pieces_introduce_no_concave_vertices() {
    let params = SemiconvexParams::new(0.25, SemiconvexParams::DEFAULT_ETA).unwrap();
    let mut cuts = 0;
    for (name, p) in small_corpus() {
        let d = decompose_semiconvex(&p, &params).unwrap();
        cuts += d.records.len();
        let eps = 10.0 * p.eps();
        let parent = concave_points(&p);
        for q in &d.partition.pieces {
            for c in concave_points(q) {
                assert!(parent.iter().any(|v| v.dist(c) <= eps), "{name}: new concave vertex {c:?}");
            }
        }
        // Far cut endpoints are pairwise distinct and avoid original vertices
        // other than cut starts.
        let ws: Vec<Point> = d.records.iter().map(|r| r.chord.w).collect();
        for (k, w) in ws.iter().enumerate() {
            assert!(ws[k + 1..].iter().all(|u| u.dist(*w) > p.eps()), "{name}: repeated endpoint");
            let at_vertex = p.vertices().iter().any(|v| v.dist(*w) <= p.eps());
            let at_cut_start = d.records.iter().any(|r| r.chord.v.dist(*w) <= p.eps());
            assert!(!at_vertex || at_cut_start, "{name}: endpoint on a vertex that starts no cut");
        }
        let part = &d.partition;
        let h = p.perimeter();
        assert!(part.identity_residual().abs() <= 1e-9 * h, "{name}");
    }
    assert!(cuts > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn semiconvex_decomposition_is_equivariant(k in 0usize..5, m in motion()) {
        let p = [notched_rect(0.1), comb(3), spiral(2), l_shape(), notched_rect(0.01)][k].clone().unwrap();
        let params = SemiconvexParams::new(0.25, SemiconvexParams::DEFAULT_ETA).unwrap();
        let base = decompose_semiconvex(&p, &params).unwrap();
        let moved = decompose_semiconvex(&apply(&p, m), &params).unwrap();
        prop_assert_eq!(base.partition.pieces.len(), moved.partition.pieces.len());
        let tol = 1e-6 * m.2 * p.bbox_diag();
        for q in &base.partition.pieces {
            let image: Vec<Point> = q.vertices().iter().map(|&v| map_point(v, m)).collect();
            prop_assert!(moved.partition.pieces.iter().any(|r| same_cycle(&image, r.vertices(), tol)));
        }
    }
}
