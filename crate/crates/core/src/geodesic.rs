//! Intrinsic (geodesic) metric of a simple polygon.
//!
//! Shortest paths bend only at concave vertices, so distances are computed on
//! the visibility graph of the concave vertices plus the two query points.
//! Per-polygon graphs are built lazily and cached behind `OnceLock`, which makes
//! a [`Geodesic`] safe to share between threads.

use crate::error::{Error, Result};
use crate::geom::{Point, Polygon};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

/// A shortest path inside the polygon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicPath {
    pub length: f64,
    /// Start point, intermediate concave vertices, end point.
    pub waypoints: Vec<Point>,
    /// Polygon indices of the intermediate waypoints.
    pub via: Vec<usize>,
}

#[derive(Debug)]
struct ConcaveGraph {
    /// Polygon indices of the concave vertices.
    nodes: Vec<usize>,
    /// Pairwise distances along the visibility graph (all pairs, Floyd-Warshall).
    apsp: Vec<f64>,
    /// Successor matrix for path recovery.
    next: Vec<usize>,
}

/// Cached geodesic machinery for one polygon.
#[derive(Debug)]
pub struct Geodesic {
    poly: Polygon,
    concave: OnceLock<ConcaveGraph>,
    vis: OnceLock<Arc<Vec<bool>>>,
    inherited: Option<(Arc<Vec<bool>>, usize, Vec<Option<usize>>)>,
}

fn point_key(p: Point) -> (u64, u64) {
    (p.x.to_bits(), p.y.to_bits())
}

impl Geodesic {
    pub fn new(poly: Polygon) -> Self {
        Geodesic { poly, concave: OnceLock::new(), vis: OnceLock::new(), inherited: None }
    }

    /// Context for a piece cut from `parent`'s polygon by chords. Segments between
    /// two points of the piece that stay inside the parent also stay inside the piece,
    /// so vertex visibility is inherited for vertices the piece shares with the parent.
    pub fn for_piece(parent: &Geodesic, piece: Polygon) -> Self {
        let pv = parent.poly.vertices();
        let index: HashMap<(u64, u64), usize> = pv.iter().enumerate().map(|(i, &p)| (point_key(p), i)).collect();
        let map: Vec<Option<usize>> = piece.vertices().iter().map(|&p| index.get(&point_key(p)).copied()).collect();
        let inherited = Some((parent.visibility().clone(), pv.len(), map));
        Geodesic { poly: piece, concave: OnceLock::new(), vis: OnceLock::new(), inherited }
    }

    pub fn polygon(&self) -> &Polygon {
        &self.poly
    }

    /// Vertex-to-vertex visibility matrix (row-major, `n * n`).
    pub fn visibility(&self) -> &Arc<Vec<bool>> {
        self.vis.get_or_init(|| {
            let p = &self.poly;
            let n = p.len();
            let v = p.vertices();
            let mut m = vec![false; n * n];
            for i in 0..n {
                m[i * n + i] = true;
                for j in i + 1..n {
                    let known = self.inherited.as_ref().and_then(|(pm, pn, map)| match (map[i], map[j]) {
                        (Some(a), Some(b)) => Some(pm[a * pn + b]),
                        _ => None,
                    });
                    let ok = known.unwrap_or_else(|| j == i + 1 || (i == 0 && j == n - 1) || p.contains_segment(v[i], v[j]));
                    m[i * n + j] = ok;
                    m[j * n + i] = ok;
                }
            }
            Arc::new(m)
        })
    }

    fn graph(&self) -> &ConcaveGraph {
        self.concave.get_or_init(|| {
            let p = &self.poly;
            let nodes = p.concave_indices();
            let k = nodes.len();
            let n = p.len();
            let v = p.vertices();
            let vis = if self.vis.get().is_some() || self.inherited.is_some() { Some(self.visibility()) } else { None };
            let mut apsp = vec![f64::INFINITY; k * k];
            let mut next = vec![usize::MAX; k * k];
            for a in 0..k {
                apsp[a * k + a] = 0.0;
                next[a * k + a] = a;
                for b in a + 1..k {
                    let (i, j) = (nodes[a], nodes[b]);
                    let seen = match vis {
                        Some(m) => m[i * n + j],
                        None => p.contains_segment(v[i], v[j]),
                    };
                    if seen {
                        let d = v[i].dist(v[j]);
                        apsp[a * k + b] = d;
                        apsp[b * k + a] = d;
                        next[a * k + b] = b;
                        next[b * k + a] = a;
                    }
                }
            }
            for m in 0..k {
                for a in 0..k {
                    let am = apsp[a * k + m];
                    if !am.is_finite() {
                        continue;
                    }
                    for b in 0..k {
                        let cand = am + apsp[m * k + b];
                        if cand < apsp[a * k + b] {
                            apsp[a * k + b] = cand;
                            next[a * k + b] = next[a * k + m];
                        }
                    }
                }
            }
            ConcaveGraph { nodes, apsp, next }
        })
    }

    fn check_inside(&self, x: Point) -> Result<()> {
        if self.poly.contains(x) {
            Ok(())
        } else {
            Err(Error::PointOutside)
        }
    }

    /// Concave nodes visible from `x`, with their distances.
    fn visible_nodes(&self, x: Point) -> Vec<(usize, f64)> {
        let g = self.graph();
        let v = self.poly.vertices();
        g.nodes
            .iter()
            .enumerate()
            .filter(|(_, &i)| self.poly.contains_segment(x, v[i]))
            .map(|(a, &i)| (a, x.dist(v[i])))
            .collect()
    }

    pub fn shortest_path(&self, p: Point, q: Point) -> Result<GeodesicPath> {
        self.check_inside(p)?;
        self.check_inside(q)?;
        if self.poly.contains_segment(p, q) {
            return Ok(GeodesicPath { length: p.dist(q), waypoints: vec![p, q], via: vec![] });
        }
        let g = self.graph();
        let k = g.nodes.len();
        let from_p = self.visible_nodes(p);
        let to_q = self.visible_nodes(q);
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
        for &(a, da) in &from_p {
            for &(b, db) in &to_q {
                let c = da + g.apsp[a * k + b] + db;
                if c < best.0 {
                    best = (c, a, b);
                }
            }
        }
        if !best.0.is_finite() {
            return Err(Error::PointOutside);
        }
        let v = self.poly.vertices();
        let (_, mut a, b) = best;
        let mut via = vec![g.nodes[a]];
        while a != b {
            a = g.next[a * k + b];
            via.push(g.nodes[a]);
        }
        let mut waypoints = vec![p];
        waypoints.extend(via.iter().map(|&i| v[i]));
        waypoints.push(q);
        Ok(GeodesicPath { length: best.0, waypoints, via })
    }

    pub fn distance(&self, p: Point, q: Point) -> Result<f64> {
        Ok(self.shortest_path(p, q)?.length)
    }

    /// Geodesic distance from `p` to every vertex of the polygon.
    pub fn distances_to_vertices(&self, p: Point) -> Result<Vec<f64>> {
        self.check_inside(p)?;
        let g = self.graph();
        let k = g.nodes.len();
        let v = self.poly.vertices();
        let from_p = self.visible_nodes(p);
        let mut dc = vec![f64::INFINITY; k];
        for &(a, da) in &from_p {
            for b in 0..k {
                dc[b] = dc[b].min(da + g.apsp[a * k + b]);
            }
        }
        Ok(v.iter()
            .map(|&u| {
                if self.poly.contains_segment(p, u) {
                    return p.dist(u);
                }
                g.nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, &i)| self.poly.contains_segment(v[i], u))
                    .map(|(b, &i)| dc[b] + v[i].dist(u))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect())
    }

    /// Maximum geodesic distance between two vertices, with a realising pair.
    pub fn diameter(&self) -> (f64, (usize, usize)) {
        self.diameter_above(f64::INFINITY)
    }

    /// Like [`Geodesic::diameter`], but may stop early once a pair at distance
    /// greater than `stop` is found.
    pub fn diameter_above(&self, stop: f64) -> (f64, (usize, usize)) {
        let p = &self.poly;
        let n = p.len();
        let v = p.vertices();
        let vis = self.visibility();
        let g = self.graph();
        let k = g.nodes.len();
        let mut best = (0.0, (0, 0));
        let mut da = vec![f64::INFINITY; k];
        for a in 0..n {
            da.iter_mut().for_each(|x| *x = f64::INFINITY);
            for (c1, &i1) in g.nodes.iter().enumerate() {
                if vis[a * n + i1] {
                    let base = v[a].dist(v[i1]);
                    for c in 0..k {
                        let cand = base + g.apsp[c1 * k + c];
                        if cand < da[c] {
                            da[c] = cand;
                        }
                    }
                }
            }
            for b in a + 1..n {
                let d = if vis[a * n + b] {
                    v[a].dist(v[b])
                } else {
                    let mut m = f64::INFINITY;
                    for (c, &i) in g.nodes.iter().enumerate() {
                        if vis[b * n + i] {
                            m = m.min(da[c] + v[i].dist(v[b]));
                        }
                    }
                    m
                };
                if d > best.0 {
                    best = (d, (a, b));
                    if d > stop {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Geodesic distance from `p` to the closed segment `[a, b]`.
    pub fn distance_to_segment(&self, p: Point, a: Point, b: Point) -> Result<f64> {
        self.check_inside(p)?;
        if !self.poly.contains_segment(a, b) {
            return Err(Error::SegmentNotInPolygon);
        }
        // The last leg of an optimal path is perpendicular to the segment or ends at
        // one of its endpoints; earlier bends happen at concave vertices.
        let leg = |u: Point| -> f64 {
            let d = b - a;
            let l2 = d.norm2();
            let foot = if l2 > 0.0 { a + d * ((u - a).dot(d) / l2).clamp(0.0, 1.0) } else { a };
            [foot, a, b]
                .into_iter()
                .filter(|&z| self.poly.contains_segment(u, z))
                .map(|z| u.dist(z))
                .fold(f64::INFINITY, f64::min)
        };
        let mut best = leg(p);
        let v = self.poly.vertices();
        let g = self.graph();
        let k = g.nodes.len();
        let from_p = self.visible_nodes(p);
        for (c, &i) in g.nodes.iter().enumerate() {
            let dc = from_p.iter().map(|&(a0, d0)| d0 + g.apsp[a0 * k + c]).fold(f64::INFINITY, f64::min);
            if dc < best {
                best = best.min(dc + leg(v[i]));
            }
        }
        Ok(best)
    }
}

/// Geodesic distance between two points of the closed polygon.
pub fn geodesic_distance(p: &Polygon, a: Point, b: Point) -> Result<f64> {
    Geodesic::new(p.clone()).distance(a, b)
}

/// Intrinsic diameter: the largest geodesic distance between two vertices.
pub fn intrinsic_diameter(p: &Polygon) -> (f64, (Point, Point)) {
    let (d, (i, j)) = Geodesic::new(p.clone()).diameter();
    (d, (p.vertex(i), p.vertex(j)))
}

pub fn geodesic_distance_to_segment(p: &Polygon, x: Point, a: Point, b: Point) -> Result<f64> {
    Geodesic::new(p.clone()).distance_to_segment(x, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lshape() -> Polygon {
        Polygon::from_coords(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]).unwrap()
    }

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn square_distance_is_euclidean() {
        let sq = Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_relative_eq!(geodesic_distance(&sq, p(0.1, 0.1), p(0.9, 0.9)).unwrap(), 0.8 * 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(intrinsic_diameter(&sq).0, 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn lshape_distance_wraps_reflex_vertex() {
        let l = lshape();
        let g = Geodesic::new(l.clone());
        let path = g.shortest_path(p(1.9, 0.9), p(0.9, 1.9)).unwrap();
        assert_relative_eq!(path.length, 2.0 * 0.82f64.sqrt(), epsilon = 1e-12);
        assert_eq!(path.waypoints[1], p(1.0, 1.0));
        assert_relative_eq!(g.distance(p(1.5, 0.5), p(1.5, 0.6)).unwrap(), 0.1, epsilon = 1e-12);
        assert_eq!(g.distance(p(1.5, 1.5), p(0.5, 0.5)), Err(Error::PointOutside));
    }

    #[test]
    fn lshape_diameter() {
        let (d, (a, b)) = intrinsic_diameter(&lshape());
        assert_relative_eq!(d, 2.0 * 2f64.sqrt(), epsilon = 1e-12);
        let pair = [a, b];
        assert!(pair.contains(&p(2.0, 0.0)) && pair.contains(&p(0.0, 2.0)));
    }

    #[test]
    fn rectangle_diameter() {
        let r = Polygon::from_coords(&[(0.0, 0.0), (4.0, 0.0), (4.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_relative_eq!(intrinsic_diameter(&r).0, 17f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn distance_to_segment_cases() {
        let sq = Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_relative_eq!(geodesic_distance_to_segment(&sq, p(0.5, 0.5), p(0.0, 0.0), p(1.0, 0.0)).unwrap(), 0.5);
        assert_eq!(geodesic_distance_to_segment(&sq, p(0.5, 0.0), p(0.0, 0.0), p(1.0, 0.0)).unwrap(), 0.0);
        let l = lshape();
        let got = geodesic_distance_to_segment(&l, p(1.8, 0.2), p(0.2, 1.8), p(0.8, 1.8)).unwrap();
        let g = Geodesic::new(l);
        let oracle = (0..=2000)
            .map(|k| g.distance(p(1.8, 0.2), p(0.2, 1.8).lerp(p(0.8, 1.8), k as f64 / 2000.0)).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_relative_eq!(got, oracle, epsilon = 1e-9);
    }

    #[test]
    fn piece_context_inherits_visibility() {
        let l = lshape();
        let parent = Geodesic::new(l.clone());
        let piece = Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]).unwrap();
        let fresh = Geodesic::new(piece.clone()).diameter().0;
        let inherited = Geodesic::for_piece(&parent, piece).diameter().0;
        assert_relative_eq!(fresh, inherited, epsilon = 1e-12);
    }
}
