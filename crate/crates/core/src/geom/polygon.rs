use super::point::{point_segment_distance, segment_segment_distance, turn_angle, Point};
use super::predicates::{orient2d, segments_cross_properly};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Relative tolerance; the absolute tolerance of a polygon is `rel` times its bounding-box diagonal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
}

impl Tolerance {
    pub const DEFAULT_REL: f64 = 1e-9;
    pub const ENV_VAR: &'static str = "JOHNCUT_TOL";

    /// Default tolerance, overridden by the `JOHNCUT_TOL` environment variable when set.
    pub fn from_env() -> Self {
        let rel = std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
            .unwrap_or(Self::DEFAULT_REL);
        Tolerance { rel }
    }

    pub fn eps_for(&self, pts: &[Point]) -> f64 {
        let (lo, hi) = bbox(pts);
        (self.rel * lo.dist(hi)).max(f64::MIN_POSITIVE)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::from_env()
    }
}

pub fn bbox(pts: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

/// Signed shoelace area, positive for counter-clockwise rings.
pub fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        s += pts[i].cross(pts[(i + 1) % n]);
    }
    0.5 * s
}

/// Location on the boundary: edge index and parameter in `[0, 1)` along that edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPos {
    pub edge: usize,
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// A simple polygon with counter-clockwise vertex order and cached metrics.
#[derive(Clone, Debug)]
pub struct Polygon {
    verts: Vec<Point>,
    eps: f64,
    area: f64,
    cum: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PolygonRepr {
    vertices: Vec<Point>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    holes: Vec<Vec<Point>>,
}

impl Serialize for Polygon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolygonRepr { vertices: self.verts.clone(), holes: Vec::new() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolygonRepr::deserialize(d)?;
        if !r.holes.is_empty() {
            return Err(serde::de::Error::custom("polygon with holes: use a domain input"));
        }
        validate_polygon(r.vertices, Tolerance::from_env()).map_err(serde::de::Error::custom)
    }
}

fn dedupe(mut pts: Vec<Point>, eps: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(pts.len());
    for p in pts.drain(..) {
        if out.last().map_or(true, |q| q.dist(p) > eps) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0].dist(*out.last().unwrap()) <= eps {
        out.pop();
    }
    out
}

/// Validates a vertex ring: collapses duplicates, rejects degenerate and
/// self-intersecting input, and orients the result counter-clockwise.
pub fn validate_polygon(vertices: Vec<Point>, tol: Tolerance) -> Result<Polygon> {
    if vertices.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidParameter("non-finite coordinate".into()));
    }
    let eps = tol.eps_for(&vertices);
    let raw = Polygon::build(vertices, eps)?;
    if raw.is_flat() {
        return Err(Error::DegenerateArea);
    }
    if let Some(i) = raw.first_self_intersection() {
        return Err(Error::SelfIntersecting(i));
    }
    raw.check_area()
}

impl Polygon {
    /// Validated polygon using the ambient tolerance.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        validate_polygon(vertices, Tolerance::from_env())
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| c.into()).collect())
    }

    /// Builds a polygon from a ring known to be simple; only duplicates,
    /// orientation and area are checked.
    pub fn from_ring(vertices: Vec<Point>, eps: f64) -> Result<Self> {
        Self::build(vertices, eps)?.check_area()
    }

    fn check_area(self) -> Result<Self> {
        if self.area > self.eps * self.perimeter() {
            Ok(self)
        } else {
            Err(Error::DegenerateArea)
        }
    }

    fn build(vertices: Vec<Point>, eps: f64) -> Result<Self> {
        let mut v = dedupe(vertices, eps);
        if v.len() < 3 {
            return Err(Error::TooFewVertices);
        }
        let mut a = signed_area(&v);
        if a < 0.0 {
            v.reverse();
            a = -a;
        }
        let mut cum = Vec::with_capacity(v.len() + 1);
        cum.push(0.0);
        let n = v.len();
        for i in 0..n {
            let l = cum[i] + v[i].dist(v[(i + 1) % n]);
            cum.push(l);
        }
        Ok(Polygon { verts: v, eps, area: a, cum })
    }

    /// All vertices within tolerance of a single line.
    fn is_flat(&self) -> bool {
        let v = &self.verts;
        let (mut a, mut b) = (v[0], v[0]);
        for &p in v {
            if p.dist(v[0]) > b.dist(a) {
                b = p;
            }
        }
        for &p in v {
            if p.dist(b) > a.dist(b) {
                a = p;
            }
        }
        let d = b - a;
        let l = d.norm();
        l <= self.eps || v.iter().all(|&p| (d.cross(p - a) / l).abs() <= self.eps)
    }

    /// Index of an edge taking part in a self-intersection, if any.
    pub fn first_self_intersection(&self) -> Option<usize> {
        let n = self.len();
        let eps = self.eps;
        let boxes: Vec<(Point, Point)> = (0..n)
            .map(|i| {
                let (a, b) = self.edge(i);
                (
                    Point::new(a.x.min(b.x) - eps, a.y.min(b.y) - eps),
                    Point::new(a.x.max(b.x) + eps, a.y.max(b.y) + eps),
                )
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| boxes[i].0.x.total_cmp(&boxes[j].0.x));
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if boxes[j].0.x > boxes[i].1.x {
                    break;
                }
                if boxes[j].0.y > boxes[i].1.y || boxes[i].0.y > boxes[j].1.y {
                    continue;
                }
                let (a, b) = self.edge(i);
                let (c, d) = self.edge(j);
                let adjacent = (i + 1) % n == j || (j + 1) % n == i;
                if adjacent {
                    // Shared vertex is fine; overlap along the edges is not.
                    let (first, second) = if (i + 1) % n == j { (i, j) } else { (j, i) };
                    let (p, q) = self.edge(first);
                    let (_, r) = self.edge(second);
                    if point_segment_distance(p, q, r).0 <= eps || point_segment_distance(r, p, q).0 <= eps {
                        return Some(first.min(second));
                    }
                    if n == 3 {
                        continue;
                    }
                } else if segment_segment_distance(a, b, c, d) <= eps {
                    return Some(i.min(j));
                }
            }
        }
        None
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.cum[self.len()]
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.verts[i % self.len()]
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.verts[i], self.verts[self.next(i)])
    }

    pub fn edge_len(&self, i: usize) -> f64 {
        self.cum[i + 1] - self.cum[i]
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox(&self.verts)
    }

    pub fn bbox_diag(&self) -> f64 {
        let (lo, hi) = self.bbox();
        lo.dist(hi)
    }

    pub fn centroid(&self) -> Point {
        let n = self.len();
        let mut c = Point::default();
        for i in 0..n {
            let (a, b) = self.edge(i);
            c += (a + b) * a.cross(b);
        }
        c / (6.0 * self.area)
    }

    /// Interior angle at vertex `i`, in `(0, 2π)`.
    pub fn interior_angle(&self, i: usize) -> f64 {
        turn_angle(self.vertex(self.prev(i)), self.vertex(i), self.vertex(self.next(i)))
    }

    /// A vertex is concave when its interior angle exceeds π; straight angles count as convex.
    pub fn is_concave(&self, i: usize) -> bool {
        let (p, v, q) = (self.vertex(self.prev(i)), self.vertex(i), self.vertex(self.next(i)));
        if orient2d(p, v, q) >= 0.0 {
            return false;
        }
        self.interior_angle(i) > PI + 1e-12
    }

    pub fn concave_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_concave(i)).collect()
    }

    pub fn is_convex(&self) -> bool {
        (0..self.len()).all(|i| !self.is_concave(i))
    }

    pub fn min_interior_angle(&self) -> f64 {
        (0..self.len()).map(|i| self.interior_angle(i)).fold(f64::INFINITY, f64::min)
    }

    pub fn point_at(&self, pos: BoundaryPos) -> Point {
        let (a, b) = self.edge(pos.edge);
        a.lerp(b, pos.t)
    }

    /// Arclength of a boundary position measured from vertex 0.
    pub fn arclength(&self, pos: BoundaryPos) -> f64 {
        self.cum[pos.edge] + pos.t * self.edge_len(pos.edge)
    }

    /// Boundary position at arclength `s` (taken modulo the perimeter).
    pub fn pos_at_arclength(&self, s: f64) -> BoundaryPos {
        let per = self.perimeter();
        let s = s.rem_euclid(per);
        let e = match self.cum.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(i) => i.min(self.len() - 1),
            Err(i) => i - 1,
        };
        let l = self.edge_len(e);
        let t = if l > 0.0 { ((s - self.cum[e]) / l).clamp(0.0, 1.0) } else { 0.0 };
        if t >= 1.0 {
            BoundaryPos { edge: self.next(e), t: 0.0 }
        } else {
            BoundaryPos { edge: e, t }
        }
    }

    /// Counter-clockwise boundary length from `from` to `to`.
    pub fn boundary_length_between(&self, from: BoundaryPos, to: BoundaryPos) -> f64 {
        (self.arclength(to) - self.arclength(from)).rem_euclid(self.perimeter())
    }

    /// Closest boundary position to `x` and its distance.
    pub fn closest_boundary(&self, x: Point) -> (BoundaryPos, f64) {
        let mut best = (BoundaryPos { edge: 0, t: 0.0 }, f64::INFINITY);
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            let (d, t) = point_segment_distance(x, a, b);
            if d < best.1 {
                best = (BoundaryPos { edge: i, t }, d);
            }
        }
        if best.0.t >= 1.0 {
            best.0 = BoundaryPos { edge: self.next(best.0.edge), t: 0.0 };
        }
        best
    }

    /// Boundary position of `x` when it lies within tolerance of the boundary,
    /// snapped to a vertex when within tolerance of one.
    pub fn locate_boundary(&self, x: Point) -> Option<BoundaryPos> {
        for (i, v) in self.verts.iter().enumerate() {
            if v.dist(x) <= self.eps {
                return Some(BoundaryPos { edge: i, t: 0.0 });
            }
        }
        let (pos, d) = self.closest_boundary(x);
        (d <= self.eps).then_some(pos)
    }

    pub fn dist_to_boundary(&self, x: Point) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            best = best.min(point_segment_distance(x, a, b).0);
        }
        best
    }

    fn winding_number(&self, x: Point) -> i32 {
        let mut wn = 0;
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            if a.y <= x.y {
                if b.y > x.y && orient2d(a, b, x) > 0.0 {
                    wn += 1;
                }
            } else if b.y <= x.y && orient2d(a, b, x) < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    pub fn containment(&self, x: Point) -> Containment {
        if self.dist_to_boundary(x) <= self.eps {
            Containment::Boundary
        } else if self.winding_number(x) != 0 {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    /// Membership in the closed polygon (boundary within tolerance counts).
    pub fn contains(&self, x: Point) -> bool {
        self.containment(x) != Containment::Outside
    }

    pub fn contains_strictly(&self, x: Point) -> bool {
        self.containment(x) == Containment::Inside
    }

    /// Distance to the boundary, negative outside the polygon.
    pub fn signed_distance(&self, x: Point) -> f64 {
        let d = self.dist_to_boundary(x);
        if d <= self.eps || self.winding_number(x) != 0 {
            d
        } else {
            -d
        }
    }

    /// Whether the closed segment `[a, b]` lies in the closed polygon.
    pub fn contains_segment(&self, a: Point, b: Point) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        let eps = self.eps;
        let len = a.dist(b);
        if len <= eps {
            return true;
        }
        let mut params: Vec<f64> = vec![0.0, 1.0];
        for i in 0..self.len() {
            let (c, d) = self.edge(i);
            let (dc, tc) = point_segment_distance(c, a, b);
            let (dd, td) = point_segment_distance(d, a, b);
            if dc <= eps {
                params.push(tc);
            }
            if dd <= eps {
                params.push(td);
            }
            if dc > eps
                && dd > eps
                && segments_cross_properly(a, b, c, d)
                && point_segment_distance(a, c, d).0 > eps
                && point_segment_distance(b, c, d).0 > eps
            {
                return false;
            }
        }
        params.sort_by(f64::total_cmp);
        let min_gap = eps / len;
        for w in params.windows(2) {
            if w[1] - w[0] > min_gap && !self.contains(a.lerp(b, 0.5 * (w[0] + w[1]))) {
                return false;
            }
        }
        true
    }

    /// First boundary point hit by the ray `origin + s * dir` with `s > min_s`
    /// (`dir` need not be normalised; `s` is in units of `|dir|`).
    pub fn ray_hit(&self, origin: Point, dir: Point, min_s: f64) -> Option<(f64, BoundaryPos)> {
        let mut best: Option<(f64, BoundaryPos)> = None;
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            let e = b - a;
            let denom = dir.cross(e);
            if denom == 0.0 {
                continue;
            }
            let ao = a - origin;
            let s = ao.cross(e) / denom;
            let t = ao.cross(dir) / denom;
            if s > min_s && (0.0..=1.0).contains(&t) && best.map_or(true, |(bs, _)| s < bs) {
                best = Some((s, BoundaryPos { edge: i, t }));
            }
        }
        best.map(|(s, mut pos)| {
            if pos.t >= 1.0 {
                pos = BoundaryPos { edge: self.next(pos.edge), t: 0.0 };
            }
            (s, pos)
        })
    }

    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<Polygon> {
        let pts: Vec<Point> = self.verts.iter().map(|&p| f(p)).collect();
        let eps = Tolerance { rel: self.eps / self.bbox_diag().max(f64::MIN_POSITIVE) }.eps_for(&pts);
        Polygon::from_ring(pts, eps)
    }

    pub fn translated(&self, d: Point) -> Polygon {
        self.map_points(|p| p + d).expect("translation preserves validity")
    }

    pub fn rotated(&self, angle: f64) -> Polygon {
        self.map_points(|p| p.rotate(angle)).expect("rotation preserves validity")
    }

    pub fn scaled(&self, s: f64) -> Polygon {
        self.map_points(|p| p * s).expect("scaling preserves validity")
    }

    /// Same ring starting at vertex `k`.
    pub fn cycled(&self, k: usize) -> Polygon {
        let n = self.len();
        let v: Vec<Point> = (0..n).map(|i| self.verts[(i + k) % n]).collect();
        Polygon::from_ring(v, self.eps).expect("cycling preserves validity")
    }

    /// Drops vertices whose interior angle is straight.
    pub fn simplified(&self) -> Polygon {
        let n = self.len();
        let keep: Vec<Point> = (0..n)
            .filter(|&i| {
                let (p, v, q) = (self.vertex(self.prev(i)), self.vertex(i), self.vertex(self.next(i)));
                let d = point_segment_distance(v, p, q).0;
                d > self.eps
            })
            .map(|i| self.verts[i])
            .collect();
        Polygon::from_ring(keep, self.eps).unwrap_or_else(|_| self.clone())
    }
}
