//! Inscribed disks, rotundness certificates and the partition of semiconvex
//! polygons into semiconvex and rotund pieces.
//!
//! A polygon is ω-rotund when it contains a disk of radius `ω d(P)`. The
//! decomposition cuts off the two ends of an elongated polygon along segments
//! orthogonal to its direction of least extent, trims vertices sharper than
//! π/4 into small exceptional triangles and slices the convex middle into slabs.

use crate::error::{Error, Result};
use crate::geodesic::{intrinsic_diameter, Geodesic};
use crate::geom::{clip_halfplane, min_max_extent, segments_intersect, BoundaryPos, Point, Polygon};
use crate::partition::{chord_status, split_unchecked, Chord, Partition};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

/// Largest inscribed disk `(center, radius)`.
///
/// Convex polygons are handled exactly by bisection on inward offsets; other
/// polygons by a 64×64 grid and compass search, then a Newton solve for the
/// medial-axis vertex equidistant from three nearby boundary features.
pub fn inscribed_disk(p: &Polygon) -> (Point, f64) {
    if p.is_convex() {
        convex_inscribed(p)
    } else {
        grid_inscribed(p)
    }
}

fn convex_inscribed(p: &Polygon) -> (Point, f64) {
    let ring = p.vertices();
    let n = ring.len();
    let normals: Vec<(Point, f64)> = (0..n)
        .map(|i| {
            let (a, b) = p.edge(i);
            let out = -(b - a).perp().normalized();
            (out, out.dot(a))
        })
        .collect();
    let offset = |r: f64| {
        let mut reg = ring.to_vec();
        for &(nrm, c) in &normals {
            reg = clip_halfplane(&reg, nrm, c - r);
            if reg.is_empty() {
                break;
            }
        }
        reg
    };
    let (mut lo, mut hi) = (0.0, 0.5 * min_max_extent(p).min);
    let mut best = p.centroid();
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let reg = offset(mid);
        if reg.is_empty() {
            hi = mid;
        } else {
            lo = mid;
            best = reg.iter().fold(Point::new(0.0, 0.0), |s, &q| s + q) / reg.len() as f64;
        }
    }
    (best, p.dist_to_boundary(best))
}

fn clearance(p: &Polygon, x: Point) -> f64 {
    if p.contains(x) {
        p.dist_to_boundary(x)
    } else {
        -1.0
    }
}

fn grid_inscribed(p: &Polygon) -> (Point, f64) {
    const GRID: usize = 64;
    const SEEDS: usize = 8;
    let (lo, hi) = p.bbox();
    let (dx, dy) = ((hi.x - lo.x) / GRID as f64, (hi.y - lo.y) / GRID as f64);
    let mut cells: Vec<(f64, Point)> = Vec::with_capacity(GRID * GRID);
    for i in 0..GRID {
        for j in 0..GRID {
            let x = Point::new(lo.x + (i as f64 + 0.5) * dx, lo.y + (j as f64 + 0.5) * dy);
            let c = clearance(p, x);
            if c > 0.0 {
                cells.push((c, x));
            }
        }
    }
    if cells.is_empty() {
        let c = p.centroid();
        return (c, clearance(p, c).max(0.0));
    }
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let floor = 1e-7 * p.bbox_diag();
    let dirs: Vec<Point> = (0..16).map(|k| Point::polar(1.0, k as f64 * std::f64::consts::PI / 8.0)).collect();
    let mut best = cells[0];
    for &(c0, x0) in cells.iter().take(SEEDS) {
        let (mut c, mut x) = (c0, x0);
        let mut step = dx.max(dy);
        while step > floor {
            let mut moved = false;
            for &d in &dirs {
                let y = x + d * step;
                let cy = clearance(p, y);
                if cy > c {
                    c = cy;
                    x = y;
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        if c > best.0 {
            best = (c, x);
        }
    }
    polish(p, best.1, best.0)
}

/// Boundary feature at which the clearance is attained: an edge interior
/// (line) or a vertex (point).
#[derive(Clone, Copy, PartialEq)]
enum Site {
    Line(Point, f64),
    Vertex(Point),
}

impl Site {
    fn dist(self, x: Point) -> f64 {
        match self {
            Site::Line(n, c) => n.dot(x) - c,
            Site::Vertex(v) => x.dist(v),
        }
    }

    fn grad(self, x: Point) -> Point {
        match self {
            Site::Line(n, _) => n,
            Site::Vertex(v) => (x - v).normalized(),
        }
    }
}

/// The optimum is a medial-axis vertex, equidistant from three boundary
/// features. Solves that system by Newton's method for every triple of
/// features near `x` and keeps the best interior solution.
fn polish(p: &Polygon, x: Point, c: f64) -> (Point, f64) {
    let band = 0.05 * c + 1e-3 * p.bbox_diag();
    let mut sites: Vec<Site> = Vec::new();
    for i in 0..p.len() {
        let (a, b) = p.edge(i);
        let (d, t) = crate::geom::point_segment_distance(x, a, b);
        if d > c + band {
            continue;
        }
        let inward = (b - a).perp().normalized();
        let line = Site::Line(inward, inward.dot(a));
        for s in [line, Site::Vertex(a), Site::Vertex(b)] {
            let relevant = match s {
                Site::Line(..) => t > 0.0 && t < 1.0,
                Site::Vertex(v) => v.dist(x) <= c + band,
            };
            if relevant && !sites.contains(&s) {
                sites.push(s);
            }
        }
    }
    sites.sort_by(|a, b| a.dist(x).total_cmp(&b.dist(x)));
    sites.truncate(12);
    let mut best = (x, c);
    let tol = 1e-15 * p.bbox_diag();
    for i in 0..sites.len() {
        for j in i + 1..sites.len() {
            for k in j + 1..sites.len() {
                let tri = [sites[i], sites[j], sites[k]];
                let (mut y, mut r) = (x, c);
                for _ in 0..30 {
                    let f: Vec<f64> = tri.iter().map(|s| s.dist(y) - r).collect();
                    let g: Vec<Point> = tri.iter().map(|s| s.grad(y)).collect();
                    // Rows [g_k, −1]; solve by Cramer's rule.
                    let det3 = |a: [f64; 3], b: [f64; 3], c: [f64; 3]| {
                        a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
                    };
                    let m = [[g[0].x, g[0].y, -1.0], [g[1].x, g[1].y, -1.0], [g[2].x, g[2].y, -1.0]];
                    let det = det3(m[0], m[1], m[2]);
                    if det.abs() < 1e-12 {
                        break;
                    }
                    let col = |k: usize| -> [[f64; 3]; 3] {
                        let mut mm = m;
                        for (row, fv) in mm.iter_mut().zip(&f) {
                            row[k] = -fv;
                        }
                        mm
                    };
                    let [c0, c1, c2] = [col(0), col(1), col(2)];
                    let (sx, sy, sr) =
                        (det3(c0[0], c0[1], c0[2]) / det, det3(c1[0], c1[1], c1[2]) / det, det3(c2[0], c2[1], c2[2]) / det);
                    y = y + Point::new(sx, sy);
                    r += sr;
                    if sx.hypot(sy) <= tol {
                        break;
                    }
                }
                if y.is_finite() && y.dist(x) <= 2.0 * band {
                    let cy = clearance(p, y);
                    if cy > best.1 {
                        best = (y, cy);
                    }
                }
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotundStatus {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotundCert {
    pub omega: f64,
    pub center: Point,
    pub radius: f64,
    pub diameter: f64,
    pub status: RotundStatus,
}

impl RotundCert {
    pub fn passed(&self) -> bool {
        self.status == RotundStatus::Pass
    }

    /// Achieved ratio `radius / diameter`.
    pub fn ratio(&self) -> f64 {
        self.radius / self.diameter
    }
}

/// Passes iff the inscribed radius is at least `ω d(P)`.
pub fn certify_rotund(p: &Polygon, omega: f64) -> RotundCert {
    let (center, radius) = inscribed_disk(p);
    let diameter = intrinsic_diameter(p).0;
    let ok = radius >= omega * diameter * (1.0 - 1e-12);
    RotundCert { omega, center, radius, diameter, status: if ok { RotundStatus::Pass } else { RotundStatus::Fail } }
}

/// Largest ω for which `p` is ω-rotund.
pub fn rotundity(p: &Polygon) -> f64 {
    inscribed_disk(p).1 / intrinsic_diameter(p).0
}

/// A disk inside a convex polygon with radius at least a quarter of its minimal width.
pub fn convex_ball_bound(p: &Polygon) -> Result<(Point, f64)> {
    if !p.is_convex() {
        return Err(Error::NotConvex);
    }
    Ok(convex_inscribed(p))
}

/// Coordinates rotated by `phi`, so that the direction of least extent becomes `e2`.
#[derive(Clone, Copy, Debug)]
struct Frame {
    phi: f64,
}

impl Frame {
    fn aligned(p: &Polygon) -> Self {
        Frame { phi: FRAC_PI_2 - min_max_extent(p).min_angle }
    }

    fn fwd(&self, x: Point) -> Point {
        x.rotate(self.phi)
    }

    fn back(&self, x: Point) -> Point {
        x.rotate(-self.phi)
    }

    fn extents(&self, p: &Polygon) -> (f64, f64, f64, f64) {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &v in p.vertices() {
            let q = self.fwd(v);
            x0 = x0.min(q.x);
            x1 = x1.max(q.x);
            y0 = y0.min(q.y);
            y1 = y1.max(q.y);
        }
        (x0, x1, y0, y1)
    }
}

/// A segment of `P ∩ {x = t}` (frame coordinates) as a pair of boundary positions,
/// lower endpoint first, with its length.
#[derive(Clone, Copy, Debug)]
struct Stab {
    lower: BoundaryPos,
    upper: BoundaryPos,
    y0: f64,
    y1: f64,
}

impl Stab {
    fn len(&self) -> f64 {
        self.y1 - self.y0
    }
}

/// Intervals of the vertical line `x = t` (frame coordinates) inside `p`.
fn stab(p: &Polygon, fr: Frame, t: f64) -> Option<Vec<Stab>> {
    let n = p.len();
    let eps = p.eps();
    let q: Vec<Point> = p.vertices().iter().map(|&v| fr.fwd(v)).collect();
    let sign = |i: usize| {
        let s = q[i].x - t;
        if s.abs() <= eps {
            0
        } else if s > 0.0 {
            1
        } else {
            -1
        }
    };
    let mut hits: Vec<(f64, BoundaryPos)> = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let (si, sj) = (sign(i), sign(j));
        if si != 0 && sj != 0 && si != sj {
            let s = (t - q[i].x) / (q[j].x - q[i].x);
            hits.push((q[i].y + s * (q[j].y - q[i].y), BoundaryPos { edge: i, t: s }));
        }
        if si == 0 {
            let (sp, sn) = (sign((i + n - 1) % n), sj);
            if sp == 0 || sn == 0 {
                return None;
            }
            if sp != sn {
                hits.push((q[i].y, BoundaryPos { edge: i, t: 0.0 }));
            }
        }
    }
    if hits.len() % 2 == 1 {
        return None;
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    Some(
        hits.chunks(2)
            .map(|c| Stab { lower: c[0].1, upper: c[1].1, y0: c[0].0, y1: c[1].0 })
            .collect(),
    )
}

/// The interval of `x = t` containing (or nearest to) height `y`.
fn stab_near(p: &Polygon, fr: Frame, t: f64, y: f64) -> Option<Stab> {
    stab(p, fr, t)?.into_iter().min_by(|a, b| {
        let da = (a.y0 - y).max(y - a.y1).max(0.0);
        let db = (b.y0 - y).max(y - b.y1).max(0.0);
        da.total_cmp(&db)
    })
}

/// Splits `p` along the vertical chord at `t`; returns (left, right, chord).
fn cut_vertical(p: &Polygon, fr: Frame, t: f64, y: f64) -> Option<(Polygon, Polygon, Chord)> {
    let span = {
        let (x0, x1, _, _) = fr.extents(p);
        x1 - x0
    };
    for k in 0..8 {
        let tt = t + span * 1e-9 * k as f64 * if k % 2 == 0 { 1.0 } else { -1.0 };
        let Some(s) = stab_near(p, fr, tt, y) else { continue };
        if chord_status(p, s.lower, s.upper).is_err() {
            continue;
        }
        let Ok(sp) = split_unchecked(p, s.lower, s.upper) else { continue };
        let (a, b) = (sp.q1, sp.q2);
        let chord = sp.chord;
        return Some(if fr.fwd(a.centroid()).x < fr.fwd(b.centroid()).x { (a, b, chord) } else { (b, a, chord) });
    }
    None
}

/// Height of the polyline `gamma` where it first crosses `x = t` (frame coordinates).
fn polyline_height(gamma: &[Point], fr: Frame, t: f64) -> Option<f64> {
    let g: Vec<Point> = gamma.iter().map(|&v| fr.fwd(v)).collect();
    g.windows(2).find_map(|w| {
        let (a, b) = (w[0], w[1]);
        if (a.x - t) * (b.x - t) <= 0.0 && a.x != b.x {
            Some(a.y + (t - a.x) / (b.x - a.x) * (b.y - a.y))
        } else {
            None
        }
    })
}

/// End pieces and convex middle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EndSplit {
    pub p1: Option<Polygon>,
    pub pmid: Option<Polygon>,
    pub p2: Option<Polygon>,
    pub s1: Option<Chord>,
    pub s2: Option<Chord>,
    /// Short polygon: no cut, `p1` is the input.
    pub trivial: bool,
    /// `H¹(S_i) <= ϑ H¹(∂P)` for both segments.
    pub segments_short: bool,
    /// Largest `maxext / minext` over the end pieces.
    pub extent_ratio: f64,
    /// Largest `maxext(P_i) / dist(v, S_i)` over concave vertices `v` of the end pieces.
    pub distance_ratio: f64,
}

impl EndSplit {
    fn middle(p: &Polygon) -> Self {
        EndSplit {
            p1: None,
            pmid: Some(p.clone()),
            p2: None,
            s1: None,
            s2: None,
            trivial: false,
            segments_short: true,
            extent_ratio: 0.0,
            distance_ratio: 0.0,
        }
    }

    fn whole(p: &Polygon) -> Self {
        EndSplit { p1: Some(p.clone()), pmid: None, trivial: true, ..Self::middle(p) }
    }

    pub fn pieces(&self) -> Vec<&Polygon> {
        [&self.p1, &self.pmid, &self.p2].into_iter().flatten().collect()
    }
}

/// Threshold angle for the end pieces: `dist(v, S) >= H¹(S)/3` forces a base angle of at least `atan(2/3)`.
pub fn end_split_alpha() -> f64 {
    (2.0f64 / 3.0).atan()
}

/// Extent and distance ratios of an end piece cut along `s`.
fn end_piece_ratios(piece: &Polygon, s: Chord) -> (f64, f64) {
    let e = min_max_extent(piece);
    let eps = piece.eps();
    let mut dist_ratio: f64 = 0.0;
    for i in piece.concave_indices() {
        let v = piece.vertex(i);
        let d = crate::geom::point_segment_distance(v, s.v, s.w).0;
        dist_ratio = dist_ratio.max(if d <= eps { f64::INFINITY } else { e.max / d });
    }
    (e.max / e.min, dist_ratio)
}

/// Cuts the ends of a ϑ-semiconvex polygon so that the middle part is convex.
///
/// Convex input is returned as the middle piece. Polygons with
/// `ϑ² maxext <= 12 minext` are returned whole as `p1`.
pub fn split_ends(p: &Polygon, vartheta: f64) -> Result<EndSplit> {
    if !(vartheta > 0.0 && vartheta < 1.0) {
        return Err(Error::InvalidParameter(format!("vartheta = {vartheta} outside (0, 1)")));
    }
    if p.is_convex() {
        return Ok(EndSplit::middle(p));
    }
    let mut fr = Frame::aligned(p);
    let (x0, x1, y0, y1) = fr.extents(p);
    let (w1, w2) = (x1 - x0, y1 - y0);
    if vartheta * vartheta * w1 <= 12.0 * w2 {
        return Ok(EndSplit::whole(p));
    }
    let eps = p.eps();
    for _ in 0..1000 {
        let mut xs: Vec<f64> = p.vertices().iter().map(|&v| fr.fwd(v).x).collect();
        xs.sort_by(f64::total_cmp);
        if xs.windows(2).all(|w| w[1] - w[0] > eps) {
            break;
        }
        fr.phi += 1e-7;
    }
    let n = p.len();
    let fx = |i: usize| fr.fwd(p.vertex(i)).x;
    let i1 = (0..n).min_by(|&a, &b| fx(a).total_cmp(&fx(b))).unwrap();
    let i2 = (0..n).max_by(|&a, &b| fx(a).total_cmp(&fx(b))).unwrap();
    let (pt1, pt2) = (p.vertex(i1), p.vertex(i2));
    let (px1, px2) = (fx(i1), fx(i2));
    let width = px2 - px1;
    let geo = Geodesic::new(p.clone());
    let gamma = geo.shortest_path(pt1, pt2)?.waypoints;
    let d1 = geo.distances_to_vertices(pt1)?;
    let d2 = geo.distances_to_vertices(pt2)?;
    let hits_gamma = |a: Point, b: Point| gamma.windows(2).any(|g| segments_intersect(a, b, g[0], g[1]));
    let vertical = |c: usize, up: bool| -> Option<BoundaryPos> {
        let dir = fr.back(Point::new(0.0, if up { 1.0 } else { -1.0 }));
        let (_, pos) = p.ray_hit(p.vertex(c), dir, eps)?;
        chord_status(p, BoundaryPos { edge: c, t: 0.0 }, pos).ok()?;
        Some(pos)
    };
    // Concave vertices with a vertical chord crossing γ.
    let mut vstar: Vec<(usize, bool)> = Vec::new();
    for c in p.concave_indices() {
        for up in [true, false] {
            if let Some(pos) = vertical(c, up) {
                if hits_gamma(p.vertex(c), p.point_at(pos)) {
                    vstar.push((c, up));
                    break;
                }
            }
        }
    }
    let mut rbar = [0.0f64; 2];
    let mut active = [false; 2];
    for side in 0..2 {
        let (pe, pe_x) = if side == 0 { (pt1, px1) } else { (pt2, px2) };
        let chosen = vstar
            .iter()
            .filter(|&&(c, _)| (d1[c] <= d2[c]) == (side == 0))
            .max_by(|a, b| (fx(a.0) - pe_x).abs().total_cmp(&(fx(b.0) - pe_x).abs()));
        let Some(&(c, up)) = chosen else { continue };
        active[side] = true;
        let vpos = BoundaryPos { edge: c, t: 0.0 };
        for (k, dir_up) in [up, !up].into_iter().enumerate() {
            let Some(wpos) = vertical(c, dir_up) else { continue };
            let Ok(sp) = split_unchecked(p, vpos, wpos) else { continue };
            let piece = if k == 0 {
                if sp.q1.contains(pe) && !sp.q1.contains(if side == 0 { pt2 } else { pt1 }) {
                    Some(&sp.q1)
                } else {
                    Some(&sp.q2)
                }
            } else {
                [&sp.q1, &sp.q2].into_iter().find(|q| !q.contains(pt1) && !q.contains(pt2))
            };
            if let Some(q) = piece {
                rbar[side] = rbar[side].max(intrinsic_diameter(q).0);
            }
        }
    }
    let h = |t: f64, poly: &Polygon| -> f64 {
        let y = polyline_height(&gamma, fr, t).unwrap_or(0.5 * (y0 + y1));
        stab_near(poly, fr, t, y).map_or(0.0, |s| s.len())
    };
    // Cut abscissae: H¹(S_i) <= |t_i - p_i| <= max(H¹(S_i), 3 r̄_i).
    let choose = |side: usize| -> f64 {
        let sgn = if side == 0 { 1.0 } else { -1.0 };
        let pe_x = if side == 0 { px1 } else { px2 };
        let a = (3.0 * rbar[side]).min(0.25 * width);
        let f = |d: f64| d - h(pe_x + sgn * d, p);
        if f(a) >= 0.0 {
            return pe_x + sgn * a;
        }
        let (mut lo, mut hi) = (a, 0.25 * width);
        if f(hi) < 0.0 {
            return pe_x + sgn * hi;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        pe_x + sgn * hi
    };
    let t1 = active[0].then(|| choose(0));
    let t2 = active[1].then(|| choose(1));
    let mut out = EndSplit::middle(p);
    let mut rest = p.clone();
    let gamma_y = |t: f64| polyline_height(&gamma, fr, t).unwrap_or(0.5 * (y0 + y1));
    if let Some(t) = t1 {
        let (l, r, c) = cut_vertical(&rest, fr, t, gamma_y(t))
            .ok_or_else(|| Error::ConstructionFailed { step: 2, reason: "end segment S1".into() })?;
        out.p1 = Some(l);
        out.s1 = Some(c);
        rest = r;
    }
    if let Some(t) = t2 {
        let (l, r, c) = cut_vertical(&rest, fr, t, gamma_y(t))
            .ok_or_else(|| Error::ConstructionFailed { step: 2, reason: "end segment S2".into() })?;
        out.p2 = Some(r);
        out.s2 = Some(c);
        rest = l;
    }
    out.pmid = Some(rest);
    let per = p.perimeter();
    for (piece, s) in [(&out.p1, out.s1), (&out.p2, out.s2)] {
        if let (Some(q), Some(s)) = (piece, s) {
            out.segments_short &= s.length() <= vartheta * per;
            let (er, dr) = end_piece_ratios(q, s);
            out.extent_ratio = out.extent_ratio.max(er);
            out.distance_ratio = out.distance_ratio.max(dr);
        }
    }
    Ok(out)
}

/// Slab partition of a convex polygon together with the achieved rotundness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlabPartition {
    pub partition: Partition,
    /// Smallest `radius / diameter` over the slabs.
    pub omega: f64,
    /// Aspect ratio below `7/θ`: no cut.
    pub early_exit: bool,
}

/// Cuts a convex polygon with interior angles `>= π/4` into slabs orthogonal to
/// its direction of least extent; the total cut length is at most `θ H¹(∂P)`.
pub fn slab_partition_convex(p: &Polygon, theta: f64) -> Result<SlabPartition> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidParameter(format!("theta = {theta} outside (0, 1]")));
    }
    if !p.is_convex() {
        return Err(Error::NotConvex);
    }
    if p.min_interior_angle() < FRAC_PI_4 - 1e-12 {
        return Err(Error::AngleTooSharp);
    }
    let fr = Frame::aligned(p);
    let (x0, x1, y0, y1) = fr.extents(p);
    let (w1, w2) = (x1 - x0, y1 - y0);
    let mut part = Partition::trivial(p);
    let finish = |part: Partition, early_exit: bool| {
        let omega = part.pieces.iter().map(rotundity).fold(f64::INFINITY, f64::min);
        Ok(SlabPartition { partition: part, omega, early_exit })
    };
    if w1 < 7.0 / theta * w2 {
        return finish(part, true);
    }
    // End trims: remove edges steeper than arctan θ.
    let slope = theta;
    let (mut s1, mut s2) = (x0, x1);
    for i in 0..p.len() {
        let (a, b) = p.edge(i);
        let (a, b) = (fr.fwd(a), fr.fwd(b));
        let e = b - a;
        if e.y.abs() > slope * e.x.abs() {
            if e.y < 0.0 {
                s1 = s1.max(a.x.max(b.x));
            } else {
                s2 = s2.min(a.x.min(b.x));
            }
        }
    }
    if s1 >= s2 {
        return finish(part, true);
    }
    let ymid = 0.5 * (y0 + y1);
    let inset = (1e-9 * w1).max(10.0 * p.eps());
    let h = |t: f64| {
        let t = t.clamp(x0 + inset, x1 - inset);
        stab(p, fr, t).and_then(|v| v.first().map(|s| s.len())).unwrap_or(0.0)
    };
    let h_end = h(s2);
    let min_gap = inset;
    let mut ts = vec![s1];
    for _ in 0..100_000 {
        let tn = *ts.last().unwrap();
        if s2 - tn <= 4.0 / theta * h_end {
            break;
        }
        let g = |t: f64| (t - tn) - h(t) / theta;
        let (mut lo, mut hi) = (tn + min_gap, s2);
        if g(lo) >= 0.0 || g(hi) <= 0.0 {
            break;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        ts.push(hi);
    }
    part.pieces.clear();
    let mut rest = p.clone();
    for &t in &ts[1..] {
        let (l, r, c) = cut_vertical(&rest, fr, t, ymid)
            .ok_or_else(|| Error::ConstructionFailed { step: 0, reason: format!("slab cut at {t}") })?;
        part.pieces.push(l);
        part.add_cut(c.v, c.w, "slab");
        rest = r;
    }
    part.pieces.push(rest);
    finish(part, false)
}

/// Trims every vertex with interior angle below π/4 by an isosceles triangle whose
/// perimeter is at most `budget / #sharp`. Returns the core, the triangles and the bases.
pub fn trim_sharp_vertices(p: &Polygon, budget: f64) -> Result<(Polygon, Vec<Polygon>, Vec<Chord>)> {
    let sharp: Vec<usize> = (0..p.len()).filter(|&i| p.interior_angle(i) < FRAC_PI_4).collect();
    if sharp.is_empty() {
        return Ok((p.clone(), vec![], vec![]));
    }
    let per_vertex = budget / sharp.len() as f64;
    let mut core = p.clone();
    let mut tris = Vec::new();
    let mut bases = Vec::new();
    for &i in &sharp {
        let v = p.vertex(i);
        let alpha = p.interior_angle(i);
        let (prev, next) = (p.vertex(p.prev(i)), p.vertex(p.next(i)));
        let leg = (per_vertex / (2.0 + 2.0 * (0.5 * alpha).sin())).min(0.25 * v.dist(prev).min(v.dist(next)));
        let a = v + (prev - v).normalized() * leg;
        let b = v + (next - v).normalized() * leg;
        let (Some(pa), Some(pb)) = (core.locate_boundary(a), core.locate_boundary(b)) else {
            return Err(Error::ConstructionFailed { step: 0, reason: "sharp vertex trim".into() });
        };
        let sp = split_unchecked(&core, pb, pa)?;
        let (tri, rest) = if sp.q1.contains(v) && sp.q1.len() == 3 { (sp.q1, sp.q2) } else { (sp.q2, sp.q1) };
        bases.push(sp.chord);
        tris.push(tri);
        core = rest;
    }
    Ok((core, tris, bases))
}

/// Pieces of the rotund stage and their diagnostics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RotundDecomposition {
    pub partition: Partition,
    pub end_split: EndSplit,
    /// The end-piece angle criterion for each end piece present.
    pub part_seg_ok: Vec<bool>,
    /// Smallest rotundness over the slabs of the middle part.
    pub slab_omega: Option<f64>,
}

/// Splits a ϑ-semiconvex polygon into end pieces, exceptional sharp triangles
/// with total perimeter `<= epsilon`, and slabs of the convex middle.
pub fn decompose_rotund(p: &Polygon, theta: f64, vartheta: f64, epsilon: f64) -> Result<RotundDecomposition> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must be positive")));
    }
    let es = split_ends(p, vartheta)?;
    let mut part = Partition::trivial(p);
    part.pieces.clear();
    let mut part_seg_ok = Vec::new();
    let mut slab_omega = None;
    for (piece, s) in [(&es.p1, es.s1), (&es.p2, es.s2)] {
        if let Some(s) = s {
            part.add_cut(s.v, s.w, "end");
            if let Some(q) = piece {
                part_seg_ok.push(crate::semiconvex::part_seg_holds(q, s.v, s.w, end_split_alpha()));
            }
        }
    }
    if let Some(q) = &es.p1 {
        part.pieces.push(q.clone());
    }
    if let Some(mid) = &es.pmid {
        let (core, tris, bases) = trim_sharp_vertices(mid, epsilon)?;
        for b in bases {
            part.add_cut(b.v, b.w, "trim");
        }
        part.exceptional.extend(tris);
        if core.is_convex() {
            let slabs = slab_partition_convex(&core, theta)?;
            slab_omega = Some(slabs.omega);
            part.cuts.extend(slabs.partition.cuts);
            part.pieces.extend(slabs.partition.pieces);
        } else {
            // Near-collinear concave vertices can survive the end cuts; the
            // middle is then kept whole.
            part.pieces.push(core);
        }
    }
    if let Some(q) = &es.p2 {
        part.pieces.push(q.clone());
    }
    Ok(RotundDecomposition { partition: part, end_split: es, part_seg_ok, slab_omega })
}
