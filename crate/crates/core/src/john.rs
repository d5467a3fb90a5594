//! John curves and John-domain certificates.
//!
//! A domain is ρ-John with center `p` when every point `x` is joined to `p` by a
//! curve `γ` with `B(γ(t), ρ t) ⊂ P` along its arclength `t` (the carrot
//! condition). Curves are built from the geodesic `x → p` by pushing its concave
//! waypoints inward, rounding them with circular arcs and routing the segments
//! that cross the domain through a corridor that keeps clear of diamond-shaped
//! neighbourhoods of nearby concave vertices.

use crate::error::{Error, Result};
use crate::geodesic::Geodesic;
use crate::geom::{min_max_extent, segment_segment_distance, AreaSampler, Point, Polygon};
use crate::partition::{merge_polygons, split_at, Chord};
use crate::rotund::{certify_rotund, inscribed_disk, RotundCert};
use crate::semiconvex::{certify_semiconvex, SemiconvexCert};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_POINTS: usize = 200;
pub const DEFAULT_CARROT_SAMPLES: usize = 2000;

/// Offset factors `κ = 2ϑ²` tried when the curve built for the requested
/// constant fails.
const KAPPA_LADDER: [f64; 10] = [0.5, 0.3, 0.2, 0.12, 0.08, 0.05, 0.03, 0.02, 0.01, 0.005];

/// Angular resolution of arc pieces.
const ARC_STEP: f64 = PI / 32.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PieceLabel {
    /// Arc around the first vertex of a group.
    I1,
    /// Corridor path along a long or separating segment.
    II,
    /// Arc around the second vertex of a group.
    I2,
    /// Arc-and-segment chain following a run of short segments.
    III,
    /// Final segment into the center.
    IV,
    /// The whole curve is the straight segment `x → p`.
    Segment,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePiece {
    pub label: PieceLabel,
    pub group: usize,
    pub points: Vec<Point>,
}

impl CurvePiece {
    pub fn length(&self) -> f64 {
        polyline_length(&self.points)
    }
}

/// An assembled curve with the data it was built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JohnCurve {
    pub pieces: Vec<CurvePiece>,
    pub length: f64,
    /// Waypoints of the geodesic `x → p`.
    pub source: Vec<Point>,
    pub source_length: f64,
    /// Arclength of the geodesic at each waypoint.
    pub breakpoints: Vec<f64>,
    pub w_minus: Vec<Point>,
    pub w_plus: Vec<Point>,
    /// Waypoint indices `i_j` starting a group.
    pub groups: Vec<usize>,
    pub kappa: f64,
}

impl JohnCurve {
    /// Concatenated polyline with repeated junction points removed.
    pub fn polyline(&self) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for piece in &self.pieces {
            for &q in &piece.points {
                if out.last().map_or(true, |l: &Point| l.dist(q) > 0.0) {
                    out.push(q);
                }
            }
        }
        out
    }

    /// `length / length(γ₀)`.
    pub fn length_ratio(&self) -> f64 {
        if self.source_length > 0.0 {
            self.length / self.source_length
        } else {
            1.0
        }
    }

    /// Largest gap between the end of one piece and the start of the next.
    pub fn max_junction_gap(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| match (w[0].points.last(), w[1].points.first()) {
                (Some(&a), Some(&b)) => a.dist(b),
                _ => 0.0,
            })
            .fold(0.0, f64::max)
    }

    pub fn labels(&self) -> Vec<PieceLabel> {
        self.pieces.iter().map(|p| p.label).collect()
    }
}

fn polyline_length(pts: &[Point]) -> f64 {
    pts.windows(2).map(|w| w[0].dist(w[1])).sum()
}

fn arc(center: Point, radius: f64, from: Point, to: Point) -> Vec<Point> {
    let a0 = from.angle();
    let mut da = to.angle() - a0;
    while da > PI {
        da -= 2.0 * PI;
    }
    while da < -PI {
        da += 2.0 * PI;
    }
    let k = ((da.abs() / ARC_STEP).ceil() as usize).max(1);
    (0..=k).map(|s| center + Point::polar(radius, a0 + da * s as f64 / k as f64)).collect()
}

/// Unit normal of `d` on the side away from the turn, i.e. pointing into `P`
/// at a concave waypoint where the path turns by `turn` (signed cross product).
fn inward_normal(d: Point, turn: f64) -> Point {
    let left = d.perp().normalized();
    if turn > 0.0 {
        -left
    } else {
        left
    }
}

/// Whether the segment between consecutive concave waypoints `a`, `b` splits
/// `P` with `x` and `c` on different sides.
fn separates(p: &Polygon, a: Point, b: Point, x: Point, c: Point) -> bool {
    let (Some(pa), Some(pb)) = (p.locate_boundary(a), p.locate_boundary(b)) else {
        return false;
    };
    match split_at(p, pa, pb) {
        Ok(s) => {
            let (x1, c1) = (s.q1.contains_strictly(x), s.q1.contains_strictly(c));
            let (x2, c2) = (s.q2.contains_strictly(x), s.q2.contains_strictly(c));
            (x1 && c2) || (x2 && c1)
        }
        Err(_) => false,
    }
}

/// Builds the curve from `x` to the center `c` with offsets `2ϑ² t_i`.
pub fn build_john_curve(p: &Polygon, vartheta: f64, omega: f64, x: Point, c: Point) -> Result<JohnCurve> {
    if !(vartheta > 0.0 && vartheta < 1.0) {
        return Err(Error::InvalidParameter(format!("vartheta = {vartheta}")));
    }
    if !(omega > 0.0 && omega <= 1.0) {
        return Err(Error::InvalidParameter(format!("omega = {omega}")));
    }
    let geo = Geodesic::new(p.clone());
    build_with_kappa(p, &geo, 2.0 * vartheta * vartheta, x, c)
}

fn build_with_kappa(p: &Polygon, geo: &Geodesic, kappa: f64, x: Point, c: Point) -> Result<JohnCurve> {
    let fail = |step: u8, reason: &str| Error::ConstructionFailed { step, reason: reason.to_string() };
    let path = geo.shortest_path(x, c).map_err(|e| fail(1, &e.to_string()))?;
    let v = path.waypoints;
    let n = v.len() - 1;
    let mut t = vec![0.0; n + 1];
    for i in 1..=n {
        t[i] = t[i - 1] + v[i - 1].dist(v[i]);
    }
    if n == 1 {
        return Ok(JohnCurve {
            pieces: vec![CurvePiece { label: PieceLabel::Segment, group: 0, points: vec![x, c] }],
            length: t[1],
            source: v,
            source_length: t[1],
            breakpoints: t,
            w_minus: vec![x, c],
            w_plus: vec![x, c],
            groups: vec![0],
            kappa,
        });
    }
    let mut nu_m = vec![Point::new(0.0, 0.0); n + 1];
    let mut nu_p = vec![Point::new(0.0, 0.0); n + 1];
    for i in 1..n {
        let (din, dout) = (v[i] - v[i - 1], v[i + 1] - v[i]);
        let turn = din.cross(dout);
        nu_m[i] = inward_normal(din, turn);
        nu_p[i] = inward_normal(dout, turn);
    }
    let mut wm: Vec<Point> = (0..=n).map(|i| v[i] + nu_m[i] * (kappa * t[i])).collect();
    let mut wp: Vec<Point> = (0..=n).map(|i| v[i] + nu_p[i] * (kappa * t[i])).collect();
    wm[0] = x;
    wp[0] = x;
    wm[n] = c + nu_p[n - 1] * (kappa * t[n]);
    wp[n] = wm[n];

    let mut groups = vec![0, 1];
    for i in 2..n - 1 {
        if t[i + 1] - t[i] >= 2.0 * kappa * t[i + 1] || separates(p, v[i], v[i + 1], x, c) {
            groups.push(i);
        }
    }
    if *groups.last().unwrap() != n - 1 {
        groups.push(n - 1);
    }

    let arc_at = |i: usize| arc(v[i], kappa * t[i], wm[i] - v[i], wp[i] - v[i]);
    let mut pieces = Vec::new();
    let m = groups.len() - 1;
    for j in 0..=m {
        let ij = groups[j];
        if ij > 0 {
            pieces.push(CurvePiece { label: PieceLabel::I1, group: j, points: arc_at(ij) });
        }
        let corridor = corridor_path(p, kappa, &t, v[ij], v[ij + 1], ij, wp[ij], wm[ij + 1], ij == 0)
            .ok_or_else(|| fail(3, "no path through the corridor"))?;
        pieces.push(CurvePiece { label: PieceLabel::II, group: j, points: corridor });
        if j == m {
            break;
        }
        let next = groups[j + 1];
        if ij + 1 < next {
            pieces.push(CurvePiece { label: PieceLabel::I2, group: j, points: arc_at(ij + 1) });
            let mut helix = vec![wp[ij + 1]];
            for k in ij + 1..next {
                helix.push(wm[k + 1]);
                if k + 1 < next {
                    helix.extend(arc_at(k + 1).into_iter().skip(1));
                }
            }
            pieces.push(CurvePiece { label: PieceLabel::III, group: j, points: helix });
        }
    }
    pieces.push(CurvePiece { label: PieceLabel::IV, group: m, points: vec![wm[n], c] });
    let length = pieces.iter().map(CurvePiece::length).sum();
    Ok(JohnCurve {
        pieces,
        length,
        source_length: t[n],
        source: v,
        breakpoints: t,
        w_minus: wm,
        w_plus: wp,
        groups,
        kappa,
    })
}

/// Diamond `|x − cx| + |y − cy| ≤ h` in corridor coordinates.
#[derive(Clone, Copy)]
struct Diamond {
    c: Point,
    h: f64,
}

impl Diamond {
    fn corners(&self) -> [Point; 4] {
        let (c, h) = (self.c, self.h);
        [c + Point::new(h, 0.0), c + Point::new(0.0, h), c - Point::new(h, 0.0), c - Point::new(0.0, h)]
    }

    fn l1(&self, q: Point) -> f64 {
        (q.x - self.c.x).abs() + (q.y - self.c.y).abs()
    }

    /// Whether the segment `[a, b]` meets the open interior.
    fn blocks(&self, a: Point, b: Point) -> bool {
        let d = b - a;
        let mut ss = vec![0.0, 1.0];
        if d.x != 0.0 {
            ss.push((self.c.x - a.x) / d.x);
        }
        if d.y != 0.0 {
            ss.push((self.c.y - a.y) / d.y);
        }
        let min = ss
            .into_iter()
            .filter(|s| (0.0..=1.0).contains(s))
            .map(|s| self.l1(a + d * s))
            .fold(f64::INFINITY, f64::min);
        min < self.h * (1.0 - 1e-9)
    }
}

/// Shortest path from `w` to `w2` inside `P ∩ R` avoiding the diamonds, where
/// `R` is the rectangle of half-width `κ t_{i+1}` around the segment `[a, b]`.
#[allow(clippy::too_many_arguments)]
fn corridor_path(
    p: &Polygon,
    kappa: f64,
    t: &[f64],
    a: Point,
    b: Point,
    i: usize,
    w: Point,
    w2: Point,
    first: bool,
) -> Option<Vec<Point>> {
    let len = a.dist(b);
    let e2 = (b - a) / len;
    let e1 = Point::new(e2.y, -e2.x);
    let local = |q: Point| Point::new((q - a).dot(e1), (q - a).dot(e2));
    let global = |q: Point| a + e1 * q.x + e2 * q.y;
    let hw = kappa * t[i + 1];
    let tol = p.eps();
    let in_rect = |q: Point| q.x.abs() <= hw + tol && q.y >= -tol && q.y <= len + tol;
    let (lw, lw2) = (local(w), local(w2));

    let mut diamonds = Vec::new();
    if !first {
        diamonds.push(Diamond { c: Point::new(0.0, 0.0), h: kappa * t[i] });
    }
    diamonds.push(Diamond { c: Point::new(0.0, len), h: kappa * t[i + 1] });
    let mut nodes = vec![lw, lw2];
    let pv = p.vertices();
    for k in p.concave_indices() {
        let q = local(pv[k]);
        if !in_rect(q) || pv[k].dist(a) <= tol || pv[k].dist(b) <= tol {
            continue;
        }
        if q.x.abs() > tol && p.contains_segment(pv[k], global(Point::new(0.0, q.y))) {
            diamonds.push(Diamond { c: q, h: kappa * (t[i] + q.y) });
        } else {
            nodes.push(q);
        }
    }
    // Reflex corners of P ∩ R where the boundary of P crosses the long sides of R.
    for k in 0..p.len() {
        let (c, d) = p.edge(k);
        let (lc, ld) = (local(c), local(d));
        for side in [-hw, hw] {
            if (lc.x - side) * (ld.x - side) < 0.0 {
                let s = (side - lc.x) / (ld.x - lc.x);
                let q = lc + (ld - lc) * s;
                if q.y >= 0.0 && q.y <= len {
                    nodes.push(q);
                }
            }
        }
    }
    for dm in &diamonds {
        nodes.extend(dm.corners());
    }
    let free = |q: Point| in_rect(q) && diamonds.iter().all(|dm| dm.l1(q) >= dm.h * (1.0 - 1e-9)) && p.contains(global(q));
    if !free(lw) || !free(lw2) {
        return None;
    }
    let mut keep = vec![lw, lw2];
    keep.extend(nodes.into_iter().skip(2).filter(|&q| free(q)));
    let visible = |u: Point, z: Point| {
        !diamonds.iter().any(|dm| dm.blocks(u, z)) && p.contains_segment(global(u), global(z))
    };
    // Dijkstra on the dense visibility graph.
    let m = keep.len();
    let mut dist = vec![f64::INFINITY; m];
    let mut prev = vec![usize::MAX; m];
    let mut done = vec![false; m];
    dist[0] = 0.0;
    loop {
        let Some(u) = (0..m).filter(|&k| !done[k] && dist[k].is_finite()).min_by(|&x, &y| dist[x].total_cmp(&dist[y]))
        else {
            break;
        };
        if u == 1 {
            break;
        }
        done[u] = true;
        for z in 0..m {
            if done[z] {
                continue;
            }
            let cand = dist[u] + keep[u].dist(keep[z]);
            if cand < dist[z] && visible(keep[u], keep[z]) {
                dist[z] = cand;
                prev[z] = u;
            }
        }
    }
    if !dist[1].is_finite() {
        return None;
    }
    let mut out = vec![w2];
    let mut k = 1;
    while prev[k] != usize::MAX {
        k = prev[k];
        out.push(if k == 0 { w } else { global(keep[k]) });
    }
    out.reverse();
    Some(out)
}

/// The waypoints of the geodesic with each concave waypoint pushed `κ t_i`
/// inward along the bisector of its two normals, but at most halfway to the
/// boundary across.
fn offset_geodesic(p: &Polygon, geo: &Geodesic, kappa: f64, x: Point, c: Point) -> Result<Vec<Point>> {
    let v = geo.shortest_path(x, c)?.waypoints;
    let n = v.len() - 1;
    let mut out = vec![x];
    let mut t = 0.0;
    for i in 1..n {
        t += v[i - 1].dist(v[i]);
        let (din, dout) = (v[i] - v[i - 1], v[i + 1] - v[i]);
        let turn = din.cross(dout);
        let bis = (inward_normal(din, turn) + inward_normal(dout, turn)).normalized();
        let room = p.ray_hit(v[i], bis, 10.0 * p.eps()).map_or(f64::INFINITY, |(s, _)| 0.5 * s);
        out.push(v[i] + bis * (kappa * t).min(room));
    }
    out.push(c);
    Ok(out)
}

/// Boundary distances sampled along a curve.
#[derive(Clone, Debug)]
struct Profile {
    ts: Vec<f64>,
    ds: Vec<f64>,
}

impl Profile {
    fn margin(&self, rho: f64) -> (f64, f64) {
        self.ts.iter().zip(&self.ds).map(|(&t, &d)| (d - rho * t, t)).fold((f64::INFINITY, 0.0), |best, m| {
            if m.0 < best.0 {
                m
            } else {
                best
            }
        })
    }

    /// Largest `ρ` with margin at least `-tol`.
    fn best_rho(&self, tol: f64) -> f64 {
        self.ts
            .iter()
            .zip(&self.ds)
            .filter(|(&t, _)| t > 0.0)
            .map(|(&t, &d)| (d + tol) / t)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Samples `dist(γ(t), ∂P)` at `n` arclength-uniform parameters plus every
/// polyline vertex. With `stop = Some((ρ, tol))` sampling ends at the first
/// parameter whose margin is below `-tol`.
fn profile(p: &Polygon, curve: &[Point], n: usize, stop: Option<(f64, f64)>) -> Result<Profile> {
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let mut cum = vec![0.0];
    for w in curve.windows(2) {
        cum.push(cum.last().unwrap() + w[0].dist(w[1]));
    }
    for (k, w) in curve.windows(2).enumerate() {
        if !p.contains_segment(w[0], w[1]) {
            return Err(Error::CurveExitsPolygon(cum[k]));
        }
    }
    let total = *cum.last().unwrap();
    let mut ts: Vec<f64> = (0..n.max(2)).map(|k| total * k as f64 / (n.max(2) - 1) as f64).collect();
    ts.extend(cum.iter().copied());
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut ds = Vec::with_capacity(ts.len());
    let mut seg = 0;
    for (k, &t) in ts.iter().enumerate() {
        while seg + 1 < cum.len() - 1 && cum[seg + 1] < t {
            seg += 1;
        }
        let q = if curve.len() == 1 {
            curve[0]
        } else {
            let span = cum[seg + 1] - cum[seg];
            let s = if span > 0.0 { ((t - cum[seg]) / span).clamp(0.0, 1.0) } else { 0.0 };
            curve[seg].lerp(curve[seg + 1], s)
        };
        let d = p.dist_to_boundary(q);
        ds.push(d);
        if let Some((rho, tol)) = stop {
            if d - rho * t < -tol {
                ts.truncate(k + 1);
                break;
            }
        }
    }
    Ok(Profile { ts, ds })
}

/// Result of checking the carrot condition along one curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarrotCheck {
    pub ok: bool,
    pub worst_margin: f64,
    pub argmin_t: f64,
    pub tol: f64,
}

/// Sampling tolerance for carrot margins: `1e-7 · diam(P)`.
pub fn carrot_tol(p: &Polygon) -> f64 {
    1e-7 * min_max_extent(p).max
}

/// Evaluates `dist(γ(t), ∂P) − ρ t` along the polyline `curve`.
pub fn verify_carrot(p: &Polygon, curve: &[Point], rho: f64, n_samples: usize) -> Result<CarrotCheck> {
    let tol = carrot_tol(p);
    let prof = profile(p, curve, n_samples, None)?;
    let (worst_margin, argmin_t) = prof.margin(rho);
    Ok(CarrotCheck { ok: worst_margin >= -tol, worst_margin, argmin_t, tol })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveMode {
    DirectSegment,
    ConstructedCurve,
    GeodesicFallback,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JohnSample {
    pub x: Point,
    pub mode: CurveMode,
    pub margin: f64,
    pub argmin_t: f64,
    pub curve: Vec<Point>,
    pub labels: Vec<PieceLabel>,
    /// Curve length over geodesic length.
    pub length_ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JohnStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JohnCert {
    pub rho: f64,
    pub center: Point,
    pub tol: f64,
    pub status: JohnStatus,
    pub worst_margin: f64,
    pub samples: Vec<JohnSample>,
}

impl JohnCert {
    pub fn passed(&self) -> bool {
        self.status == JohnStatus::Pass
    }

    /// Re-checks every stored curve at `rho`.
    pub fn reverify(&self, p: &Polygon, rho: f64, n_samples: usize) -> bool {
        self.samples
            .iter()
            .all(|s| verify_carrot(p, &s.curve, rho, n_samples).map_or(false, |c| c.ok))
    }

    pub fn max_length_ratio(&self) -> f64 {
        self.samples.iter().map(|s| s.length_ratio).fold(1.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JohnConfig {
    pub n_points: usize,
    pub carrot_samples: usize,
    pub seed: u64,
}

impl Default for JohnConfig {
    fn default() -> Self {
        JohnConfig { n_points: DEFAULT_POINTS, carrot_samples: DEFAULT_CARROT_SAMPLES, seed: 42 }
    }
}

impl JohnConfig {
    pub fn stress(self) -> Self {
        JohnConfig { n_points: 4 * self.n_points, carrot_samples: 4 * self.carrot_samples, ..self }
    }
}

/// Stratified interior sample: 60% uniform in area, 25% close to the boundary,
/// the rest close to concave vertices.
pub fn sample_points(p: &Polygon, n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = AreaSampler::new(p);
    let diam = min_max_extent(p).max;
    let concave = p.concave_indices();
    let n_area = (n * 3).div_ceil(5);
    let n_bd = if concave.is_empty() { n - n_area } else { (n / 4).min(n - n_area) };
    let mut out = Vec::with_capacity(n);
    for _ in 0..n_area {
        out.push(sampler.sample(&mut rng));
    }
    let per = p.perimeter();
    let depth = |rng: &mut ChaCha8Rng| diam * (1e-3 + 0.05 * rng.gen::<f64>());
    let push_near = |out: &mut Vec<Point>, rng: &mut ChaCha8Rng, anchor: &dyn Fn(&mut ChaCha8Rng) -> Point| {
        for _ in 0..20 {
            let q = anchor(rng);
            if p.contains_strictly(q) {
                out.push(q);
                return;
            }
        }
        out.push(sampler.sample(rng));
    };
    for _ in 0..n_bd {
        push_near(&mut out, &mut rng, &|rng| {
            let pos = p.pos_at_arclength(rng.gen::<f64>() * per);
            let (a, b) = p.edge(pos.edge);
            p.point_at(pos) + (b - a).perp().normalized() * depth(rng)
        });
    }
    while out.len() < n {
        let k = concave[rng.gen_range(0..concave.len())];
        let v = p.vertex(k);
        push_near(&mut out, &mut rng, &|rng| v + Point::polar(depth(rng), rng.gen::<f64>() * 2.0 * PI));
    }
    out
}

struct Candidate {
    mode: CurveMode,
    curve: Vec<Point>,
    labels: Vec<PieceLabel>,
    length_ratio: f64,
}

/// Candidate curves for `x` in the order they are tried. `rho` adds the
/// construction at `ϑ = ρ^{1/3}` in front of the fixed ladder.
fn candidates<'a>(p: &'a Polygon, geo: &'a Geodesic, x: Point, c: Point, rho: Option<f64>) -> impl Iterator<Item = Candidate> + 'a {
    let geo_len = geo.distance(x, c).unwrap_or(x.dist(c));
    let straight = p.contains_segment(x, c).then(|| Candidate {
        mode: CurveMode::DirectSegment,
        curve: vec![x, c],
        labels: vec![PieceLabel::Segment],
        length_ratio: 1.0,
    });
    let mut kappas: Vec<f64> = rho.map(|r| 2.0 * r.powf(2.0 / 3.0)).into_iter().collect();
    kappas.extend(KAPPA_LADDER);
    let constructed = kappas.clone().into_iter().filter_map(move |k| {
        build_with_kappa(p, geo, k, x, c).ok().map(|jc| Candidate {
            mode: CurveMode::ConstructedCurve,
            curve: jc.polyline(),
            labels: jc.labels(),
            length_ratio: jc.length_ratio(),
        })
    });
    let fallback = kappas.into_iter().filter_map(move |k| {
        offset_geodesic(p, geo, k, x, c).ok().map(|curve| {
            let lr = if geo_len > 0.0 { polyline_length(&curve) / geo_len } else { 1.0 };
            Candidate { mode: CurveMode::GeodesicFallback, curve, labels: vec![], length_ratio: lr }
        })
    });
    straight.into_iter().chain(constructed).chain(fallback)
}

fn certify_point(p: &Polygon, geo: &Geodesic, x: Point, c: Point, rho: f64, cfg: &JohnConfig, tol: f64) -> JohnSample {
    let mut best: Option<JohnSample> = None;
    for cand in candidates(p, geo, x, c, Some(rho)) {
        let Ok(prof) = profile(p, &cand.curve, cfg.carrot_samples, Some((rho, tol))) else {
            continue;
        };
        let (margin, argmin_t) = prof.margin(rho);
        let pass = margin >= -tol;
        if best.as_ref().map_or(true, |b| margin > b.margin) {
            best = Some(JohnSample {
                x,
                mode: cand.mode,
                margin,
                argmin_t,
                curve: cand.curve,
                labels: cand.labels,
                length_ratio: cand.length_ratio,
            });
        }
        if pass {
            break;
        }
    }
    best.unwrap_or(JohnSample {
        x,
        mode: CurveMode::GeodesicFallback,
        margin: f64::NEG_INFINITY,
        argmin_t: 0.0,
        curve: vec![x],
        labels: vec![],
        length_ratio: f64::INFINITY,
    })
}

/// Certifies `P` as a ρ-John domain with the inscribed-disk center as John
/// center, on `n_points` seeded samples.
pub fn certify_john(p: &Polygon, rho: f64, n_points: usize, seed: u64) -> JohnCert {
    certify_john_with(p, rho, &JohnConfig { n_points, seed, ..JohnConfig::default() })
}

pub fn certify_john_with(p: &Polygon, rho: f64, cfg: &JohnConfig) -> JohnCert {
    let (center, _) = inscribed_disk(p);
    let tol = carrot_tol(p);
    let geo = Geodesic::new(p.clone());
    geo.distance(center, center).ok();
    let xs = sample_points(p, cfg.n_points, cfg.seed);
    let samples: Vec<JohnSample> = xs.par_iter().map(|&x| certify_point(p, &geo, x, center, rho, cfg, tol)).collect();
    let worst_margin = samples.iter().map(|s| s.margin).fold(f64::INFINITY, f64::min);
    let status = if worst_margin >= -tol { JohnStatus::Pass } else { JohnStatus::Fail };
    JohnCert { rho, center, tol, status, worst_margin, samples }
}

/// Largest `ρ` on the grid `1e-3 ℕ` for which every sample point has a passing
/// curve among the `ρ`-independent candidates.
///
/// For a fixed curve the margin is affine in `ρ`, so the exact threshold
/// `min_t (dist + tol)/t` replaces bisection; flooring to the grid gives the
/// value bisection to `1e-3` would return.
pub fn john_constant(p: &Polygon, cfg: &JohnConfig) -> f64 {
    ((john_threshold(p, cfg) * 1000.0).floor() / 1000.0).min(0.999)
}

/// The unrounded threshold behind [`john_constant`].
pub fn john_threshold(p: &Polygon, cfg: &JohnConfig) -> f64 {
    let (center, _) = inscribed_disk(p);
    let tol = carrot_tol(p);
    let geo = Geodesic::new(p.clone());
    let xs = sample_points(p, cfg.n_points, cfg.seed);
    // Running minimum over points. A point whose best curve already reaches it
    // cannot lower the final minimum, so its search stops there; the result is
    // the exact minimum whatever the evaluation order.
    let floor = AtomicU64::new(1f64.to_bits());
    let coarse = (cfg.carrot_samples / 10).max(16);
    xs.par_iter().rev().for_each(|&x| {
        let mut best: f64 = 0.0;
        for cand in candidates(p, &geo, x, center, None) {
            if best >= f64::from_bits(floor.load(Ordering::Relaxed)) {
                return;
            }
            // Fewer samples can only overestimate a curve's constant.
            let Ok(rough) = profile(p, &cand.curve, coarse, Some((best, tol))) else {
                continue;
            };
            if rough.margin(best).0 < -tol || rough.best_rho(tol) <= best {
                continue;
            }
            if let Ok(prof) = profile(p, &cand.curve, cfg.carrot_samples, Some((best, tol))) {
                if prof.margin(best).0 >= -tol {
                    best = best.max(prof.best_rho(tol));
                }
            }
        }
        floor.fetch_min(best.to_bits(), Ordering::Relaxed);
    });
    f64::from_bits(floor.into_inner())
}

/// Semiconvexity and rotundness at `ϑ = ω = ρ/4`.
pub fn john_converse_check(p: &Polygon, rho: f64, samples: usize) -> (SemiconvexCert, RotundCert) {
    (certify_semiconvex(p, rho / 4.0, samples), certify_rotund(p, rho / 4.0))
}

/// Searches the closed disk `B(x, r)` for a point `z` with `B(z, ρr/2) ⊂ P`.
pub fn plump_check(p: &Polygon, cert: &JohnCert, x: Point, r: f64) -> Result<bool> {
    if p.vertices().iter().all(|v| v.dist(x) <= r) {
        return Err(Error::BallCoversDomain);
    }
    let need = 0.5 * cert.rho * r * (1.0 - 1e-12);
    let clearance = |z: Point| if z.dist(x) <= r && p.contains(z) { p.signed_distance(z) } else { f64::NEG_INFINITY };
    let mut best = (clearance(x), x);
    const N: usize = 32;
    for i in 0..N {
        for j in 0..N {
            let z = x + Point::new(-r + 2.0 * r * (i as f64 + 0.5) / N as f64, -r + 2.0 * r * (j as f64 + 0.5) / N as f64);
            let c = clearance(z);
            if c > best.0 {
                best = (c, z);
            }
        }
    }
    let mut step = r / N as f64;
    while best.0 < need && step > 1e-9 * r {
        let mut moved = false;
        for k in 0..8 {
            let z = best.1 + Point::polar(step, k as f64 * PI / 4.0);
            let c = clearance(z);
            if c > best.0 {
                best = (c, z);
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok(best.0 >= need)
}

/// Result of gluing two John domains along a common boundary segment.
#[derive(Clone, Debug)]
pub struct Merged {
    pub polygon: Polygon,
    pub shared_length: f64,
    pub cert: JohnCert,
}

/// Glues `d1` and `d2` along `shared` and re-certifies the union at its
/// estimated John constant. The shared boundary must be at least
/// `min_ratio · min(diam d1, diam d2)` long.
pub fn merge_regions(d1: &Polygon, d2: &Polygon, shared: Chord, min_ratio: f64, cfg: &JohnConfig) -> Result<Merged> {
    let on_both = |q: Point| d1.locate_boundary(q).is_some() && d2.locate_boundary(q).is_some();
    let mid = shared.v.lerp(shared.w, 0.5);
    if !(on_both(shared.v) && on_both(shared.w) && on_both(mid)) {
        return Err(Error::NotAdjacent);
    }
    let dmin = min_max_extent(d1).max.min(min_max_extent(d2).max);
    if shared.length() < min_ratio * dmin {
        return Err(Error::SharedTooShort(shared.length()));
    }
    let (polygon, shared_length) = merge_polygons(d1, d2)?;
    if shared_length < min_ratio * dmin {
        return Err(Error::SharedTooShort(shared_length));
    }
    let rho = john_constant(&polygon, cfg);
    let cert = certify_john_with(&polygon, rho, cfg);
    Ok(Merged { polygon, shared_length, cert })
}

/// Smallest distance from a polyline to the boundary, used in tests and reports.
pub fn polyline_clearance(p: &Polygon, curve: &[Point]) -> f64 {
    let mut best = f64::INFINITY;
    for w in curve.windows(2) {
        for k in 0..p.len() {
            let (a, b) = p.edge(k);
            best = best.min(segment_segment_distance(w[0], w[1], a, b));
        }
    }
    if curve.len() == 1 {
        best = p.dist_to_boundary(curve[0]);
    }
    best
}
