//! Densely sampled smooth and multiply connected domains.
//!
//! Holes are removed by thin slit corridors. A simply connected boundary ring
//! gets a frame of squares whose diagonals join consecutive anchors; the
//! interior polygon left after removing the squares goes through the polygon
//! pipeline and the boundary pieces inside the squares are merged back.

use crate::error::{Error, Result};
use crate::geom::{segment_segment_distance, segments_intersect, BoundaryPos, Point, Polygon};
use crate::john::{certify_john_with, john_constant, JohnCert};
use crate::partition::{merge_polygons, Chord};
use crate::pipeline::{decompose, Decomposition, PipelineConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

pub const DEFAULT_MAX_HOLES: usize = 8;
/// Frame attempts, halving the target diagonal after each failure.
pub const FRAME_ROUNDS: usize = 8;

/// Boundary rings of a domain. The outer ring runs counter-clockwise and holes
/// clockwise; either orientation is accepted on input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainInput {
    pub outer: Vec<Point>,
    #[serde(default)]
    pub holes: Vec<Vec<Point>>,
    /// Declared maximum distance between consecutive samples.
    #[serde(default)]
    pub spacing: Option<f64>,
}

impl DomainInput {
    pub fn simple(outer: Vec<Point>) -> Self {
        let mut d = DomainInput { outer, holes: vec![], spacing: None };
        d.spacing = Some(d.max_spacing());
        d
    }

    pub fn outer_polygon(&self) -> Result<Polygon> {
        Polygon::new(self.outer.clone())
    }

    pub fn hole_polygons(&self) -> Result<Vec<Polygon>> {
        self.holes.iter().map(|h| Polygon::new(h.clone())).collect()
    }

    /// Largest gap between consecutive samples over all rings.
    pub fn max_spacing(&self) -> f64 {
        std::iter::once(&self.outer)
            .chain(&self.holes)
            .flat_map(|r| (0..r.len()).map(move |i| r[i].dist(r[(i + 1) % r.len()])))
            .fold(0.0, f64::max)
    }

    /// Total boundary length, holes included.
    pub fn perimeter(&self) -> Result<f64> {
        Ok(self.outer_polygon()?.perimeter() + self.hole_polygons()?.iter().map(Polygon::perimeter).sum::<f64>())
    }

    pub fn area(&self) -> Result<f64> {
        Ok(self.outer_polygon()?.area() - self.hole_polygons()?.iter().map(Polygon::area).sum::<f64>())
    }

    /// Rings simple, holes strictly inside the outer ring and pairwise
    /// disjoint, declared spacing respected.
    pub fn validate(&self) -> Result<()> {
        let outer = self.outer_polygon()?;
        let holes = self.hole_polygons()?;
        for (j, h) in holes.iter().enumerate() {
            if !h.vertices().iter().all(|&v| outer.contains_strictly(v)) || rings_touch(&outer, h) {
                return Err(Error::InvalidParameter(format!("hole {j} is not inside the outer ring")));
            }
            for (k, g) in holes.iter().enumerate().skip(j + 1) {
                if rings_touch(h, g) || g.contains(h.vertex(0)) || h.contains(g.vertex(0)) {
                    return Err(Error::InvalidParameter(format!("holes {j} and {k} overlap")));
                }
            }
        }
        if let Some(s) = self.spacing {
            let m = self.max_spacing();
            if m > s * (1.0 + 1e-9) {
                return Err(Error::InvalidParameter(format!("sample spacing {m} exceeds the declared {s}")));
            }
        }
        Ok(())
    }
}

fn rings_touch(a: &Polygon, b: &Polygon) -> bool {
    (0..a.len()).any(|i| {
        let (p, q) = a.edge(i);
        (0..b.len()).any(|j| {
            let (r, s) = b.edge(j);
            segments_intersect(p, q, r, s)
        })
    })
}

/// The slit domain and the corridors cut out along the slits.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlitResult {
    pub polygon: Polygon,
    pub slits: Vec<Chord>,
    pub corridors: Vec<Polygon>,
    pub slit_total: f64,
}

impl SlitResult {
    pub fn corridor_area(&self) -> f64 {
        self.corridors.iter().map(Polygon::area).sum()
    }
}

/// Ring vertices strictly between two boundary positions, walking
/// counter-clockwise.
fn ring_between(p: &Polygon, from: BoundaryPos, to: BoundaryPos) -> Vec<Point> {
    let l = p.perimeter();
    let (a, b) = (p.arclength(from), p.arclength(to));
    let span = (b - a).rem_euclid(l);
    let tol = 10.0 * p.eps();
    let mut pts: Vec<(f64, Point)> = (0..p.len())
        .map(|i| ((p.arclength(BoundaryPos { edge: i, t: 0.0 }) - a).rem_euclid(l), p.vertex(i)))
        .filter(|&(s, _)| s > tol && s < span - tol)
        .collect();
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));
    pts.into_iter().map(|(_, q)| q).collect()
}

/// Moves a boundary position that sits on a vertex along its edge by `shift`.
fn off_vertex(p: &Polygon, pos: BoundaryPos, shift: f64) -> BoundaryPos {
    let len = p.edge_len(pos.edge);
    let dt = (shift / len).min(0.25);
    if pos.t * len < shift {
        BoundaryPos { edge: pos.edge, t: dt }
    } else if (1.0 - pos.t) * len < shift {
        BoundaryPos { edge: pos.edge, t: 1.0 - dt }
    } else {
        pos
    }
}

/// Cuts a corridor of half-width `s` around the segment from `h` (on `hole`)
/// to `a` (on `ring`) and returns the joined ring and the corridor.
fn cut_corridor(ring: &Polygon, hole: &Polygon, h: Point, a: Point, s: f64) -> Option<(Polygon, Polygon)> {
    let len = h.dist(a);
    let u = (a - h) / len;
    let n = u.perp();
    let mid = h + u * (0.5 * len);
    let side = |sign: f64| {
        let o = mid + n * (sign * s);
        let (sa, pa) = ring.ray_hit(o, u, 0.0)?;
        let (sh, ph) = hole.ray_hit(o, -u, 0.0)?;
        // Nothing else may be hit first.
        let first_h = ring.ray_hit(o, -u, 0.0).map_or(true, |(x, _)| x > sh);
        let first_a = hole.ray_hit(o, u, 0.0).map_or(true, |(x, _)| x > sa);
        (first_h && first_a && sa < len && sh < len).then_some((pa, ph))
    };
    let (ap, hp) = side(1.0)?;
    let (am, hm) = side(-1.0)?;
    // The short ring arc between the two outer hits lies inside the corridor.
    let lr = ring.perimeter();
    let (as_, ae, hs, he) = if (ring.arclength(am) - ring.arclength(ap)).rem_euclid(lr) < 0.5 * lr {
        (am, ap, hm, hp)
    } else {
        (ap, am, hp, hm)
    };
    let lh = hole.perimeter();
    let mut out = vec![ring.point_at(as_)];
    out.extend(ring_between(ring, as_, ae));
    out.push(ring.point_at(ae));
    out.push(hole.point_at(he));
    // Long way round the hole from `he` to `hs`.
    let long_ccw = (hole.arclength(hs) - hole.arclength(he)).rem_euclid(lh) > 0.5 * lh;
    if long_ccw {
        out.extend(ring_between(hole, he, hs));
    } else {
        let mut back = ring_between(hole, hs, he);
        back.reverse();
        out.extend(back);
    }
    out.push(hole.point_at(hs));
    let mut corridor = vec![ring.point_at(ae)];
    corridor.extend(ring_between(ring, ae, as_));
    corridor.push(ring.point_at(as_));
    corridor.push(hole.point_at(hs));
    if long_ccw {
        corridor.extend(ring_between(hole, hs, he));
    } else {
        let mut back = ring_between(hole, he, hs);
        back.reverse();
        corridor.extend(back);
    }
    corridor.push(hole.point_at(he));
    Some((Polygon::new(out).ok()?, Polygon::new(corridor).ok()?))
}

/// Joins every hole to the boundary by a slit corridor, turning the domain into
/// one simple polygon. The corridors form the exceptional set; their total area
/// stays below `epsilon`.
pub fn saturate_and_slit(input: &DomainInput, max_holes: usize, epsilon: f64) -> Result<SlitResult> {
    input.validate()?;
    let holes = input.hole_polygons()?;
    if holes.len() > max_holes {
        return Err(Error::TooManyHoles(holes.len()));
    }
    let mut ring = input.outer_polygon()?;
    let (mut slits, mut corridors) = (vec![], vec![]);
    let m = holes.len().max(1) as f64;
    for (j, hole) in holes.iter().enumerate() {
        let others: Vec<&Polygon> = holes.iter().skip(j + 1).collect();
        // Candidate slits: hole vertices and edge points to the nearest ring
        // point, and ring vertices to the nearest hole point, shortest first.
        let nudge = 10.0 * ring.eps();
        let hole_pts = (0..hole.len())
            .flat_map(|i| [0.5, 0.25, 0.75, 0.0].map(|t| hole.point_at(BoundaryPos { edge: i, t })));
        let mut cands: Vec<(Point, Point)> = hole_pts
            .map(|h| (h, ring.point_at(off_vertex(&ring, ring.closest_boundary(h).0, nudge))))
            .chain(ring.vertices().iter().map(|&a| (hole.point_at(off_vertex(hole, hole.closest_boundary(a).0, nudge)), a)))
            .collect();
        cands.sort_by(|x, y| x.0.dist(x.1).total_cmp(&y.0.dist(y.1)));
        let mut placed = None;
        for (h, a) in cands {
            let len = h.dist(a);
            if len <= nudge || others.iter().any(|g| crosses(g, h, a)) || !ring.contains_segment(h, a) {
                continue;
            }
            let s = (epsilon / (2.0 * len * m)).min(0.05 * len).min(0.05 * hole.bbox_diag());
            if let Some((joined, corridor)) = cut_corridor(&ring, hole, h, a, s) {
                if others.iter().all(|g| !rings_touch(&joined, g)) {
                    placed = Some((joined, corridor, Chord::new(h, a)));
                    break;
                }
            }
        }
        let (joined, corridor, slit) = placed.ok_or(Error::SlitPlacementFailed(j))?;
        ring = joined;
        corridors.push(corridor);
        slits.push(slit);
    }
    let slit_total = slits.iter().map(Chord::length).sum();
    Ok(SlitResult { polygon: ring, slits, corridors, slit_total })
}

fn crosses(g: &Polygon, a: Point, b: Point) -> bool {
    (0..g.len()).any(|i| {
        let (p, q) = g.edge(i);
        segments_intersect(a, b, p, q)
    }) || g.contains(a)
}

/// Measured frame invariants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameChecks {
    /// `d / max diagonal`; at least 1/2.
    pub diagonal_ratio: f64,
    /// Consecutive squares meet only in their common anchor.
    pub adjacent_disjoint: bool,
    /// `min dist(Q_i, Q_j) / d` over non-consecutive squares; at least 1/2.
    pub separation_ratio: f64,
    /// Largest angle between a boundary edge and the diagonal of its square;
    /// below π/8.
    pub max_tangent_angle: f64,
    /// Smallest interior angle of the interior polygon; at least π/4.
    pub min_interior_angle: f64,
}

impl FrameChecks {
    pub fn passed(&self) -> bool {
        self.diagonal_ratio >= 0.5
            && self.adjacent_disjoint
            && self.separation_ratio >= 0.5
            && self.max_tangent_angle < FRAC_PI_8
            && self.min_interior_angle >= FRAC_PI_4 - 1e-12
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryFrame {
    pub anchors: Vec<Point>,
    /// Square `i` as `[p_i, outer corner, p_{i+1}, inner corner]`.
    pub squares: Vec<[Point; 4]>,
    pub interior: Polygon,
    /// The part of the domain inside square `i`.
    pub outer: Vec<Polygon>,
    /// Shortest diagonal.
    pub d: f64,
    /// Target diagonal of the successful round.
    pub d_target: f64,
    pub rounds: usize,
    pub checks: FrameChecks,
}

fn square(a: Point, b: Point) -> [Point; 4] {
    let m = (a + b) * 0.5;
    let h = (b - a) * 0.5;
    [a, m - h.perp(), b, m + h.perp()]
}

fn square_distance(a: &[Point; 4], b: &[Point; 4]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..4 {
        for j in 0..4 {
            best = best.min(segment_segment_distance(a[i], a[(i + 1) % 4], b[j], b[(j + 1) % 4]));
        }
    }
    let inside = |p: Point, q: &[Point; 4]| (0..4).all(|k| (q[(k + 1) % 4] - q[k]).cross(p - q[k]) >= 0.0);
    if inside(a[0], b) || inside(b[0], a) {
        0.0
    } else {
        best
    }
}

fn angle_between(u: Point, v: Point) -> f64 {
    u.cross(v).atan2(u.dot(v)).abs()
}

fn try_frame(ring: &Polygon, d_target: f64) -> std::result::Result<BoundaryFrame, String> {
    let l = ring.perimeter();
    let n = ((l / d_target).round() as usize).max(4);
    let pos: Vec<BoundaryPos> = (0..n).map(|k| ring.pos_at_arclength(l * k as f64 / n as f64)).collect();
    let anchors: Vec<Point> = pos.iter().map(|&q| ring.point_at(q)).collect();
    let arcs: Vec<Vec<Point>> = (0..n)
        .map(|i| {
            let mut a = vec![anchors[i]];
            a.extend(ring_between(ring, pos[i], pos[(i + 1) % n]));
            a.push(anchors[(i + 1) % n]);
            a
        })
        .collect();
    let squares: Vec<[Point; 4]> = (0..n).map(|i| square(anchors[i], anchors[(i + 1) % n])).collect();
    let diag: Vec<f64> = (0..n).map(|i| anchors[i].dist(anchors[(i + 1) % n])).collect();
    let d = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let dmax = diag.iter().copied().fold(0.0, f64::max);
    let max_tangent_angle = arcs
        .iter()
        .map(|a| {
            let chord = a[a.len() - 1] - a[0];
            a.windows(2)
                .filter(|w| w[0].dist(w[1]) > 0.0)
                .map(|w| angle_between(chord, w[1] - w[0]))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    // Each square fills a quarter-turn wedge at a diagonal end, so consecutive
    // squares meet only at the anchor when the two diagonals turn by less than
    // a right angle.
    let adjacent_disjoint = (0..n).all(|i| {
        let (a, p, b) = (anchors[i], anchors[(i + 1) % n], anchors[(i + 2) % n]);
        angle_between(a - p, b - p) > PI / 2.0 + 1e-12
    });
    let mut sep = f64::INFINITY;
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            sep = sep.min(square_distance(&squares[i], &squares[j]));
        }
    }
    let interior_ring: Vec<Point> = squares.iter().flat_map(|q| [q[0], q[3]]).collect();
    let interior = Polygon::new(interior_ring).map_err(|e| format!("interior polygon: {e}"))?;
    let checks = FrameChecks {
        diagonal_ratio: d / dmax,
        adjacent_disjoint,
        separation_ratio: if n > 3 { sep / d } else { f64::INFINITY },
        max_tangent_angle,
        min_interior_angle: interior.min_interior_angle(),
    };
    if !checks.passed() {
        return Err(format!("invariants fail at d_target {d_target}: {checks:?}"));
    }
    let outer = arcs
        .into_iter()
        .zip(&squares)
        .map(|(mut a, q)| {
            a.push(q[3]);
            Polygon::new(a).map_err(|e| format!("boundary piece: {e}"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(BoundaryFrame { anchors, squares, interior, outer, d, d_target, rounds: 0, checks })
}

/// Anchors at equal arclength with diagonals near `d_target`; if an invariant
/// fails the target is halved, for at most [`FRAME_ROUNDS`] rounds.
pub fn boundary_frame(input: &DomainInput, d_target: f64) -> Result<BoundaryFrame> {
    if !input.holes.is_empty() {
        return Err(Error::InvalidParameter("the frame needs a simply connected domain".into()));
    }
    if !(d_target > 0.0) {
        return Err(Error::InvalidParameter(format!("d_target = {d_target}")));
    }
    input.validate()?;
    let spacing = input.max_spacing();
    if spacing > d_target / 8.0 {
        return Err(Error::FrameConstructionFailed(format!("sample spacing {spacing} exceeds d_target/8")));
    }
    let ring = input.outer_polygon()?;
    let mut dt = d_target;
    let mut last = String::new();
    for round in 0..FRAME_ROUNDS {
        match try_frame(&ring, dt) {
            Ok(f) => return Ok(BoundaryFrame { rounds: round, ..f }),
            Err(e) => last = e,
        }
        dt *= 0.5;
    }
    Err(Error::FrameConstructionFailed(last))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainConfig {
    pub theta: f64,
    /// Exceptional-set budget; defaults to `0.01 · H¹(∂Ω)`.
    pub epsilon: Option<f64>,
    /// Target frame diagonal; defaults to `H¹(∂Ω)/32`.
    pub d_target: Option<f64>,
    pub max_holes: usize,
    /// Polygon pipeline settings; its `θ` is replaced by the interior share.
    pub pipeline: PipelineConfig,
}

impl Default for DomainConfig {
    fn default() -> Self {
        DomainConfig { theta: 0.5, epsilon: None, d_target: None, max_holes: DEFAULT_MAX_HOLES, pipeline: PipelineConfig::default() }
    }
}

impl DomainConfig {
    pub fn with_theta(theta: f64) -> Self {
        DomainConfig { theta, ..Self::default() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DomainPiece {
    pub polygon: Polygon,
    /// Frame squares whose boundary piece was merged into this one.
    pub merged: Vec<usize>,
    /// Set when this is an unmerged boundary piece.
    pub boundary_piece: Option<usize>,
    pub john: JohnCert,
    pub john_constant: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainLedger {
    pub perimeter: f64,
    pub piece_perimeter_sum: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
    /// `|Σ areas − |Ω|| / |Ω|`, exceptional set included.
    pub area_residual: f64,
    pub exceptional_area: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DomainDecomposition {
    pub theta: f64,
    /// `θ` handed to the polygon pipeline.
    pub theta_interior: f64,
    /// Common John constant every piece is certified at.
    pub rho: f64,
    pub slits: Option<SlitResult>,
    pub frame: Option<BoundaryFrame>,
    pub interior: Decomposition,
    pub pieces: Vec<DomainPiece>,
    pub exceptional: Vec<Polygon>,
    pub ledger: DomainLedger,
}

impl DomainDecomposition {
    pub fn all_certified(&self) -> bool {
        self.pieces.iter().all(|p| p.john.passed())
    }
}

/// A pinch: two non-adjacent vertices at the same place.
fn has_pinch(p: &Polygon) -> bool {
    let mut v: Vec<(usize, Point)> = p.vertices().iter().copied().enumerate().collect();
    v.sort_by(|a, b| a.1.x.total_cmp(&b.1.x));
    let eps = p.eps();
    (0..v.len()).any(|i| v[i + 1..].iter().take_while(|b| b.1.x - v[i].1.x <= eps).any(|b| b.1.dist(v[i].1) <= eps))
}

fn bbox_near(a: &Polygon, b: &Polygon, eps: f64) -> bool {
    let ((a0, a1), (b0, b1)) = (a.bbox(), b.bbox());
    a0.x <= b1.x + eps && b0.x <= a1.x + eps && a0.y <= b1.y + eps && b0.y <= a1.y + eps
}

/// Merges each boundary piece into the piece sharing the longest boundary
/// with it. Returns the pieces with their merged square indices and the
/// indices of pieces that found no valid partner.
fn merge_outer(interior: Vec<Polygon>, outer: &[Polygon]) -> (Vec<(Polygon, Vec<usize>)>, Vec<usize>) {
    let mut pieces: Vec<(Polygon, Vec<usize>)> = interior.into_iter().map(|q| (q, vec![])).collect();
    let mut alone = vec![];
    for (i, o) in outer.iter().enumerate() {
        let eps = 10.0 * o.eps();
        let mut best: Option<(usize, Polygon, f64)> = None;
        for (j, (q, _)) in pieces.iter().enumerate() {
            if !bbox_near(o, q, eps) {
                continue;
            }
            if let Ok((m, shared)) = merge_polygons(q, o) {
                let simple = m.first_self_intersection().is_none() && !has_pinch(&m);
                if simple && best.as_ref().map_or(true, |b| shared > b.2) {
                    best = Some((j, m, shared));
                }
            }
        }
        match best {
            Some((j, m, _)) => {
                pieces[j].0 = m;
                pieces[j].1.push(i);
            }
            None => alone.push(i),
        }
    }
    (pieces, alone)
}

/// Full domain pipeline: slits or frame, polygon pipeline on the resulting
/// polygon, merge of the boundary pieces and John certificates of every piece
/// at one common `ρ`.
pub fn decompose_domain(input: &DomainInput, cfg: &DomainConfig) -> Result<DomainDecomposition> {
    if !(cfg.theta > 0.0 && cfg.theta < 1.0) {
        return Err(Error::InvalidParameter(format!("theta = {} outside (0, 1)", cfg.theta)));
    }
    input.validate()?;
    let h = input.perimeter()?;
    let area = input.area()?;
    let epsilon = cfg.epsilon.unwrap_or(0.01 * h);
    let (slits, frame, base, theta_interior, mut exceptional) = if input.holes.is_empty() {
        let frame = boundary_frame(input, cfg.d_target.unwrap_or(h / 32.0))?;
        // The interior boundary is about √2 times the outer one and its cuts
        // count twice; half of θ keeps the total inside the budget.
        let base = frame.interior.clone();
        (None, Some(frame), base, 0.5 * cfg.theta, vec![])
    } else {
        let s = saturate_and_slit(input, cfg.max_holes, epsilon)?;
        let hp = s.polygon.perimeter();
        let t = ((1.0 + cfg.theta) * h / hp - 1.0).min(cfg.theta);
        if t <= 0.0 {
            return Err(Error::InvalidParameter(format!("slits of total length {} exhaust the ledger", s.slit_total)));
        }
        let base = s.polygon.clone();
        let corridors = s.corridors.clone();
        (Some(s), None, base, t, corridors)
    };
    let pcfg = PipelineConfig { theta: theta_interior, certify: false, ..cfg.pipeline };
    let interior = decompose(&base, &pcfg)?;
    exceptional.extend(interior.partition.exceptional.iter().cloned());
    let rho = pcfg.constants().2;
    let (merged, alone) = match &frame {
        Some(f) => merge_outer(interior.partition.pieces.clone(), &f.outer),
        None => (interior.partition.pieces.iter().map(|q| (q.clone(), vec![])).collect(), vec![]),
    };
    let john_cfg = cfg.pipeline.john;
    let certify = |q: Polygon, merged: Vec<usize>, boundary_piece: Option<usize>| {
        let john = certify_john_with(&q, rho, &john_cfg);
        let john_constant = cfg.pipeline.estimate_john.then(|| john_constant(&q, &john_cfg));
        DomainPiece { polygon: q, merged, boundary_piece, john, john_constant }
    };
    let mut pieces: Vec<DomainPiece> = merged.into_par_iter().map(|(q, m)| certify(q, m, None)).collect();
    let mut standalone = alone;
    if let Some(f) = &frame {
        // A merged piece that fails goes back to its parts.
        let interior_pieces = &interior.partition.pieces;
        let mut kept = vec![];
        let mut split = vec![];
        for (j, piece) in pieces.into_iter().enumerate() {
            if piece.john.passed() || piece.merged.is_empty() {
                kept.push(piece);
            } else {
                standalone.extend(piece.merged.iter().copied());
                split.push(interior_pieces[j].clone());
            }
        }
        kept.extend(split.into_par_iter().map(|q| certify(q, vec![], None)).collect::<Vec<_>>());
        standalone.sort_unstable();
        kept.extend(standalone.into_par_iter().map(|i| certify(f.outer[i].clone(), vec![], Some(i))).collect::<Vec<_>>());
        pieces = kept;
    }
    let piece_perimeter_sum: f64 = pieces.iter().map(|p| p.polygon.perimeter()).sum();
    let bound = (1.0 + cfg.theta) * h;
    let exceptional_area: f64 = exceptional.iter().map(Polygon::area).sum();
    let total_area: f64 = pieces.iter().map(|p| p.polygon.area()).sum::<f64>() + exceptional_area;
    let ledger = DomainLedger {
        perimeter: h,
        piece_perimeter_sum,
        bound,
        slack: bound - piece_perimeter_sum,
        pass: piece_perimeter_sum <= bound + 1e-9 * h,
        area_residual: (total_area - area).abs() / area,
        exceptional_area,
    };
    Ok(DomainDecomposition { theta: cfg.theta, theta_interior, rho, slits, frame, interior, pieces, exceptional, ledger })
}

/// Circle of radius `r` sampled at `n` points.
pub fn circle(r: f64, n: usize) -> DomainInput {
    ellipse(r, r, n)
}

pub fn ellipse(a: f64, b: f64, n: usize) -> DomainInput {
    DomainInput::simple(
        (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).map(|t| Point::new(a * t.cos(), b * t.sin())).collect(),
    )
}

/// Rectangle `[0, w] × [0, h]` with corners rounded at radius `r`, sampled at
/// spacing at most `step`.
pub fn rounded_rect(w: f64, h: f64, r: f64, step: f64) -> DomainInput {
    let mut pts = vec![];
    let corners = [(w - r, r, -PI / 2.0), (w - r, h - r, 0.0), (r, h - r, PI / 2.0), (r, r, PI)];
    for (k, &(cx, cy, a0)) in corners.iter().enumerate() {
        let arc = (r * PI / 2.0 / step).ceil().max(1.0) as usize;
        for j in 0..arc {
            pts.push(Point::new(cx, cy) + Point::polar(r, a0 + PI / 2.0 * j as f64 / arc as f64));
        }
        let start = Point::new(cx, cy) + Point::polar(r, a0 + PI / 2.0);
        let (nx, ny, na) = corners[(k + 1) % 4];
        let end = Point::new(nx, ny) + Point::polar(r, na);
        let m = (start.dist(end) / step).ceil().max(1.0) as usize;
        pts.extend((0..m).map(|j| start.lerp(end, j as f64 / m as f64)));
    }
    DomainInput::simple(pts)
}

/// Smooth star-shaped blob with `n` samples.
pub fn smooth_blob(n: usize, seed: u64) -> DomainInput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64, f64)> =
        (2..=4).map(|k| (k as f64, rng.gen_range(0.02..0.06), rng.gen_range(0.0..2.0 * PI))).collect();
    DomainInput::simple(
        (0..n)
            .map(|i| {
                let phi = 2.0 * PI * i as f64 / n as f64;
                Point::polar(1.0 + modes.iter().map(|&(k, a, b)| a * (k * phi + b).cos()).sum::<f64>(), phi)
            })
            .collect(),
    )
}

/// Square `[0, 10]²` with the square hole `[4, 6]²`.
pub fn square_annulus() -> DomainInput {
    let sq = |a: f64, b: f64| vec![Point::new(a, a), Point::new(b, a), Point::new(b, b), Point::new(a, b)];
    let mut hole = sq(4.0, 6.0);
    hole.reverse();
    DomainInput { outer: sq(0.0, 10.0), holes: vec![hole], spacing: None }
}

/// Ten smooth simply connected fixtures.
pub fn smooth_corpus() -> Vec<(String, DomainInput)> {
    vec![
        ("circle-1".into(), circle(1.0, 512)),
        ("circle-3".into(), circle(3.0, 1024)),
        ("ellipse-2".into(), ellipse(2.0, 1.0, 768)),
        ("ellipse-3".into(), ellipse(3.0, 1.0, 1024)),
        ("ellipse-4".into(), ellipse(2.0, 0.5, 1024)),
        ("rounded-square-0.05".into(), rounded_rect(1.0, 1.0, 0.05, 0.005)),
        ("rounded-square-0.2".into(), rounded_rect(1.0, 1.0, 0.2, 0.01)),
        ("rounded-rect-3x1".into(), rounded_rect(3.0, 1.0, 0.25, 0.02)),
        ("blob-0".into(), smooth_blob(512, 0)),
        ("blob-1".into(), smooth_blob(512, 1)),
    ]
}
