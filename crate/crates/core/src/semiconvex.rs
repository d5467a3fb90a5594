//! Segmentation properties, semiconvexity certificates and the iterative
//! decomposition of a polygon into (SP)-semiconvex pieces.
//!
//! A polygon is ϑ-semiconvex when every chord `[v; w]` from a concave vertex `v`
//! that splits it into `Q1 ∪ Q2` satisfies `|[v; w]| >= ϑ min_k d(Q_k)`, where `d`
//! is the intrinsic diameter. (SP)-semiconvexity only asks this for chords with
//! the segmentation property: no other concave vertex in the visible cigar of
//! the chord, and no triangle piece with a sliver angle at `v`.
//!
//! Chord candidates for a concave vertex `v` are all vertices, the first hit of
//! the ray from `v` through each vertex, the feet of perpendiculars from `v`, and
//! evenly spaced boundary samples. Most candidates are discarded by the bounds
//! `max(|u - v|, |u - w|) <= d(Q) <= H¹(∂Q) / 2` before any geodesic work.

use crate::error::{Error, Result};
use crate::geodesic::Geodesic;
use crate::geom::{closed_cigar_membership, visibility_witness, BoundaryPos, Point, Polygon};
use crate::partition::{chord_status, split_unchecked, Chord, Partition, Side, SplitResult};
use serde::{Deserialize, Serialize};

/// Parameters of the semiconvex stage.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiconvexParams {
    /// Ledger parameter; cut chords satisfy `|chord| < (θ/2) min_k d(Q_k)`.
    pub theta: f64,
    /// Cigar parameter.
    pub eta: f64,
    /// Evenly spaced boundary samples per concave vertex.
    pub samples: usize,
}

impl SemiconvexParams {
    pub const DEFAULT_ETA: f64 = 0.05;
    pub const DEFAULT_SAMPLES: usize = 256;

    pub fn new(theta: f64, eta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidParameter(format!("theta = {theta} outside (0, 1)")));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidEta(eta));
        }
        Ok(SemiconvexParams { theta, eta, samples: Self::DEFAULT_SAMPLES })
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    /// Semiconvexity constant used to detect chords to cut.
    pub fn vartheta(&self) -> f64 {
        0.5 * self.theta
    }

    /// Whether the cigar hypothesis `ϑ <= η / 2` holds for these parameters.
    pub fn hypothesis_holds(&self) -> bool {
        self.vartheta() <= 0.5 * self.eta
    }

    /// Constant certified for (SP)-ϑ-semiconvex polygons: `(3 + 12/ϑ)^-1`.
    pub fn bar(vartheta: f64) -> f64 {
        1.0 / (3.0 + 12.0 / vartheta)
    }

    /// Stopping constant of the cut lemma: `bar(ϑ) η / (4η + 2)`.
    pub fn vartheta_tilde(&self) -> f64 {
        Self::bar(self.vartheta()) * self.eta / (4.0 * self.eta + 2.0)
    }

    /// Constant at which output pieces are certified: `bar(vartheta_tilde)`.
    pub fn vartheta_out(&self) -> f64 {
        Self::bar(self.vartheta_tilde())
    }

    /// Minimal angle of triangle pieces at the chord's concave endpoint: `½ arcsin η`.
    pub fn alpha_eta(&self) -> f64 {
        0.5 * self.eta.asin()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertStatus {
    Pass,
    Fail,
}

/// A chord violating the semiconvexity inequality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub chord: Chord,
    pub min_diameter: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiconvexCert {
    pub vartheta: f64,
    pub status: CertStatus,
    pub counterexample: Option<Counterexample>,
    pub candidates: usize,
    /// Smallest ratio `|chord| / min_k d(Q_k)` found, when below `vartheta`.
    pub worst_ratio: Option<f64>,
}

impl SemiconvexCert {
    pub fn passed(&self) -> bool {
        self.status == CertStatus::Pass
    }
}

/// Chord candidates `w` for the concave vertex with index `iv`.
pub fn chord_candidates(p: &Polygon, iv: usize, samples: usize) -> Vec<BoundaryPos> {
    let n = p.len();
    let v = p.vertex(iv);
    let mut out = Vec::with_capacity(3 * n + samples);
    for u in 0..n {
        if u != iv {
            out.push(BoundaryPos { edge: u, t: 0.0 });
        }
    }
    for e in 0..n {
        if e == iv || p.next(e) == iv {
            continue;
        }
        let (a, b) = p.edge(e);
        let (_, t) = crate::geom::point_segment_distance(v, a, b);
        if t > 0.0 && t < 1.0 {
            out.push(BoundaryPos { edge: e, t });
        }
    }
    for u in 0..n {
        if u == iv {
            continue;
        }
        let d = p.vertex(u) - v;
        let l = d.norm();
        if let Some((_, pos)) = p.ray_hit(v, d / l, l + p.eps()) {
            out.push(pos);
        }
    }
    let per = p.perimeter();
    for k in 0..samples {
        out.push(p.pos_at_arclength(per * k as f64 / samples as f64));
    }
    out
}

/// Lower bounds for the intrinsic diameters of the two pieces cut by `[v, w]`
/// (largest Euclidean distance from a piece vertex to `v` or `w`).
fn diameter_lower_bounds(p: &Polygon, vp: BoundaryPos, wp: BoundaryPos) -> (f64, f64) {
    let (v, w) = (p.point_at(vp), p.point_at(wp));
    let (sv, sw) = (p.arclength(vp), p.arclength(wp));
    let per = p.perimeter();
    let span = (sw - sv).rem_euclid(per);
    let base = v.dist(w);
    let (mut l1, mut l2) = (base, base);
    for i in 0..p.len() {
        let u = p.vertex(i);
        let r = u.dist(v).max(u.dist(w));
        let off = (p.arclength(BoundaryPos { edge: i, t: 0.0 }) - sv).rem_euclid(per);
        if off < span {
            l1 = l1.max(r);
        } else {
            l2 = l2.max(r);
        }
    }
    (l1, l2)
}

fn piece_perimeters(p: &Polygon, vp: BoundaryPos, wp: BoundaryPos, len: f64) -> (f64, f64) {
    let per = p.perimeter();
    let span = p.boundary_length_between(vp, wp);
    (span + len, per - span + len)
}

/// Angle of a triangle piece at the vertex nearest to `v`.
fn triangle_angle_at(q: &Polygon, v: Point) -> f64 {
    let i = (0..q.len()).min_by(|&a, &b| q.vertex(a).dist(v).total_cmp(&q.vertex(b).dist(v))).unwrap();
    q.interior_angle(i)
}

/// Cigar and triangle conditions. With `restrict`, only concave vertices inside
/// that piece are considered (the weak property).
fn segmentation_conditions(p: &Polygon, s: &SplitResult, eta: f64, restrict: Option<&Polygon>) -> bool {
    let alpha = 0.5 * eta.asin();
    for q in [&s.q1, &s.q2] {
        if q.simplified().len() == 3 && triangle_angle_at(q, s.chord.v) <= alpha {
            return false;
        }
    }
    let (v, w) = (s.chord.v, s.chord.w);
    let eps = p.eps();
    for u in p.concave_indices() {
        let x = p.vertex(u);
        if x.dist(v) <= eps || x.dist(w) <= eps {
            continue;
        }
        if let Some(q) = restrict {
            if !q.contains(x) {
                continue;
            }
        }
        if closed_cigar_membership(v, w, eta, x, eps).unwrap_or(false) && visibility_witness(p, v, w, x).is_some() {
            return false;
        }
    }
    true
}

fn checked_split(p: &Polygon, chord: Chord) -> Result<SplitResult> {
    let vp = p.locate_boundary(chord.v).ok_or(Error::ChordEndpointNotOnBoundary)?;
    let wp = p.locate_boundary(chord.w).ok_or(Error::ChordEndpointNotOnBoundary)?;
    if vp.t != 0.0 || !p.is_concave(vp.edge) {
        return Err(Error::InvalidParameter("chord must start at a concave vertex".into()));
    }
    chord_status(p, vp, wp)?;
    split_unchecked(p, vp, wp)
}

/// Segmentation property (SP) of the chord.
pub fn check_sp(p: &Polygon, chord: Chord, eta: f64) -> Result<bool> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidEta(eta));
    }
    let s = checked_split(p, chord)?;
    Ok(segmentation_conditions(p, &s, eta, None))
}

/// Weak segmentation property (WSP): the cigar condition only inside the distinguished piece.
pub fn check_wsp(p: &Polygon, chord: Chord, eta: f64) -> Result<bool> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidEta(eta));
    }
    let s = checked_split(p, chord)?;
    let side = s.select();
    Ok(segmentation_conditions(p, &s, eta, s.piece(side)))
}

/// Which chords a certificate quantifies over.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChordClass {
    All,
    /// Only chords with the segmentation property for the given η.
    Segmentation(f64),
}

/// Searches for the chord minimising `|chord| / min_k d(Q_k)` below `cap`.
fn worst_chord(p: &Polygon, geo: &Geodesic, cap: f64, samples: usize, class: ChordClass) -> (Option<(Counterexample, f64)>, usize) {
    let mut best_ratio = cap;
    let mut best: Option<(Counterexample, f64)> = None;
    let mut examined = 0;
    for iv in p.concave_indices() {
        let vp = BoundaryPos { edge: iv, t: 0.0 };
        let v = p.vertex(iv);
        for wp in chord_candidates(p, iv, samples) {
            examined += 1;
            let w = p.point_at(wp);
            let len = v.dist(w);
            if len <= p.eps() {
                continue;
            }
            let (per1, per2) = piece_perimeters(p, vp, wp, len);
            if len >= best_ratio * 0.5 * per1.min(per2) {
                continue;
            }
            if chord_status(p, vp, wp).is_err() {
                continue;
            }
            let thr = len / best_ratio;
            let (lb1, lb2) = diameter_lower_bounds(p, vp, wp);
            let Ok(s) = split_unchecked(p, vp, wp) else { continue };
            if let ChordClass::Segmentation(eta) = class {
                if !segmentation_conditions(p, &s, eta, None) {
                    continue;
                }
            }
            let g1 = Geodesic::for_piece(geo, s.q1.clone());
            if lb1 <= thr && g1.diameter_above(thr).0 <= thr {
                continue;
            }
            let g2 = Geodesic::for_piece(geo, s.q2.clone());
            if lb2 <= thr && g2.diameter_above(thr).0 <= thr {
                continue;
            }
            let m = g1.diameter().0.min(g2.diameter().0);
            let ratio = len / m;
            if ratio < best_ratio {
                best_ratio = ratio;
                best = Some((Counterexample { chord: s.chord, min_diameter: m }, ratio));
            }
        }
    }
    (best, examined)
}

fn certify_with(p: &Polygon, vartheta: f64, samples: usize, class: ChordClass) -> SemiconvexCert {
    let geo = Geodesic::new(p.clone());
    certify_in(p, &geo, vartheta, samples, class)
}

fn certify_in(p: &Polygon, geo: &Geodesic, vartheta: f64, samples: usize, class: ChordClass) -> SemiconvexCert {
    let (worst, candidates) = worst_chord(p, geo, vartheta, samples, class);
    match worst {
        None => SemiconvexCert { vartheta, status: CertStatus::Pass, counterexample: None, candidates, worst_ratio: None },
        Some((c, r)) => SemiconvexCert {
            vartheta,
            status: CertStatus::Fail,
            counterexample: Some(c),
            candidates,
            worst_ratio: Some(r),
        },
    }
}

/// Certifies ϑ-semiconvexity over the candidate chord set. On failure the most
/// violating chord found is returned as counterexample.
pub fn certify_semiconvex(p: &Polygon, vartheta: f64, samples: usize) -> SemiconvexCert {
    certify_with(p, vartheta, samples, ChordClass::All)
}

/// Certifies (SP)-ϑ-semiconvexity.
pub fn certify_sp_semiconvex(p: &Polygon, vartheta: f64, eta: f64, samples: usize) -> SemiconvexCert {
    certify_with(p, vartheta, samples, ChordClass::Segmentation(eta))
}

/// Smallest ratio `|chord| / min_k d(Q_k)` over the candidate chords, capped at `cap`.
pub fn semiconvexity_ratio(p: &Polygon, cap: f64, samples: usize) -> f64 {
    let geo = Geodesic::new(p.clone());
    worst_chord(p, &geo, cap, samples, ChordClass::All).0.map_or(cap, |(_, r)| r)
}

/// A chord chosen for cutting, with its diagnostics.
#[derive(Clone, Debug)]
pub struct ChosenChord {
    pub split: SplitResult,
    /// The distinguished piece that is split off.
    pub side: Side,
    pub n_prime: usize,
    /// `|chord| <= θ H¹(∂Q1 \ chord)`.
    pub length_bound_ok: bool,
    /// The split-off piece certified (SP)-semiconvex at the stopping constant.
    pub piece_verified: bool,
}

impl ChosenChord {
    pub fn chord(&self) -> Chord {
        self.split.chord
    }

    /// The piece that is split off and the remainder.
    pub fn pieces(&self) -> (&Polygon, &Polygon) {
        match self.side {
            Side::Q2 => (&self.split.q2, &self.split.q1),
            _ => (&self.split.q1, &self.split.q2),
        }
    }
}

struct Qualifying {
    n_prime: usize,
    ratio: f64,
    vp: BoundaryPos,
    wp: BoundaryPos,
}

/// Moves a vertex endpoint `w` by `10 eps` along the boundary into the distinguished piece.
fn perturb_off_vertex(p: &Polygon, vp: BoundaryPos, wp: BoundaryPos, side: Side) -> BoundaryPos {
    if wp.t != 0.0 {
        return wp;
    }
    let s = p.arclength(wp);
    let step = 10.0 * p.eps();
    let first = if side == Side::Q2 { step } else { -step };
    for d in [first, -first] {
        let cand = p.pos_at_arclength(s + d);
        if cand.t != 0.0 && chord_status(p, vp, cand).is_ok() {
            return cand;
        }
    }
    wp
}

/// Finds a chord violating `|chord| >= (θ/2) min_k d(Q_k)` that has the weak
/// segmentation property, minimising the number of concave vertices in the
/// distinguished piece and then the ratio `|chord| / min_k d(Q_k)`. The
/// split-off piece is certified before returning; when that fails the next
/// candidates are tried. Returns `None` when no such chord exists.
pub fn find_splitting_chord(p: &Polygon, params: &SemiconvexParams) -> Option<ChosenChord> {
    let geo = Geodesic::new(p.clone());
    find_splitting_chord_in(p, &geo, params)
}

fn find_splitting_chord_in(p: &Polygon, geo: &Geodesic, params: &SemiconvexParams) -> Option<ChosenChord> {
    let vt = params.vartheta();
    let mut found: Vec<Qualifying> = Vec::new();
    let mut best_n = usize::MAX;
    for iv in p.concave_indices() {
        let vp = BoundaryPos { edge: iv, t: 0.0 };
        let v = p.vertex(iv);
        for wp in chord_candidates(p, iv, params.samples) {
            let len = v.dist(p.point_at(wp));
            if len <= p.eps() {
                continue;
            }
            let (per1, per2) = piece_perimeters(p, vp, wp, len);
            if len >= vt * 0.5 * per1.min(per2) || chord_status(p, vp, wp).is_err() {
                continue;
            }
            let Ok(s) = split_unchecked(p, vp, wp) else { continue };
            let side = s.select();
            let n_prime = if side == Side::Q2 { s.n2 } else { s.n1 };
            if n_prime > best_n {
                continue;
            }
            let thr = len / vt;
            let (lb1, lb2) = diameter_lower_bounds(p, vp, wp);
            let g1 = Geodesic::for_piece(geo, s.q1.clone());
            if lb1 <= thr && g1.diameter_above(thr).0 <= thr {
                continue;
            }
            let g2 = Geodesic::for_piece(geo, s.q2.clone());
            if lb2 <= thr && g2.diameter_above(thr).0 <= thr {
                continue;
            }
            if !segmentation_conditions(p, &s, params.eta, s.piece(side)) {
                continue;
            }
            best_n = best_n.min(n_prime);
            let ratio = len / g1.diameter().0.min(g2.diameter().0);
            found.push(Qualifying { n_prime, ratio, vp, wp });
        }
    }
    found.retain(|q| q.n_prime == best_n);
    found.sort_by(|a, b| a.ratio.total_cmp(&b.ratio));
    let mut fallback: Option<ChosenChord> = None;
    for q in found.iter().take(8) {
        let Ok(s0) = split_unchecked(p, q.vp, q.wp) else { continue };
        let wp = perturb_off_vertex(p, q.vp, q.wp, s0.select());
        let Ok(s) = split_unchecked(p, q.vp, wp) else { continue };
        let side = s.select();
        let side = if side == Side::Both { Side::Q1 } else { side };
        let (piece, n_prime) = match side {
            Side::Q2 => (&s.q2, s.n2),
            _ => (&s.q1, s.n1),
        };
        let len = s.chord.length();
        let length_bound_ok = len <= params.theta * (piece.perimeter() - len) * (1.0 + 1e-12);
        let piece_verified =
            certify_sp_semiconvex(piece, params.vartheta_tilde(), params.eta, params.samples).passed();
        let chosen = ChosenChord { split: s, side, n_prime, length_bound_ok, piece_verified };
        if piece_verified {
            return Some(chosen);
        }
        fallback.get_or_insert(chosen);
    }
    fallback
}

/// Record of one cut made by [`decompose_semiconvex`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutRecord {
    pub chord: Chord,
    pub n_prime: usize,
    pub length_bound_ok: bool,
    pub piece_verified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SemiconvexDecomposition {
    pub partition: Partition,
    pub records: Vec<CutRecord>,
    pub params: SemiconvexParams,
}

/// Repeatedly splits off distinguished pieces along violating (WSP) chords until
/// the remainder has none. The cut total obeys
/// `Σ H¹(∂P_j) <= (1 + 2θ/(1-θ)) H¹(∂P)`.
pub fn decompose_semiconvex(p: &Polygon, params: &SemiconvexParams) -> Result<SemiconvexDecomposition> {
    let limit = 4 * p.len() + 16;
    let mut part = Partition::trivial(p);
    part.pieces.clear();
    let mut records = Vec::new();
    let mut rest = p.clone();
    let mut geo = Geodesic::new(rest.clone());
    for _ in 0..limit {
        match find_splitting_chord_in(&rest, &geo, params) {
            None => {
                part.pieces.push(rest);
                return Ok(SemiconvexDecomposition { partition: part, records, params: *params });
            }
            Some(c) => {
                let chord = c.chord();
                let (piece, remainder) = c.pieces();
                part.pieces.push(piece.clone());
                part.add_cut(chord.v, chord.w, "semiconvex");
                records.push(CutRecord {
                    chord,
                    n_prime: c.n_prime,
                    length_bound_ok: c.length_bound_ok,
                    piece_verified: c.piece_verified,
                });
                let next = remainder.clone();
                geo = Geodesic::for_piece(&geo, next.clone());
                rest = next;
            }
        }
    }
    Err(Error::IterationLimitExceeded(limit))
}

/// Criterion for splitting off an end piece along `[u1, u2]`: every concave vertex
/// `v` of the first piece sees the chord under a triangle `(v, u1, u2)` whose larger
/// base angle is at least `alpha`.
pub fn check_part_seg_criterion(p: &Polygon, chord: Chord, alpha: f64) -> Result<bool> {
    let vp = p.locate_boundary(chord.v).ok_or(Error::ChordEndpointNotOnBoundary)?;
    let wp = p.locate_boundary(chord.w).ok_or(Error::ChordEndpointNotOnBoundary)?;
    chord_status(p, vp, wp)?;
    let s = split_unchecked(p, vp, wp)?;
    Ok(part_seg_holds(&s.q1, chord.v, chord.w, alpha))
}

/// The criterion evaluated directly on a piece bounded in part by `[u1, u2]`.
pub fn part_seg_holds(piece: &Polygon, u1: Point, u2: Point, alpha: f64) -> bool {
    let eps = piece.eps();
    piece.concave_indices().into_iter().all(|i| {
        let v = piece.vertex(i);
        if v.dist(u1) <= eps || v.dist(u2) <= eps {
            return true;
        }
        let a1 = angle_between(v - u1, u2 - u1);
        let a2 = angle_between(v - u2, u1 - u2);
        a1.max(a2) >= alpha
    })
}

fn angle_between(a: Point, b: Point) -> f64 {
    a.cross(b).abs().atan2(a.dot(b))
}
