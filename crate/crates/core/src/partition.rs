//! Chord splits, partitions and the boundary-length ledger.

use crate::error::{Error, Result};
use crate::geom::{point_segment_distance, predicates::segments_cross_properly, BoundaryPos, Containment, Point, Polygon};
use serde::{Deserialize, Serialize};

/// A segment between two boundary points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chord {
    pub v: Point,
    pub w: Point,
}

impl Chord {
    pub fn new(v: Point, w: Point) -> Self {
        Chord { v, w }
    }

    pub fn length(&self) -> f64 {
        self.v.dist(self.w)
    }

    pub fn reversed(&self) -> Self {
        Chord { v: self.w, w: self.v }
    }
}

/// The two pieces induced by a chord. `q1` is bounded by the counter-clockwise
/// boundary path from `v` to `w`; `n1`, `n2` count the concave vertices of the
/// parent lying in each piece, `v` and `w` excluded.
#[derive(Clone, Debug)]
pub struct SplitResult {
    pub q1: Polygon,
    pub q2: Polygon,
    pub chord: Chord,
    pub n1: usize,
    pub n2: usize,
}

/// Which side of a chord is the distinguished piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Q1,
    Q2,
    Both,
}

impl SplitResult {
    /// The distinguished side: fewer concave vertices, then smaller area.
    pub fn select(&self) -> Side {
        if self.n1 != self.n2 {
            return if self.n1 < self.n2 { Side::Q1 } else { Side::Q2 };
        }
        let (a1, a2) = (self.q1.area(), self.q2.area());
        if (a1 - a2).abs() <= 1e-9 * a1.max(a2) {
            Side::Both
        } else if a1 < a2 {
            Side::Q1
        } else {
            Side::Q2
        }
    }

    pub fn piece(&self, side: Side) -> Option<&Polygon> {
        match side {
            Side::Q1 => Some(&self.q1),
            Side::Q2 => Some(&self.q2),
            Side::Both => None,
        }
    }
}

/// Checks that `[v, w]` (given as boundary positions) is a chord whose relative
/// interior lies in the interior of the polygon.
pub fn chord_status(p: &Polygon, vp: BoundaryPos, wp: BoundaryPos) -> Result<()> {
    let eps = p.eps();
    let (v, w) = (p.point_at(vp), p.point_at(wp));
    if v.dist(w) <= eps {
        return Err(Error::ChordOnBoundary);
    }
    let on_edge = |pos: BoundaryPos, i: usize| pos.edge == i || (pos.t == 0.0 && p.next(i) == pos.edge);
    for i in 0..p.len() {
        let (a, b) = p.edge(i);
        let tv = on_edge(vp, i);
        let tw = on_edge(wp, i);
        if tv && tw {
            return Err(Error::ChordOnBoundary);
        }
        for q in [a, b] {
            if q.dist(v) <= eps || q.dist(w) <= eps {
                continue;
            }
            if point_segment_distance(q, v, w).0 <= eps {
                return Err(if tv || tw { Error::ChordOnBoundary } else { Error::ChordTouchesBoundaryInternally });
            }
        }
        if !tv && !tw {
            if segments_cross_properly(v, w, a, b) {
                return Err(Error::ChordExitsPolygon);
            }
            if point_segment_distance(v, a, b).0 <= eps || point_segment_distance(w, a, b).0 <= eps {
                return Err(Error::ChordTouchesBoundaryInternally);
            }
        }
    }
    match p.containment(v.lerp(w, 0.5)) {
        Containment::Inside => Ok(()),
        Containment::Boundary => Err(Error::ChordOnBoundary),
        Containment::Outside => Err(Error::ChordExitsPolygon),
    }
}

/// Splits along a chord given by boundary positions (no snapping).
pub fn split_at(p: &Polygon, vp: BoundaryPos, wp: BoundaryPos) -> Result<SplitResult> {
    chord_status(p, vp, wp)?;
    Ok(split_unchecked(p, vp, wp)?)
}

/// Splits without validating the chord.
pub fn split_unchecked(p: &Polygon, vp: BoundaryPos, wp: BoundaryPos) -> Result<SplitResult> {
    let (v, w) = (p.point_at(vp), p.point_at(wp));
    let n = p.len();
    // Vertices strictly after `from` up to `to` (exclusive), walking counter-clockwise.
    let arc = |from: BoundaryPos, to: BoundaryPos| -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = p.next(from.edge);
        let end = if to.t == 0.0 { to.edge } else { p.next(to.edge) };
        let stop_at_end = to.t == 0.0;
        if from.edge == to.edge && from.t < to.t && to.t > 0.0 {
            return out;
        }
        for _ in 0..n {
            if stop_at_end && i == end {
                break;
            }
            out.push(i);
            if !stop_at_end && i == to.edge {
                break;
            }
            i = p.next(i);
        }
        out
    };
    let a1 = arc(vp, wp);
    let a2 = arc(wp, vp);
    let concave = |idx: &[usize]| idx.iter().filter(|&&i| p.is_concave(i) && p.vertex(i).dist(v) > p.eps() && p.vertex(i).dist(w) > p.eps()).count();
    let mut r1 = vec![v];
    r1.extend(a1.iter().map(|&i| p.vertex(i)));
    r1.push(w);
    let mut r2 = vec![w];
    r2.extend(a2.iter().map(|&i| p.vertex(i)));
    r2.push(v);
    let q1 = Polygon::from_ring(r1, p.eps())?;
    let q2 = Polygon::from_ring(r2, p.eps())?;
    Ok(SplitResult { n1: concave(&a1), n2: concave(&a2), q1, q2, chord: Chord { v, w } })
}

/// Splits the polygon along `[v, w]`. Endpoints within tolerance of a vertex snap
/// to it; endpoints in the interior of an edge become new vertices.
pub fn split_by_chord(p: &Polygon, chord: Chord) -> Result<SplitResult> {
    let vp = p.locate_boundary(chord.v).ok_or(Error::ChordEndpointNotOnBoundary)?;
    let wp = p.locate_boundary(chord.w).ok_or(Error::ChordEndpointNotOnBoundary)?;
    split_at(p, vp, wp)
}

/// Distinguished side of the chord `[v, w]`.
pub fn select_qvw(p: &Polygon, chord: Chord) -> Result<(Side, SplitResult)> {
    let s = split_by_chord(p, chord)?;
    Ok((s.select(), s))
}

/// A cut recorded in the ledger.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    pub a: Point,
    pub b: Point,
    pub length: f64,
    pub stage: String,
}

/// Pieces of a decomposition, the exceptional set and the cut ledger.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Partition {
    pub source_perimeter: f64,
    pub source_area: f64,
    pub pieces: Vec<Polygon>,
    pub exceptional: Vec<Polygon>,
    pub cuts: Vec<Cut>,
}

impl Partition {
    pub fn trivial(p: &Polygon) -> Self {
        Partition {
            source_perimeter: p.perimeter(),
            source_area: p.area(),
            pieces: vec![p.clone()],
            exceptional: vec![],
            cuts: vec![],
        }
    }

    pub fn add_cut(&mut self, a: Point, b: Point, stage: &str) {
        self.cuts.push(Cut { a, b, length: a.dist(b), stage: stage.to_string() });
    }

    /// Sum of piece perimeters, exceptional set excluded.
    pub fn piece_perimeter_sum(&self) -> f64 {
        self.pieces.iter().map(|q| q.perimeter()).sum()
    }

    pub fn exceptional_perimeter(&self) -> f64 {
        self.exceptional.iter().map(|q| q.perimeter()).sum()
    }

    pub fn cut_total(&self) -> f64 {
        self.cuts.iter().map(|c| c.length).sum()
    }

    pub fn area_sum(&self) -> f64 {
        self.pieces.iter().chain(&self.exceptional).map(|q| q.area()).sum()
    }

    /// Residual of `sum of all perimeters = source perimeter + 2 * cut total`.
    pub fn identity_residual(&self) -> f64 {
        self.piece_perimeter_sum() + self.exceptional_perimeter() - self.source_perimeter - 2.0 * self.cut_total()
    }

    /// `Σ_{j>=1} H¹(∂P_j) <= (1 + θ) H¹(∂P)` up to a relative slack of 1e-9.
    /// Returns the verdict and the slack `(1 + θ) H¹(∂P) - Σ`.
    pub fn ledger_check(&self, theta: f64) -> (bool, f64) {
        let bound = (1.0 + theta) * self.source_perimeter;
        let slack = bound - self.piece_perimeter_sum();
        (slack >= -1e-9 * self.source_perimeter, slack)
    }
}

pub fn ledger_check(part: &Partition, theta: f64) -> (bool, f64) {
    part.ledger_check(theta)
}

/// Inserts into `a` the vertices of `b` that lie in the interior of edges of `a`.
fn insert_t_junctions(a: &[Point], b: &[Point], eps: f64) -> Vec<Point> {
    let n = a.len();
    let mut out = Vec::with_capacity(n + b.len());
    for i in 0..n {
        let (s, e) = (a[i], a[(i + 1) % n]);
        out.push(s);
        let mut on: Vec<(f64, Point)> = b
            .iter()
            .filter(|&&q| q.dist(s) > eps && q.dist(e) > eps)
            .filter_map(|&q| {
                let (d, t) = point_segment_distance(q, s, e);
                (d <= eps && t > 0.0 && t < 1.0).then_some((t, q))
            })
            .collect();
        on.sort_by(|x, y| x.0.total_cmp(&y.0));
        out.extend(on.into_iter().map(|(_, q)| q));
    }
    out
}

/// Union of two polygons sharing one contiguous stretch of boundary.
/// Returns the merged polygon and the length of the shared boundary.
pub fn merge_polygons(a: &Polygon, b: &Polygon) -> Result<(Polygon, f64)> {
    let eps = a.eps().max(b.eps());
    let ra = insert_t_junctions(a.vertices(), b.vertices(), eps);
    let rb = insert_t_junctions(b.vertices(), a.vertices(), eps);
    let (na, nb) = (ra.len(), rb.len());
    let find_b = |p: Point| rb.iter().position(|q| q.dist(p) <= eps);
    let shared: Vec<bool> = (0..na)
        .map(|i| {
            let (s, e) = (ra[i], ra[(i + 1) % na]);
            match (find_b(s), find_b(e)) {
                (Some(js), Some(je)) => (je + 1) % nb == js,
                _ => false,
            }
        })
        .collect();
    let count = shared.iter().filter(|&&s| s).count();
    if count == 0 {
        return Err(Error::NotAdjacent);
    }
    if count == na {
        return Err(Error::NotAdjacent);
    }
    // Start of the shared chain: a shared edge preceded by an unshared one.
    let starts: Vec<usize> = (0..na).filter(|&i| shared[i] && !shared[(i + na - 1) % na]).collect();
    if starts.len() != 1 {
        return Err(Error::NotAdjacent);
    }
    let i0 = starts[0];
    let mut i1 = i0;
    let mut shared_len = 0.0;
    while shared[i1] {
        shared_len += ra[i1].dist(ra[(i1 + 1) % na]);
        i1 = (i1 + 1) % na;
    }
    // Chain runs from ra[i0] to ra[i1].
    let (s, e) = (ra[i0], ra[i1]);
    let mut ring = Vec::with_capacity(na + nb);
    let mut k = i1;
    loop {
        ring.push(ra[k]);
        if k == i0 {
            break;
        }
        k = (k + 1) % na;
    }
    let js = find_b(s).ok_or(Error::NotAdjacent)?;
    let je = find_b(e).ok_or(Error::NotAdjacent)?;
    let mut k = (js + 1) % nb;
    while k != je {
        ring.push(rb[k]);
        k = (k + 1) % nb;
    }
    let merged = Polygon::from_ring(ring, eps)?.simplified();
    Ok((merged, shared_len))
}
