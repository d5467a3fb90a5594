//! Cigars around segments, carrots along curves and visible regions.

use super::point::Point;
use super::polygon::Polygon;
use crate::error::{Error, Result};

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidEta(eta))
    }
}

/// Minimum over `t in [0, len]` of `|x - (a + t u)|^2 - eta^2 (t0 + t)^2`, where `u` is the
/// unit direction from `a`. Negative iff `x` lies in the open union of the balls
/// `B(a + t u, eta (t0 + t))`.
fn growing_ball_gap(a: Point, u: Point, len: f64, t0: f64, eta: f64, x: Point) -> f64 {
    let r = x - a;
    let s = r.dot(u);
    let h2 = r.norm2() - s * s;
    let e2 = eta * eta;
    let f = |t: f64| (t - s) * (t - s) + h2 - e2 * (t0 + t) * (t0 + t);
    let t_star = ((s + e2 * t0) / (1.0 - e2)).clamp(0.0, len);
    f(t_star).min(f(0.0)).min(f(len))
}

fn cigar_gap(a: Point, b: Point, eta: f64, x: Point) -> f64 {
    let l = a.dist(b);
    if l == 0.0 {
        return x.dist(a).powi(2);
    }
    let u = (b - a) / l;
    let half = 0.5 * l;
    growing_ball_gap(a, u, half, 0.0, eta, x).min(growing_ball_gap(b, -u, half, 0.0, eta, x))
}

/// Membership in the open cigar: the union over `t` of balls centred at `a + t(b - a)/|b - a|`
/// with radius `eta * min(t, |b - a| - t)`.
pub fn cigar_membership(a: Point, b: Point, eta: f64, x: Point) -> Result<bool> {
    check_eta(eta)?;
    Ok(cigar_gap(a, b, eta, x) < 0.0)
}

/// Membership in the closure of the cigar, with an absolute slack `tol`.
pub fn closed_cigar_membership(a: Point, b: Point, eta: f64, x: Point, tol: f64) -> Result<bool> {
    check_eta(eta)?;
    if x.dist(a) <= tol || x.dist(b) <= tol {
        return Ok(true);
    }
    Ok(cigar_gap(a, b, eta, x) <= tol * tol)
}

/// Membership in the open carrot of the polyline `curve`: the union over the arclength
/// parameter `t` of balls centred at `curve(t)` with radius `eta * t`.
pub fn carrot_membership(curve: &[Point], eta: f64, x: Point) -> Result<bool> {
    check_eta(eta)?;
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let mut t0 = 0.0;
    for w in curve.windows(2) {
        let l = w[0].dist(w[1]);
        if l > 0.0 {
            let u = (w[1] - w[0]) / l;
            if growing_ball_gap(w[0], u, l, t0, eta, x) < 0.0 {
                return Ok(true);
            }
            t0 += l;
        }
    }
    Ok(false)
}

/// Number of evenly spaced witness points on `[v, w]` used by the visibility test.
pub const VISIBILITY_SAMPLES: usize = 64;

/// Whether `x` lies in the closed cigar of `[v, w]` and sees some point of `[v, w]`
/// within the polygon. Witness points are the projection of `x`, both endpoints and
/// evenly spaced samples.
pub fn visible_region_membership(p: &Polygon, v: Point, w: Point, eta: f64, x: Point) -> Result<bool> {
    check_eta(eta)?;
    if !p.contains_segment(v, w) {
        return Err(Error::SegmentNotInPolygon);
    }
    if !closed_cigar_membership(v, w, eta, x, p.eps())? || !p.contains(x) {
        return Ok(false);
    }
    Ok(visibility_witness(p, v, w, x).is_some())
}

/// A point of `[v, w]` visible from `x`, if one of the witness candidates is.
pub fn visibility_witness(p: &Polygon, v: Point, w: Point, x: Point) -> Option<Point> {
    let d = w - v;
    let l2 = d.norm2();
    let proj = if l2 > 0.0 { v + d * ((x - v).dot(d) / l2).clamp(0.0, 1.0) } else { v };
    let mut cands = vec![proj, v, w];
    cands.extend((1..VISIBILITY_SAMPLES).map(|k| v.lerp(w, k as f64 / VISIBILITY_SAMPLES as f64)));
    cands.into_iter().find(|&c| p.contains_segment(c, x))
}
