//! SVG rendering of a report, fitted to a 1000×1000 view box with a 2% margin.
//! Pieces are filled from a fixed palette keyed by piece index, cuts are red,
//! the exceptional set gray; inscribed disks and the worst John curve are
//! drawn on top.

use crate::{Certificate, Outcome, Report};
use johncut::john::{JohnCert, JohnSample};
use johncut::rotund::inscribed_disk;
use johncut::{Point, Polygon};
use std::fmt::Write;

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 0.02 * SIZE;

pub const PALETTE: [&str; 10] =
    ["#4e79a7", "#f28e2b", "#59a14f", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#8cd17d", "#86bcb6"];

struct Canvas {
    min: Point,
    scale: f64,
    offset: Point,
    body: String,
}

impl Canvas {
    fn fit<'a>(polys: impl Iterator<Item = &'a Polygon>) -> Canvas {
        let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in polys {
            let (a, b) = p.bbox();
            lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
            hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        // Centre the shorter side.
        let offset = Point::new(
            MARGIN + 0.5 * (SIZE - 2.0 * MARGIN - (hi.x - lo.x) * scale),
            MARGIN + 0.5 * (SIZE - 2.0 * MARGIN - (hi.y - lo.y) * scale),
        );
        Canvas { min: lo, scale, offset, body: String::new() }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        let x = self.offset.x + (p.x - self.min.x) * self.scale;
        let y = SIZE - (self.offset.y + (p.y - self.min.y) * self.scale);
        (x, y)
    }

    fn points(&self, pts: &[Point]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn polygon(&mut self, p: &Polygon, class: &str, fill: &str) {
        let pts = self.points(p.vertices());
        let _ = writeln!(
            self.body,
            r##"<polygon class="{class}" points="{pts}" fill="{fill}" fill-opacity="0.55" stroke="#333" stroke-width="0.8"/>"##
        );
    }

    fn polyline(&mut self, pts: &[Point], class: &str, stroke: &str, width: f64) {
        let pts = self.points(pts);
        let _ = writeln!(self.body, r#"<polyline class="{class}" points="{pts}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#);
    }

    fn circle(&mut self, c: Point, r: f64, class: &str, stroke: &str, fill: &str) {
        let (x, y) = self.map(c);
        let r = (r * self.scale).max(1.5);
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{fill}" stroke="{stroke}" stroke-width="1"/>"#
        );
    }

    fn finish(self, title: &str) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE} {SIZE}\" width=\"{SIZE}\" height=\"{SIZE}\">\n<title>{title}</title>\n<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

fn worst_sample<'a>(certs: impl Iterator<Item = &'a JohnCert>) -> Option<&'a JohnSample> {
    certs.flat_map(|c| c.samples.iter()).filter(|s| s.curve.len() > 1).min_by(|a, b| a.margin.total_cmp(&b.margin))
}

fn john_curve(c: &mut Canvas, s: Option<&JohnSample>, center: Option<Point>) {
    if let Some(s) = s {
        c.polyline(&s.curve, "john-curve", "#111", 2.0);
        c.circle(s.x, 0.0, "john-start", "#111", "#111");
    }
    if let Some(z) = center {
        c.circle(z, 0.0, "john-center", "#111", "white");
    }
}

pub fn render(report: &Report) -> String {
    match &report.outcome {
        Outcome::Polygon { decomposition: d } => {
            let part = &d.partition;
            let mut c = Canvas::fit(part.pieces.iter().chain(&part.exceptional));
            for (i, q) in part.pieces.iter().enumerate() {
                c.polygon(q, "piece", PALETTE[i % PALETTE.len()]);
            }
            for q in &part.exceptional {
                c.polygon(q, "exceptional", "#999");
            }
            for cut in &part.cuts {
                c.polyline(&[cut.a, cut.b], "cut", "#d62728", 1.6);
            }
            for r in &d.pieces {
                c.circle(r.rotund.center, r.rotund.radius, "disk", "#555", "none");
            }
            let worst = worst_sample(d.pieces.iter().map(|r| &r.john));
            let center = worst.and_then(|w| d.pieces.iter().find(|r| r.john.samples.iter().any(|s| s == w))).map(|r| r.john.center);
            john_curve(&mut c, worst, center);
            c.finish(&format!("{} pieces, ledger {}", part.pieces.len(), if d.ledger.pass { "pass" } else { "fail" }))
        }
        Outcome::Domain { decomposition: d } => {
            let mut c = Canvas::fit(d.pieces.iter().map(|p| &p.polygon).chain(&d.exceptional));
            for (i, p) in d.pieces.iter().enumerate() {
                c.polygon(&p.polygon, "piece", PALETTE[i % PALETTE.len()]);
            }
            for q in &d.exceptional {
                c.polygon(q, "exceptional", "#999");
            }
            for cut in &d.interior.partition.cuts {
                c.polyline(&[cut.a, cut.b], "cut", "#d62728", 1.6);
            }
            for p in &d.pieces {
                let (z, r) = inscribed_disk(&p.polygon);
                c.circle(z, r, "disk", "#555", "none");
            }
            let worst = worst_sample(d.pieces.iter().map(|p| &p.john));
            let center = worst.and_then(|w| d.pieces.iter().find(|p| p.john.samples.iter().any(|s| s == w))).map(|p| p.john.center);
            john_curve(&mut c, worst, center);
            c.finish(&format!("{} pieces, ledger {}", d.pieces.len(), if d.ledger.pass { "pass" } else { "fail" }))
        }
        Outcome::Certificate { polygon, certificate, .. } => {
            let mut c = Canvas::fit(std::iter::once(polygon));
            c.polygon(polygon, "piece", PALETTE[0]);
            match certificate {
                Certificate::Semiconvex(s) => {
                    if let Some(ce) = &s.counterexample {
                        c.polyline(&[ce.chord.v, ce.chord.w], "cut", "#d62728", 2.0);
                    }
                }
                Certificate::Rotund(r) => c.circle(r.center, r.radius, "disk", "#555", "none"),
                Certificate::John(j) => john_curve(&mut c, worst_sample(std::iter::once(j)), Some(j.center)),
            }
            c.finish(if certificate.passed() { "pass" } else { "fail" })
        }
    }
}
