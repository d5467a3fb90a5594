//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails. Geometric oracles (visibility, overlap,
//! widths, calipers) are implemented here from scratch rather than borrowed
//! from the library under test.

use johncut::fixtures::{corpus, koch_multiplier, koch_variant, notched_rect, random_convex};
use johncut::geodesic::{geodesic_distance, intrinsic_diameter};
use johncut::geom::{convex_hull, euclidean_diameter, triangulate};
use johncut::john::{certify_john_with, john_constant, john_converse_check, john_threshold, sample_points, JohnConfig};
use johncut::pipeline::{decompose, frozen_constants, frozen_rho_min, Decomposition, PipelineConfig};
use johncut::rotund::{certify_rotund, convex_ball_bound, slab_partition_convex};
use johncut::semiconvex::{certify_semiconvex, SemiconvexParams};
use johncut::smooth::{circle, decompose_domain, rounded_rect, smooth_corpus, DomainConfig, DomainDecomposition};
use johncut::{Point, Polygon};
use johncut_cli::{run_decompose, Input, RunConfig};
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_4;
use std::time::{Duration, Instant};

const LEDGER_ABS: f64 = 1e-9;
const IDENTITY_REL: f64 = 1e-9;
const AREA_REL: f64 = 1e-6;
const OVERLAP_REL: f64 = 1e-9;
const GEODESIC_REL: f64 = 1e-6;
const CALIPERS_REL: f64 = 1e-9;
const KOCH_REL: f64 = 1e-9;
const CARROT_REL: f64 = 1e-7;
const RUNTIME_LIMIT: Duration = Duration::from_secs(10);
const EPSILON_SHARE: f64 = 0.01;

/// Rotundness floor for convex slabs: an uncut slab has aspect below `7/θ`
/// and contains a disk of a quarter of its width.
fn slab_omega(theta: f64) -> f64 {
    theta / (4.0 * (7.0 + theta))
}

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// Independent oracles
// ---------------------------------------------------------------------------

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn scale_of(p: &Polygon) -> f64 {
    let (lo, hi) = p.bbox();
    (hi.x - lo.x).hypot(hi.y - lo.y)
}

fn on_segment(x: Point, a: Point, b: Point, tol: f64) -> bool {
    let ab = b - a;
    let l2 = ab.dot(ab);
    let t = if l2 > 0.0 { ((x - a).dot(ab) / l2).clamp(0.0, 1.0) } else { 0.0 };
    x.dist(a + ab * t) <= tol
}

/// Point in closed polygon by crossing parity, boundary within `tol` counted inside.
fn inside_closed(v: &[Point], x: Point, tol: f64) -> bool {
    let n = v.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        if on_segment(x, a, b, tol) {
            return true;
        }
        if (a.y > x.y) != (b.y > x.y) {
            let xi = a.x + (x.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if x.x < xi {
                inside = !inside;
            }
        }
    }
    inside
}

/// Segment `ab` lies in the closed polygon: no proper crossing with an edge
/// and every sub-segment between boundary contacts has its midpoint inside.
fn visible(v: &[Point], a: Point, b: Point, tol: f64) -> bool {
    let n = v.len();
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return inside_closed(v, a, tol);
    }
    let mut ts = vec![0.0, 1.0];
    for i in 0..n {
        let (c, d) = (v[i], v[(i + 1) % n]);
        let (d1, d2) = (cross(a, b, c), cross(a, b, d));
        let (d3, d4) = (cross(c, d, a), cross(c, d, b));
        let lab = len2.sqrt();
        let lcd = c.dist(d);
        if d1.abs() > tol * lab && d2.abs() > tol * lab && d3.abs() > tol * lcd && d4.abs() > tol * lcd {
            if (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) {
                return false;
            }
        }
        for q in [c, d] {
            if on_segment(q, a, b, tol) {
                ts.push(((q - a).dot(ab) / len2).clamp(0.0, 1.0));
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.windows(2).all(|w| w[1] - w[0] <= 1e-15 || inside_closed(v, a + ab * (0.5 * (w[0] + w[1])), tol))
}

#[derive(PartialEq)]
struct Entry(f64, usize);
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Entry {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        o.0.total_cmp(&self.0)
    }
}

/// Dijkstra on the visibility graph of the vertices, `k` extra points per
/// edge and the two query points.
fn dense_geodesic(p: &Polygon, x: Point, y: Point, k: usize) -> f64 {
    let v = p.vertices();
    let tol = 1e-10 * scale_of(p);
    let mut nodes = vec![x, y];
    for i in 0..v.len() {
        let (a, b) = (v[i], v[(i + 1) % v.len()]);
        for j in 0..=k {
            nodes.push(a.lerp(b, j as f64 / (k + 1) as f64));
        }
    }
    let m = nodes.len();
    let mut dist = vec![f64::INFINITY; m];
    let mut done = vec![false; m];
    dist[0] = 0.0;
    let mut heap = BinaryHeap::from([Entry(0.0, 0)]);
    while let Some(Entry(d, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == 1 {
            return d;
        }
        for w in 0..m {
            if done[w] {
                continue;
            }
            let nd = d + nodes[u].dist(nodes[w]);
            if nd < dist[w] && visible(v, nodes[u], nodes[w], tol) {
                dist[w] = nd;
                heap.push(Entry(nd, w));
            }
        }
    }
    f64::INFINITY
}

/// Width of a convex ring across the normal of each edge; the minimum is the
/// minimum width.
fn brute_min_width(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            let l = a.dist(b);
            v.iter().map(|&q| cross(a, b, q).abs() / l).fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

fn brute_diameter(v: &[Point]) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            best = best.max(v[i].dist(v[j]));
        }
    }
    best
}

fn ring_area(v: &[Point]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i].x * v[(i + 1) % n].y - v[(i + 1) % n].x * v[i].y).sum::<f64>()
}

/// Sutherland–Hodgman: clip `subject` against the counter-clockwise convex `clip`.
fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut out = subject.to_vec();
    for i in 0..clip.len() {
        let (a, b) = (clip[i], clip[(i + 1) % clip.len()]);
        let input = std::mem::take(&mut out);
        if input.is_empty() {
            break;
        }
        for j in 0..input.len() {
            let (p, q) = (input[j], input[(j + 1) % input.len()]);
            let (sp, sq) = (cross(a, b, p), cross(a, b, q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                out.push(p + (q - p) * (sp / (sp - sq)));
            }
        }
    }
    out
}

fn triangles(p: &Polygon) -> Vec<[Point; 3]> {
    let v = p.vertices();
    triangulate(p)
        .into_iter()
        .map(|[a, b, c]| {
            let t = [v[a], v[b], v[c]];
            if cross(t[0], t[1], t[2]) < 0.0 {
                [t[0], t[2], t[1]]
            } else {
                t
            }
        })
        .collect()
}

/// Interior overlap area of two polygons through their triangulations.
fn overlap_area(a: &Polygon, b: &Polygon) -> f64 {
    let ((a0, a1), (b0, b1)) = (a.bbox(), b.bbox());
    if a0.x > b1.x || b0.x > a1.x || a0.y > b1.y || b0.y > a1.y {
        return 0.0;
    }
    let (ta, tb) = (triangles(a), triangles(b));
    let mut total = 0.0;
    for s in &ta {
        for t in &tb {
            let c = clip_convex(s, t);
            if c.len() >= 3 {
                total += ring_area(&c).abs();
            }
        }
    }
    total
}

// ---------------------------------------------------------------------------
// Shared runs
// ---------------------------------------------------------------------------

struct Run {
    name: String,
    polygon: Polygon,
    decomposition: Decomposition,
    elapsed: Duration,
}

fn run_corpus(theta: f64) -> Result<Vec<Run>, String> {
    corpus()
        .into_iter()
        .map(|(name, polygon)| {
            let t = Instant::now();
            let decomposition = decompose(&polygon, &PipelineConfig::with_theta(theta)).map_err(|e| format!("{name}: {e}"))?;
            Ok(Run { name, polygon, decomposition, elapsed: t.elapsed() })
        })
        .collect()
}

struct Ctx {
    runs: Vec<(f64, Vec<Run>)>,
    /// Estimated John constant of every piece at θ = 0.25, per fixture.
    john: Vec<Vec<f64>>,
}

impl Ctx {
    fn at(&self, theta: f64) -> &[Run] {
        &self.runs.iter().find(|(t, _)| *t == theta).expect("corpus run").1
    }
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

fn ledger_bound(ctx: &Ctx) -> Verdict {
    let mut worst_slack = f64::INFINITY;
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for (theta, runs) in &ctx.runs {
        for r in runs {
            let h = r.polygon.perimeter();
            let part = &r.decomposition.partition;
            let sum: f64 = part.pieces.iter().map(Polygon::perimeter).sum();
            let exc: f64 = part.exceptional.iter().map(Polygon::perimeter).sum();
            ensure(sum <= (1.0 + theta) * h + LEDGER_ABS * h, || format!("{} θ={theta}: Σ={sum} > {}", r.name, (1.0 + theta) * h))?;
            ensure(exc <= EPSILON_SHARE * h, || format!("{} θ={theta}: exceptional {exc} > ε", r.name))?;
            if r.polygon.len() <= 200 {
                ensure(r.elapsed < RUNTIME_LIMIT, || format!("{} θ={theta}: {:?}", r.name, r.elapsed))?;
                slowest = slowest.max(r.elapsed);
            }
            worst_slack = worst_slack.min(((1.0 + theta) * h - sum) / h);
            count += 1;
        }
    }
    ensure(count >= 40, || format!("only {count} runs"))?;
    Ok(format!("{count} runs, min relative slack {worst_slack:.4}, slowest {:.2}s", slowest.as_secs_f64()))
}

fn ledger_identity(ctx: &Ctx) -> Verdict {
    let mut worst: f64 = 0.0;
    for (theta, runs) in &ctx.runs {
        for r in runs {
            let part = &r.decomposition.partition;
            let h = r.polygon.perimeter();
            let lhs: f64 = part.pieces.iter().chain(&part.exceptional).map(Polygon::perimeter).sum();
            let cuts: f64 = part.cuts.iter().map(|c| c.a.dist(c.b)).sum();
            let rel = (lhs - h - 2.0 * cuts).abs() / h;
            ensure(rel <= IDENTITY_REL, || format!("{} θ={theta}: residual {rel:e}", r.name))?;
            worst = worst.max(rel);
        }
    }
    Ok(format!("max relative residual {worst:.2e}"))
}

fn tiling(ctx: &Ctx) -> Verdict {
    let l = johncut::fixtures::l_shape().map_err(|e| e.to_string())?;
    let shifted = l.translated(Point::new(0.5, 0.0));
    // Oracle self-check: the L-shape and its copy shifted by half a unit overlap in 2.
    ensure((overlap_area(&l, &l) - l.area()).abs() < 1e-12, || "overlap oracle: self".into())?;
    ensure((overlap_area(&l, &shifted) - 2.0).abs() < 1e-12, || format!("overlap oracle: shift {}", overlap_area(&l, &shifted)))?;
    let (mut worst_area, mut worst_overlap): (f64, f64) = (0.0, 0.0);
    for (theta, runs) in &ctx.runs {
        for r in runs {
            let part = &r.decomposition.partition;
            let all: Vec<&Polygon> = part.pieces.iter().chain(&part.exceptional).collect();
            let a = r.polygon.area();
            for q in &all {
                let tri: f64 = triangles(q).iter().map(|t| ring_area(t)).sum();
                ensure((tri - q.area()).abs() <= 1e-9 * q.area(), || format!("{}: triangulation lost area", r.name))?;
            }
            let sum: f64 = all.iter().map(|q| q.area()).sum();
            let rel = (sum - a).abs() / a;
            ensure(rel <= AREA_REL, || format!("{} θ={theta}: area residual {rel:e}", r.name))?;
            worst_area = worst_area.max(rel);
            for i in 0..all.len() {
                for j in i + 1..all.len() {
                    let o = overlap_area(all[i], all[j]) / a;
                    ensure(o < OVERLAP_REL, || format!("{} θ={theta}: pieces {i},{j} overlap {o:e}", r.name))?;
                    worst_overlap = worst_overlap.max(o);
                }
            }
        }
    }
    Ok(format!("max area residual {worst_area:.2e}, max overlap {worst_overlap:.2e}"))
}

fn uniform_constants(ctx: &Ctx) -> Verdict {
    let theta = 0.25;
    let (vt, om) = frozen_constants(theta);
    let rho_min = frozen_rho_min(theta);
    let samples = SemiconvexParams::DEFAULT_SAMPLES;
    let mut min_rho: f64 = 1.0;
    let mut pieces = 0;
    for (r, rhos) in ctx.at(theta).iter().zip(&ctx.john) {
        for (q, &rho) in r.decomposition.partition.pieces.iter().zip(rhos) {
            ensure(certify_semiconvex(q, vt, samples).passed(), || format!("{}: piece fails ϑ={vt}", r.name))?;
            ensure(certify_rotund(q, om).passed(), || format!("{}: piece fails ω={om}", r.name))?;
            ensure(rho >= rho_min, || format!("{}: John estimate {rho} < {rho_min}", r.name))?;
            min_rho = min_rho.min(rho);
            pieces += 1;
        }
    }
    Ok(format!("{pieces} pieces at ϑ={vt}, ω={om}; John estimates ≥ {min_rho:.3} (floor {rho_min})"))
}

fn john_certification(ctx: &Ctx) -> Verdict {
    let mut worst = f64::INFINITY;
    let mut pieces = 0;
    for (theta, runs) in &ctx.runs {
        let (vt, _) = frozen_constants(*theta);
        let rho = vt * vt * vt;
        let cfg = JohnConfig { n_points: 200, ..JohnConfig::default() };
        for r in runs {
            for q in &r.decomposition.partition.pieces {
                let c = certify_john_with(q, rho, &cfg);
                let diam = euclidean_diameter(q.vertices());
                ensure(c.samples.len() == 200, || format!("{}: {} samples", r.name, c.samples.len()))?;
                ensure(c.passed() && c.worst_margin >= -CARROT_REL * diam, || {
                    format!("{} θ={theta}: margin {:e}", r.name, c.worst_margin)
                })?;
                worst = worst.min(c.worst_margin / diam);
                pieces += 1;
            }
        }
    }
    Ok(format!("{pieces} pieces, worst margin/diam {worst:.3e}"))
}

fn converse(ctx: &Ctx) -> Verdict {
    let samples = SemiconvexParams::DEFAULT_SAMPLES;
    let mut checked = 0;
    for (r, rhos) in ctx.at(0.25).iter().zip(&ctx.john) {
        for (q, &rho) in r.decomposition.partition.pieces.iter().zip(rhos) {
            let (s, w) = john_converse_check(q, rho, samples);
            ensure(s.passed() && w.passed(), || format!("{}: converse fails at ρ={rho}", r.name))?;
            checked += 1;
        }
    }
    let cfg = JohnConfig::default();
    let gaps = [0.1, 0.01, 0.004];
    let notches: Vec<Polygon> = gaps.iter().map(|&h| notched_rect(h).expect("notch")).collect();
    let thresholds: Vec<f64> = notches.iter().map(|p| john_threshold(p, &cfg)).collect();
    let constants: Vec<f64> = notches.iter().map(|p| john_constant(p, &cfg)).collect();
    ensure(thresholds.windows(2).all(|w| w[1] < w[0]), || format!("thresholds not decreasing: {thresholds:?}"))?;
    ensure(constants.windows(2).all(|w| w[1] <= w[0]), || format!("constants not monotone: {constants:?}"))?;
    let c = certify_semiconvex(&notches[2], 0.025, samples);
    ensure(!c.passed() && c.counterexample.is_some(), || "notch 0.004 passes ϑ=0.025".into())?;
    Ok(format!("{checked} pieces; notch thresholds {:.4} > {:.4} > {:.4}; h=0.004 fails ϑ=0.025", thresholds[0], thresholds[1], thresholds[2]))
}

fn geodesic_oracle(_: &Ctx) -> Verdict {
    let all = corpus();
    let pick = ["koch-2", "comb-3", "comb-5", "notch-0.1", "notch-0.004", "spiral-3", "spiral-4", "l-shape", "blob-64"];
    let mut fixtures: Vec<(String, Polygon)> = all.iter().filter(|(n, _)| pick.contains(&n.as_str())).cloned().collect();
    fixtures.push(("random-convex".into(), random_convex(12, 7, 2.0).map_err(|e| e.to_string())?));
    ensure(fixtures.len() == 10, || format!("{} fixtures", fixtures.len()))?;
    // Oracle self-check: around the reflex corner of the L-shape.
    let l = johncut::fixtures::l_shape().map_err(|e| e.to_string())?;
    let around = dense_geodesic(&l, Point::new(1.8, 0.9), Point::new(0.9, 1.8), 3);
    ensure((around - 2.0 * 0.65f64.sqrt()).abs() < 1e-12, || format!("geodesic oracle: {around}"))?;
    let mut worst: f64 = 0.0;
    for (k, (name, p)) in fixtures.iter().enumerate() {
        let pts = sample_points(p, 100, 1000 + k as u64);
        for pair in pts.chunks(2) {
            let (x, y) = (pair[0], pair[1]);
            let got = geodesic_distance(p, x, y).map_err(|e| format!("{name}: {e}"))?;
            let want = dense_geodesic(p, x, y, 3);
            let rel = (got - want).abs() / want.max(1e-300);
            ensure(rel <= GEODESIC_REL, || format!("{name}: {got} vs oracle {want}"))?;
            worst = worst.max(rel);
        }
    }
    for (name, p) in &all {
        let (d, _) = intrinsic_diameter(p);
        ensure(d <= 0.5 * p.perimeter() * (1.0 + 1e-12), || format!("{name}: d(P)={d} > H/2"))?;
    }
    let mut worst_cal: f64 = 0.0;
    for seed in 0..20 {
        let p = random_convex(5 + seed as usize, 300 + seed, 1.0 + seed as f64 / 4.0).map_err(|e| e.to_string())?;
        let (d, _) = intrinsic_diameter(&p);
        let brute = brute_diameter(p.vertices());
        let cal = euclidean_diameter(p.vertices());
        let rel = ((d - brute).abs() / brute).max((cal - brute).abs() / brute);
        ensure(rel <= CALIPERS_REL, || format!("convex {seed}: d={d} calipers={cal} brute={brute}"))?;
        worst_cal = worst_cal.max(rel);
    }
    Ok(format!("500 pairs max rel {worst:.1e}; d ≤ H/2 on {} fixtures; convex d vs calipers {worst_cal:.1e}", all.len()))
}

fn convex_ball(_: &Ctx) -> Verdict {
    let mut worst = f64::INFINITY;
    for seed in 0..100u64 {
        let n = 3 + (seed as usize * 7) % 30;
        let aspect = 1.0 + (seed % 10) as f64 * 2.0;
        let p = random_convex(n, 7000 + seed, aspect).map_err(|e| e.to_string())?;
        let (z, r) = convex_ball_bound(&p).map_err(|e| format!("seed {seed}: {e}"))?;
        let v = p.vertices();
        let w = brute_min_width(v);
        ensure(r >= 0.25 * w * (1.0 - 1e-12), || format!("seed {seed}: r={r} < w/4={}", 0.25 * w))?;
        let tol = 1e-9 * scale_of(&p);
        let clear = (0..v.len()).map(|i| cross(v[i], v[(i + 1) % v.len()], z) / v[i].dist(v[(i + 1) % v.len()])).fold(f64::INFINITY, f64::min);
        ensure(clear >= r - tol, || format!("seed {seed}: disk leaves the polygon"))?;
        worst = worst.min(r / w);
    }
    Ok(format!("100 polygons, min radius/width {worst:.4}"))
}

/// Convex polygon with angles at least π/4: a random cap pair spliced around
/// a rectangle of length `len`.
fn stadium(seed: u64, len: f64) -> Result<Polygon, String> {
    let base = random_convex(24, 500 + seed, 1.0).map_err(|e| e.to_string())?;
    let pts: Vec<Point> = base.vertices().iter().map(|&v| if v.x > 0.0 { Point::new(v.x + len, v.y) } else { v }).collect();
    Polygon::new(convex_hull(&pts)).map_err(|e| e.to_string())
}

fn slabs(_: &Ctx) -> Verdict {
    let mut worst_cut: f64 = 0.0;
    let mut worst_omega = f64::INFINITY;
    let mut cut_runs = 0;
    for theta in [0.25, 0.5] {
        let om = slab_omega(theta);
        for k in 0..20u64 {
            let len = [0.0, 3.0, 8.0, 15.0, 30.0, 60.0, 120.0][k as usize % 7];
            let p = stadium(k, len)?;
            ensure(p.is_convex() && p.min_interior_angle() >= FRAC_PI_4, || format!("fixture {k} invalid"))?;
            let s = slab_partition_convex(&p, theta).map_err(|e| format!("fixture {k}: {e}"))?;
            let cuts: f64 = s.partition.cuts.iter().map(|c| c.a.dist(c.b)).sum();
            let h = p.perimeter();
            ensure(cuts <= theta * h, || format!("fixture {k} θ={theta}: cuts {cuts} > θH {}", theta * h))?;
            for q in &s.partition.pieces {
                ensure(certify_rotund(q, om).passed(), || format!("fixture {k} θ={theta}: slab below ω={om:.4}"))?;
            }
            worst_omega = worst_omega.min(s.omega);
            worst_cut = worst_cut.max(cuts / (theta * h));
            cut_runs += usize::from(!s.early_exit);
        }
    }
    Ok(format!("40 runs ({cut_runs} cut), max cuts/(θH) {worst_cut:.3}, min slab ω {worst_omega:.4} (floor θ/(28+4θ))"))
}

fn koch(_: &Ctx) -> Verdict {
    let eta = 0.5;
    let mut prev = koch_variant(0, eta).map_err(|e| e.to_string())?.perimeter();
    let first = koch_variant(1, eta).map_err(|e| e.to_string())?.perimeter();
    let mut worst: f64 = 0.0;
    for i in 1..=8 {
        let h = koch_variant(i, eta).map_err(|e| e.to_string())?.perimeter();
        let want = 2.0 / 3.0 + 1.0 / (3.0 * (std::f64::consts::FRAC_PI_3 * eta.powi(i as i32 - 1)).cos());
        let rel = (h / prev - want).abs() / want;
        ensure(rel <= KOCH_REL && (koch_multiplier(i, eta) - want).abs() <= KOCH_REL, || format!("generation {i}: ratio {}", h / prev))?;
        ensure(h < 1.5 * first, || format!("generation {i}: perimeter {h} ≥ 1.5 × {first}"))?;
        worst = worst.max(rel);
        prev = h;
    }
    Ok(format!("8 generations, max rel {worst:.1e}, H(S_8)/H(S_1) = {:.4}", prev / first))
}

fn domain_ok(name: &str, d: &DomainDecomposition, theta: f64) -> Result<(), String> {
    ensure(d.ledger.piece_perimeter_sum <= (1.0 + theta) * d.ledger.perimeter * (1.0 + LEDGER_ABS), || {
        format!("{name}: Σ={} > {}", d.ledger.piece_perimeter_sum, (1.0 + theta) * d.ledger.perimeter)
    })?;
    ensure(d.all_certified(), || format!("{name}: a piece fails John at ρ={}", d.rho))?;
    ensure(d.pieces.iter().all(|p| p.john.rho == d.rho), || format!("{name}: mixed ρ"))?;
    ensure(d.ledger.area_residual <= 1e-5, || format!("{name}: area residual {:e}", d.ledger.area_residual))?;
    if let Some(f) = &d.frame {
        let c = &f.checks;
        ensure(c.passed(), || format!("{name}: frame checks {c:?}"))?;
    }
    Ok(())
}

fn smooth_pipeline(_: &Ctx) -> Verdict {
    let theta = 0.5;
    let cfg = DomainConfig::with_theta(theta);
    let mut rhos = vec![];
    let mut lines = vec![];
    for (name, input) in [("disk", circle(1.0, 512)), ("rounded-square", rounded_rect(1.0, 1.0, 0.2, 0.01))] {
        let d = decompose_domain(&input, &cfg).map_err(|e| format!("{name}: {e}"))?;
        domain_ok(name, &d, theta)?;
        rhos.push(d.rho);
        lines.push(format!("{name} {} pieces", d.pieces.len()));
    }
    for (name, input) in smooth_corpus() {
        let d = decompose_domain(&input, &cfg).map_err(|e| format!("{name}: {e}"))?;
        domain_ok(&name, &d, theta)?;
        rhos.push(d.rho);
    }
    ensure(rhos.windows(2).all(|w| w[0] == w[1]), || format!("ρ differs across inputs: {rhos:?}"))?;
    Ok(format!("{}; 10-fixture corpus certified at common ρ = {:.3e}", lines.join(", "), rhos[0]))
}

fn determinism(_: &Ctx) -> Verdict {
    let cfg = RunConfig::default();
    let inputs = [
        ("koch-2", Input::Polygon(koch_variant(2, 0.5).map_err(|e| e.to_string())?)),
        ("spiral-3", Input::Polygon(johncut::fixtures::spiral(3).map_err(|e| e.to_string())?)),
        ("disk", Input::Domain(circle(1.0, 512))),
    ];
    for (name, input) in &inputs {
        let a = run_decompose(input, &cfg).and_then(|r| r.to_json()).map_err(|e| format!("{name}: {e}"))?;
        let b = run_decompose(input, &cfg).and_then(|r| r.to_json()).map_err(|e| format!("{name}: {e}"))?;
        ensure(a == b, || format!("{name}: reports differ"))?;
    }
    Ok(format!("{} inputs, byte-identical reports", inputs.len()))
}

fn main() {
    let started = Instant::now();
    let setup = (|| -> Result<Ctx, String> {
        let runs = vec![(0.25, run_corpus(0.25)?), (0.5, run_corpus(0.5)?)];
        let cfg = JohnConfig::default();
        let john = runs[0].1.iter().map(|r| r.decomposition.partition.pieces.iter().map(|q| john_constant(q, &cfg)).collect()).collect();
        Ok(Ctx { runs, john })
    })();
    let criteria: [(&str, fn(&Ctx) -> Verdict); 12] = [
        ("ledger bound", ledger_bound),
        ("ledger identity", ledger_identity),
        ("tiling", tiling),
        ("uniform constants", uniform_constants),
        ("John certification", john_certification),
        ("converse and notch family", converse),
        ("geodesic oracle", geodesic_oracle),
        ("convex ball bound", convex_ball),
        ("slab partition", slabs),
        ("Koch generator", koch),
        ("smooth pipeline", smooth_pipeline),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = match &setup {
            Ok(ctx) => check(ctx),
            Err(e) => Err(format!("setup: {e}")),
        };
        let secs = t.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass in {:.1}s", criteria.len() - failed, criteria.len(), started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
