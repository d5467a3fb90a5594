//! Ear-clipping triangulation and area-uniform sampling.

use super::point::Point;
use super::polygon::Polygon;
use super::predicates::orient2d;
use rand::Rng;

/// Triangulates a simple counter-clockwise polygon; returns vertex index triples.
pub fn triangulate(p: &Polygon) -> Vec<[usize; 3]> {
    let v = p.vertices();
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let mut tris = Vec::with_capacity(v.len().saturating_sub(2));
    let mut guard = 0;
    while idx.len() > 3 && guard < 4 * v.len() * v.len() {
        guard += 1;
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (i0, i1, i2) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (v[i0], v[i1], v[i2]);
            if orient2d(a, b, c) <= 0.0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                j != i0 && j != i1 && j != i2 && {
                    let q = v[j];
                    orient2d(a, b, q) >= 0.0 && orient2d(b, c, q) >= 0.0 && orient2d(c, a, q) >= 0.0
                }
            });
            if !blocked {
                tris.push([i0, i1, i2]);
                idx.remove(k);
                clipped = true;
                break;
            }
        }
        if !clipped {
            // Only collinear remnants are left; drop the flattest vertex.
            let k = (0..m)
                .min_by(|&a, &b| {
                    let f = |k: usize| orient2d(v[idx[(k + m - 1) % m]], v[idx[k]], v[idx[(k + 1) % m]]).abs();
                    f(a).total_cmp(&f(b))
                })
                .unwrap();
            idx.remove(k);
        }
    }
    if idx.len() == 3 {
        tris.push([idx[0], idx[1], idx[2]]);
    }
    tris
}

/// Samples points uniformly with respect to area.
pub struct AreaSampler {
    tris: Vec<[Point; 3]>,
    cum: Vec<f64>,
}

impl AreaSampler {
    pub fn new(p: &Polygon) -> Self {
        let v = p.vertices();
        let tris: Vec<[Point; 3]> = triangulate(p).into_iter().map(|[a, b, c]| [v[a], v[b], v[c]]).collect();
        let mut cum = Vec::with_capacity(tris.len());
        let mut s = 0.0;
        for t in &tris {
            s += 0.5 * (t[1] - t[0]).cross(t[2] - t[0]).abs();
            cum.push(s);
        }
        AreaSampler { tris, cum }
    }

    pub fn total_area(&self) -> f64 {
        self.cum.last().copied().unwrap_or(0.0)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Point {
        let r = rng.gen::<f64>() * self.total_area();
        let k = self.cum.partition_point(|&c| c < r).min(self.tris.len() - 1);
        let [a, b, c] = self.tris[k];
        let (mut u, mut w) = (rng.gen::<f64>(), rng.gen::<f64>());
        if u + w > 1.0 {
            u = 1.0 - u;
            w = 1.0 - w;
        }
        a + (b - a) * u + (c - a) * w
    }
}
