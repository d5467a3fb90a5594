//! Shared inputs for the pipeline benchmarks.

use johncut::fixtures::{blob, comb, koch_variant, spiral};
use johncut::Polygon;

/// Named workloads of increasing size.
pub fn workloads() -> Vec<(&'static str, Polygon)> {
    vec![
        ("koch-2", koch_variant(2, 0.5).expect("koch fixture")),
        ("comb-4", comb(4).expect("comb fixture")),
        ("spiral-3", spiral(3).expect("spiral fixture")),
        ("blob-40", blob(40, 7).expect("blob fixture")),
    ]
}
