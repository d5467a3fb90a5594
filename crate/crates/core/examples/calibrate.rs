//! Prints per-fixture ledger slack and the smallest piece constants over the
//! corpus, the data behind `pipeline::frozen_constants` and
//! `pipeline::frozen_rho_min`.
//!
//! `cargo run --release -p johncut --example calibrate -- 0.25`

use johncut::fixtures::corpus;
use johncut::pipeline::{decompose, PipelineConfig};
use std::time::Instant;

fn main() {
    let theta: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.25);
    let cfg = PipelineConfig { estimate_john: true, ..PipelineConfig::with_theta(theta) };
    let (mut sv, mut om, mut rj) = (1.0f64, 1.0f64, 1.0f64);
    for (name, p) in corpus() {
        let t = Instant::now();
        match decompose(&p, &cfg) {
            Ok(d) => {
                let (a, b, c) = (d.min_semiconvexity(), d.min_rotundity(), d.min_john_constant().unwrap_or(0.0));
                sv = sv.min(a);
                om = om.min(b);
                rj = rj.min(c);
                println!(
                    "{name:>12} n={:>3} pieces={:>3} exc={:>2} ledger={} slack={:.4} θrot={:.4} retry={} ϑmin={a:.4} ωmin={b:.4} ρmin={c:.4} certified={} {:.2}s",
                    p.len(),
                    d.partition.pieces.len(),
                    d.partition.exceptional.len(),
                    d.ledger.pass,
                    d.ledger.slack / d.ledger.perimeter,
                    d.plan.theta_rot,
                    d.plan.retries,
                    d.all_certified(),
                    t.elapsed().as_secs_f64()
                );
            }
            Err(e) => println!("{name:>12} error: {e}"),
        }
    }
    println!("corpus minima: ϑ={sv:.4} ω={om:.4} ρ={rj:.4}");
}
