//! End-to-end decomposition of a polygon into semiconvex, rotund, John pieces.
//!
//! The semiconvex stage runs at `θ/5`. The rotund stage then gets a parameter
//! sized to the ledger slack the first stage left over, halved on retry if the
//! ledger bound is missed. Every output piece is certified against constants
//! that depend on `θ` only.

use crate::error::{Error, Result};
use crate::geom::Polygon;
use crate::john::{certify_john_with, john_constant, JohnCert, JohnConfig};
use crate::partition::Partition;
use crate::rotund::{certify_rotund, decompose_rotund, RotundCert};
use crate::semiconvex::{
    certify_semiconvex, decompose_semiconvex, semiconvexity_ratio, SemiconvexCert, SemiconvexParams,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Cap on the measured semiconvexity ratio in piece reports. Larger caps
/// weaken the branch-and-bound pruning considerably.
pub const REPORT_RATIO_CAP: f64 = 0.25;

/// Rotund-stage retries after a missed ledger bound.
const LEDGER_RETRIES: usize = 4;

/// Piece constants `(ϑ_out, ω_out)` for a given `θ`. Calibrated on the fixture
/// corpus at `θ ∈ {0.25, 0.5}` (worst measured ratios 0.0295/0.0080 and
/// 0.0623/0.0176, both on spirals) and frozen. `ω_out` also stays below the
/// rotundity of an uncut convex slab at the nominal rotund parameter `θ/6`,
/// whose aspect ratio can reach `42/θ`.
pub fn frozen_constants(theta: f64) -> (f64, f64) {
    (0.1 * theta, 0.01 * theta)
}

/// Regression floor for the estimated John constant of every pipeline piece.
/// Corpus minima were 0.008 at `θ = 0.25` and 0.011 at `θ = 0.5`.
pub fn frozen_rho_min(theta: f64) -> f64 {
    0.016 * theta
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub theta: f64,
    pub eta: f64,
    /// Exceptional-set budget; defaults to `0.01 · H¹(∂P)`.
    pub epsilon: Option<f64>,
    pub chord_samples: usize,
    pub john: JohnConfig,
    pub vartheta_out: Option<f64>,
    pub omega_out: Option<f64>,
    /// John constant to certify; defaults to `ϑ_out³`.
    pub rho: Option<f64>,
    pub certify: bool,
    pub estimate_john: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            theta: 0.25,
            eta: SemiconvexParams::DEFAULT_ETA,
            epsilon: None,
            chord_samples: SemiconvexParams::DEFAULT_SAMPLES,
            john: JohnConfig::default(),
            vartheta_out: None,
            omega_out: None,
            rho: None,
            certify: true,
            estimate_john: false,
        }
    }
}

impl PipelineConfig {
    pub fn with_theta(theta: f64) -> Self {
        PipelineConfig { theta, ..Self::default() }
    }

    pub fn constants(&self) -> (f64, f64, f64) {
        let (v, o) = frozen_constants(self.theta);
        let v = self.vartheta_out.unwrap_or(v);
        (v, self.omega_out.unwrap_or(o), self.rho.unwrap_or(v * v * v))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("theta", self.theta), ("eta", self.eta)] {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} = {x} outside (0, 1)")));
            }
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0) {
                return Err(Error::InvalidParameter(format!("epsilon = {e} must be positive")));
            }
        }
        Ok(())
    }
}

/// Boundary-length accounting of a partition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub perimeter: f64,
    pub piece_perimeter_sum: f64,
    pub exceptional_perimeter: f64,
    pub cut_total: f64,
    pub bound: f64,
    pub slack: f64,
    pub pass: bool,
    pub identity_residual: f64,
    pub epsilon: f64,
    pub exceptional_ok: bool,
}

impl Ledger {
    pub fn of(part: &Partition, theta: f64, epsilon: f64) -> Self {
        let (pass, slack) = part.ledger_check(theta);
        let exceptional_perimeter = part.exceptional_perimeter();
        Ledger {
            perimeter: part.source_perimeter,
            piece_perimeter_sum: part.piece_perimeter_sum(),
            exceptional_perimeter,
            cut_total: part.cut_total(),
            bound: (1.0 + theta) * part.source_perimeter,
            slack,
            pass,
            identity_residual: part.identity_residual(),
            epsilon,
            exceptional_ok: exceptional_perimeter <= epsilon * (1.0 + 1e-9),
        }
    }
}

/// Parameters the stages actually ran with.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StagePlan {
    pub theta_semi: f64,
    pub theta_rot: f64,
    pub semiconvex_pieces: usize,
    pub retries: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PieceReport {
    pub index: usize,
    pub perimeter: f64,
    pub area: f64,
    pub semiconvex: SemiconvexCert,
    pub rotund: RotundCert,
    pub john: JohnCert,
    /// Worst chord ratio, capped at [`REPORT_RATIO_CAP`].
    pub semiconvexity: f64,
    pub rotundity: f64,
    pub john_constant: Option<f64>,
}

impl PieceReport {
    pub fn passed(&self) -> bool {
        self.semiconvex.passed() && self.rotund.passed() && self.john.passed()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Decomposition {
    pub theta: f64,
    pub eta: f64,
    pub vartheta_out: f64,
    pub omega_out: f64,
    pub rho: f64,
    pub plan: StagePlan,
    pub partition: Partition,
    pub ledger: Ledger,
    pub pieces: Vec<PieceReport>,
}

impl Decomposition {
    pub fn all_certified(&self) -> bool {
        self.pieces.iter().all(PieceReport::passed)
    }

    pub fn min_semiconvexity(&self) -> f64 {
        self.pieces.iter().map(|p| p.semiconvexity).fold(REPORT_RATIO_CAP, f64::min)
    }

    pub fn min_rotundity(&self) -> f64 {
        self.pieces.iter().map(|p| p.rotundity).fold(1.0, f64::min)
    }

    pub fn min_john_constant(&self) -> Option<f64> {
        self.pieces.iter().map(|p| p.john_constant).try_fold(1.0f64, |m, r| r.map(|r| m.min(r)))
    }
}

/// Semiconvex stage followed by the rotund stage, without certificates.
pub fn partition_polygon(p: &Polygon, cfg: &PipelineConfig) -> Result<(Partition, StagePlan)> {
    cfg.validate()?;
    let theta = cfg.theta;
    let h = p.perimeter();
    let epsilon = cfg.epsilon.unwrap_or(0.01 * h);
    let params = SemiconvexParams::new(theta / 5.0, cfg.eta)?.with_samples(cfg.chord_samples);
    let semi = decompose_semiconvex(p, &params)?;
    let per_semi = semi.partition.piece_perimeter_sum();
    let slack = (1.0 + theta) * h - per_semi;
    let mut theta_rot = (slack / (6.0 * per_semi)).clamp(theta / 24.0, theta);
    let m = semi.partition.pieces.len();
    let mut last = None;
    for retry in 0..=LEDGER_RETRIES {
        let cap = theta_rot.min(0.99);
        let stages: Vec<Partition> = semi
            .partition
            .pieces
            .par_iter()
            .map(|q| {
                let vt = semiconvexity_ratio(q, cap, cfg.chord_samples).clamp(1e-3, cap);
                decompose_rotund(q, theta_rot, vt, epsilon / m as f64).map(|d| d.partition)
            })
            .collect::<Result<_>>()?;
        let mut part = Partition::trivial(p);
        part.pieces.clear();
        part.cuts = semi.partition.cuts.clone();
        for s in stages {
            part.pieces.extend(s.pieces);
            part.exceptional.extend(s.exceptional);
            part.cuts.extend(s.cuts);
        }
        let plan = StagePlan { theta_semi: theta / 5.0, theta_rot, semiconvex_pieces: m, retries: retry };
        let ok = part.ledger_check(theta).0;
        last = Some((part, plan));
        if ok {
            break;
        }
        theta_rot *= 0.5;
    }
    Ok(last.expect("at least one rotund pass"))
}

/// Certificates of one piece against the configured constants.
pub fn certify_piece(index: usize, q: &Polygon, cfg: &PipelineConfig) -> PieceReport {
    let (vt, om, rho) = cfg.constants();
    let semiconvex = certify_semiconvex(q, vt, cfg.chord_samples);
    let rotund = certify_rotund(q, om);
    let john = certify_john_with(q, rho, &cfg.john);
    PieceReport {
        index,
        perimeter: q.perimeter(),
        area: q.area(),
        semiconvexity: semiconvexity_ratio(q, REPORT_RATIO_CAP, cfg.chord_samples),
        rotundity: rotund.radius / rotund.diameter,
        john_constant: cfg.estimate_john.then(|| john_constant(q, &cfg.john)),
        semiconvex,
        rotund,
        john,
    }
}

/// Full pipeline: partition, ledger, and (if configured) piece certificates.
pub fn decompose(p: &Polygon, cfg: &PipelineConfig) -> Result<Decomposition> {
    let (partition, plan) = partition_polygon(p, cfg)?;
    let epsilon = cfg.epsilon.unwrap_or(0.01 * p.perimeter());
    let ledger = Ledger::of(&partition, cfg.theta, epsilon);
    let pieces = if cfg.certify {
        partition.pieces.par_iter().enumerate().map(|(i, q)| certify_piece(i, q, cfg)).collect()
    } else {
        vec![]
    };
    let (vartheta_out, omega_out, rho) = cfg.constants();
    Ok(Decomposition { theta: cfg.theta, eta: cfg.eta, vartheta_out, omega_out, rho, plan, partition, ledger, pieces })
}
