//! Command-line front end: fixture generation, decomposition of polygons and
//! smooth domains, single certificates, report verification and SVG output.

pub mod svg;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use johncut::fixtures::{generate, FixtureParams};
use johncut::john::{certify_john_with, JohnCert, JohnConfig, DEFAULT_CARROT_SAMPLES, DEFAULT_POINTS};
use johncut::pipeline::{certify_piece, decompose, Decomposition, Ledger, PipelineConfig};
use johncut::rotund::{certify_rotund, RotundCert};
use johncut::semiconvex::{certify_semiconvex, SemiconvexCert, SemiconvexParams};
use johncut::smooth::{decompose_domain, DomainConfig, DomainDecomposition, DomainInput};
use johncut::Polygon;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "johncut", version, about = "Decompose polygons into semiconvex, rotund and John pieces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a fixture polygon as JSON.
    Generate(GenerateArgs),
    /// Run the full pipeline on a polygon or a domain.
    Decompose(DecomposeArgs),
    /// Run a single certificate on a polygon.
    Certify(CertifyArgs),
    /// Re-run the certificates recorded in a report and compare verdicts.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// One of koch-variant, comb, notched-rect, spiral, l-shape, random-convex, blob.
    pub kind: String,
    /// Koch generation, comb teeth, spiral windings or vertex count.
    #[arg(long, default_value_t = FixtureParams::default().n)]
    pub n: usize,
    /// Koch angle decay, or the notch gap.
    #[arg(long, default_value_t = FixtureParams::default().eta)]
    pub eta: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parameters shared by `decompose` and `certify`; recorded in every report.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[arg(long, default_value_t = 0.25)]
    pub theta: f64,
    #[arg(long, default_value_t = SemiconvexParams::DEFAULT_ETA)]
    pub eta: f64,
    /// Exceptional-set budget (default 1% of the boundary length).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// John constant to certify (default ϑ_out³).
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub vartheta: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    /// John sample points per piece.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Four times the sampling densities.
    #[arg(long)]
    pub stress: bool,
    /// Also estimate the John constant of every piece.
    #[arg(long)]
    pub estimate_john: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            theta: 0.25,
            eta: SemiconvexParams::DEFAULT_ETA,
            epsilon: None,
            rho: None,
            vartheta: None,
            omega: None,
            samples: DEFAULT_POINTS,
            seed: 42,
            stress: false,
            estimate_john: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("theta", Some(self.theta)), ("eta", Some(self.eta)), ("rho", self.rho), ("vartheta", self.vartheta)] {
            if let Some(v) = v {
                if !(v > 0.0 && v < 1.0) {
                    bail!("--{name} = {v} must lie in (0, 1)");
                }
            }
        }
        if let Some(w) = self.omega {
            if !(w > 0.0 && w <= 1.0) {
                bail!("--omega = {w} must lie in (0, 1]");
            }
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0) {
                bail!("--epsilon = {e} must be positive");
            }
        }
        if self.samples == 0 {
            bail!("--samples must be positive");
        }
        Ok(())
    }

    pub fn john(&self) -> JohnConfig {
        let j = JohnConfig { n_points: self.samples, carrot_samples: DEFAULT_CARROT_SAMPLES, seed: self.seed };
        if self.stress {
            j.stress()
        } else {
            j
        }
    }

    pub fn chord_samples(&self) -> usize {
        SemiconvexParams::DEFAULT_SAMPLES * if self.stress { 4 } else { 1 }
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            theta: self.theta,
            eta: self.eta,
            epsilon: self.epsilon,
            chord_samples: self.chord_samples(),
            john: self.john(),
            vartheta_out: self.vartheta,
            omega_out: self.omega,
            rho: self.rho,
            certify: true,
            estimate_john: self.estimate_john,
        }
    }

    pub fn domain(&self) -> DomainConfig {
        DomainConfig { theta: self.theta, epsilon: self.epsilon, pipeline: self.pipeline(), ..DomainConfig::default() }
    }
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Polygon `{"vertices": ...}` or domain `{"outer": ..., "holes": ...}` JSON.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub config: RunConfig,
    /// Report path; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Semiconvex,
    Rotund,
    John,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub check: Check,
    /// ϑ, ω or ρ; falls back to --vartheta, --omega or --rho.
    #[arg(long)]
    pub param: Option<f64>,
    #[command(flatten)]
    pub config: RunConfig,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub report: PathBuf,
}

/// Parsed input file.
#[derive(Clone, Debug)]
pub enum Input {
    Polygon(Polygon),
    Domain(DomainInput),
}

impl Input {
    pub fn parse(text: &str) -> Result<Input> {
        let v: serde_json::Value = serde_json::from_str(text).context("parse error")?;
        let has_holes = v.get("holes").and_then(|h| h.as_array()).is_some_and(|h| !h.is_empty());
        if v.get("outer").is_some() {
            Ok(Input::Domain(serde_json::from_value(v).context("invalid domain")?))
        } else if has_holes {
            let outer = serde_json::from_value(v["vertices"].clone()).context("invalid vertices")?;
            let holes = serde_json::from_value(v["holes"].clone()).context("invalid holes")?;
            Ok(Input::Domain(DomainInput { outer, holes, spacing: None }))
        } else {
            Ok(Input::Polygon(serde_json::from_value(v).context("invalid polygon")?))
        }
    }

    pub fn load(path: &Path) -> Result<Input> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Input::parse(&text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub kind: String,
    pub vertices: usize,
    pub holes: usize,
    pub perimeter: f64,
    pub area: f64,
}

impl InputSummary {
    fn of(input: &Input) -> Result<Self> {
        Ok(match input {
            Input::Polygon(p) => {
                InputSummary { kind: "polygon".into(), vertices: p.len(), holes: 0, perimeter: p.perimeter(), area: p.area() }
            }
            Input::Domain(d) => InputSummary {
                kind: "domain".into(),
                vertices: d.outer.len() + d.holes.iter().map(Vec::len).sum::<usize>(),
                holes: d.holes.len(),
                perimeter: d.perimeter()?,
                area: d.area()?,
            },
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Certificate {
    Semiconvex(SemiconvexCert),
    Rotund(RotundCert),
    John(JohnCert),
}

impl Certificate {
    pub fn passed(&self) -> bool {
        match self {
            Certificate::Semiconvex(c) => c.passed(),
            Certificate::Rotund(c) => c.passed(),
            Certificate::John(c) => c.passed(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Outcome {
    Polygon { decomposition: Box<Decomposition> },
    Domain { decomposition: Box<DomainDecomposition> },
    Certificate { polygon: Polygon, check: Check, param: f64, certificate: Certificate },
}

/// Everything a run produced. Serialization is deterministic for a fixed
/// configuration and seed; timings go to stderr only.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub input: InputSummary,
    pub config: RunConfig,
    pub passed: bool,
    pub outcome: Outcome,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn piece_count(&self) -> usize {
        match &self.outcome {
            Outcome::Polygon { decomposition } => decomposition.partition.pieces.len(),
            Outcome::Domain { decomposition } => decomposition.pieces.len(),
            Outcome::Certificate { .. } => 1,
        }
    }
}

fn polygon_passed(d: &Decomposition) -> bool {
    d.ledger.pass && d.ledger.exceptional_ok && d.all_certified()
}

fn domain_passed(d: &DomainDecomposition) -> bool {
    d.ledger.pass && d.all_certified()
}

pub fn run_decompose(input: &Input, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let summary = InputSummary::of(input)?;
    let (passed, outcome) = match input {
        Input::Polygon(p) => {
            let d = decompose(p, &cfg.pipeline()).context("pipeline")?;
            (polygon_passed(&d), Outcome::Polygon { decomposition: Box::new(d) })
        }
        Input::Domain(d) => {
            let r = decompose_domain(d, &cfg.domain()).context("domain pipeline")?;
            (domain_passed(&r), Outcome::Domain { decomposition: Box::new(r) })
        }
    };
    Ok(Report { command: "decompose".into(), version: env!("CARGO_PKG_VERSION").into(), input: summary, config: cfg.clone(), passed, outcome })
}

fn run_check(p: &Polygon, check: Check, param: f64, cfg: &RunConfig) -> Certificate {
    match check {
        Check::Semiconvex => Certificate::Semiconvex(certify_semiconvex(p, param, cfg.chord_samples())),
        Check::Rotund => Certificate::Rotund(certify_rotund(p, param)),
        Check::John => Certificate::John(certify_john_with(p, param, &cfg.john())),
    }
}

pub fn run_certify(input: &Input, check: Check, param: Option<f64>, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let Input::Polygon(p) = input else { bail!("certify needs a polygon input") };
    let fallback = match check {
        Check::Semiconvex => cfg.vartheta,
        Check::Rotund => cfg.omega,
        Check::John => cfg.rho,
    };
    let param = param.or(fallback).ok_or_else(|| anyhow!("missing --param"))?;
    if !(param > 0.0 && param <= 1.0) {
        bail!("--param = {param} must lie in (0, 1]");
    }
    let certificate = run_check(p, check, param, cfg);
    Ok(Report {
        command: "certify".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        input: InputSummary::of(input)?,
        config: cfg.clone(),
        passed: certificate.passed(),
        outcome: Outcome::Certificate { polygon: p.clone(), check, param, certificate },
    })
}

/// One re-derived verdict next to the recorded one.
#[derive(Clone, Debug, PartialEq)]
pub struct VerdictCheck {
    pub what: String,
    pub recorded: bool,
    pub recomputed: bool,
}

/// Re-runs every certificate and ledger test recorded in `report`.
pub fn verify_report(report: &Report) -> Vec<VerdictCheck> {
    let cfg = &report.config;
    let mut out = vec![];
    let mut push = |what: String, recorded: bool, recomputed: bool| out.push(VerdictCheck { what, recorded, recomputed });
    match &report.outcome {
        Outcome::Polygon { decomposition: d } => {
            let pcfg = PipelineConfig {
                vartheta_out: Some(d.vartheta_out),
                omega_out: Some(d.omega_out),
                rho: Some(d.rho),
                estimate_john: false,
                ..cfg.pipeline()
            };
            let l = Ledger::of(&d.partition, d.theta, d.ledger.epsilon);
            push("ledger".into(), d.ledger.pass, l.pass);
            push("exceptional".into(), d.ledger.exceptional_ok, l.exceptional_ok);
            for (r, q) in d.pieces.iter().zip(&d.partition.pieces) {
                let again = certify_piece(r.index, q, &pcfg);
                push(format!("piece {} semiconvex", r.index), r.semiconvex.passed(), again.semiconvex.passed());
                push(format!("piece {} rotund", r.index), r.rotund.passed(), again.rotund.passed());
                push(format!("piece {} john", r.index), r.john.passed(), again.john.passed());
            }
        }
        Outcome::Domain { decomposition: d } => {
            let sum: f64 = d.pieces.iter().map(|p| p.polygon.perimeter()).sum();
            push("ledger".into(), d.ledger.pass, sum <= d.ledger.bound + 1e-9 * d.ledger.perimeter);
            for (i, p) in d.pieces.iter().enumerate() {
                let again = certify_john_with(&p.polygon, d.rho, &cfg.john());
                push(format!("piece {i} john"), p.john.passed(), again.passed());
            }
        }
        Outcome::Certificate { polygon, check, param, certificate } => {
            push(format!("{check:?}").to_lowercase(), certificate.passed(), run_check(polygon, *check, *param, cfg).passed());
        }
    }
    let overall = out.iter().all(|c| c.recomputed);
    out.push(VerdictCheck { what: "report".into(), recorded: report.passed, recomputed: overall });
    out
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn log_summary(report: &Report, started: Instant) {
    let secs = started.elapsed().as_secs_f64();
    match &report.outcome {
        Outcome::Polygon { decomposition: d } => eprintln!(
            "pieces={} exceptional={} ledger={} slack={:.4} certified={}/{} time={secs:.2}s",
            d.partition.pieces.len(),
            d.partition.exceptional.len(),
            if d.ledger.pass { "pass" } else { "FAIL" },
            d.ledger.slack,
            d.pieces.iter().filter(|r| r.passed()).count(),
            d.pieces.len()
        ),
        Outcome::Domain { decomposition: d } => eprintln!(
            "pieces={} exceptional={} ledger={} slack={:.4} certified={}/{} rho={:.3e} time={secs:.2}s",
            d.pieces.len(),
            d.exceptional.len(),
            if d.ledger.pass { "pass" } else { "FAIL" },
            d.ledger.slack,
            d.pieces.iter().filter(|p| p.john.passed()).count(),
            d.pieces.len(),
            d.rho
        ),
        Outcome::Certificate { check, param, certificate, .. } => eprintln!(
            "{check:?} at {param}: {} time={secs:.2}s",
            if certificate.passed() { "pass" } else { "FAIL" }
        ),
    }
}

/// Runs a command; `Ok(false)` means a certificate or ledger check failed.
pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Generate(a) => {
            let p = generate(&a.kind, FixtureParams { n: a.n, eta: a.eta, seed: a.seed }).context("generate")?;
            write_or_print(a.out.as_deref(), &serde_json::to_string_pretty(&p)?)?;
            Ok(true)
        }
        Command::Decompose(a) => {
            let t = Instant::now();
            let report = run_decompose(&Input::load(&a.input)?, &a.config)?;
            log_summary(&report, t);
            write_or_print(a.out.as_deref(), &report.to_json()?)?;
            if let Some(path) = &a.svg {
                std::fs::write(path, svg::render(&report)).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(report.passed)
        }
        Command::Certify(a) => {
            let t = Instant::now();
            let report = run_certify(&Input::load(&a.input)?, a.check, a.param, &a.config)?;
            log_summary(&report, t);
            write_or_print(a.out.as_deref(), &report.to_json()?)?;
            if let Some(path) = &a.svg {
                std::fs::write(path, svg::render(&report)).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(report.passed)
        }
        Command::Verify(a) => {
            let text = std::fs::read_to_string(&a.report).with_context(|| format!("reading {}", a.report.display()))?;
            let report: Report = serde_json::from_str(&text).context("parse error")?;
            let checks = verify_report(&report);
            let mismatches: Vec<_> = checks.iter().filter(|c| c.recorded != c.recomputed).collect();
            for m in &mismatches {
                eprintln!("mismatch: {} recorded {} recomputed {}", m.what, m.recorded, m.recomputed);
            }
            eprintln!("{} verdicts checked, {} mismatches", checks.len(), mismatches.len());
            Ok(mismatches.is_empty())
        }
    }
}
