//! Experiment runner: subcommand dispatch, JSON config with flag
//! overrides, artifact + manifest output.

use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::cdf::{iterate_cdf, CdfGrid, CdfMap, DEFAULT_CDF_POINTS};
use crate::error::{Error, Result};
use crate::geometry::{builtin, FeasibleSet};
use crate::grid::{EvolveOp, GridMeasure, DEFAULT_RESOLUTION};
use crate::io;
use crate::solution::{
    axiom_report, concentration_point, default_eps_schedule, ref_solution,
    ternary_alternating_cdf, ternary_alternating_fixed_point, ternary_random_limit, Schedule,
    DEFAULT_STEPS,
};
use crate::stats::{ks_critical_95, ks_statistic};
use crate::tree::{sample_many, AssignmentModel, GameSpec};

pub const DEFAULT_DEPTH: u32 = 20;
pub const DEFAULT_REPLICATES: u64 = 100_000;

/// Merged run parameters. Every field is optional in the config file;
/// flags override file values and defaults fill the rest.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: Option<String>,
    pub assignment: Option<String>,
    pub schedule: Option<String>,
    pub map: Option<String>,
    pub eps: Option<f64>,
    pub eps_schedule: Option<Vec<f64>>,
    pub p1: Option<f64>,
    pub depth: Option<u32>,
    pub steps: Option<u32>,
    pub branching: Option<u32>,
    pub resolution: Option<usize>,
    pub replicates: Option<u64>,
    pub level: Option<f64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    fn merge_over(mut self, file: ExperimentConfig) -> ExperimentConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if self.$f.is_none() { self.$f = file.$f; } )* };
        }
        take!(
            domain, assignment, schedule, map, eps, eps_schedule, p1, depth, steps, branching,
            resolution, replicates, level, seed, output, format, threads
        );
        self
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct CommonOpts {
    /// JSON config file (an ExperimentConfig, or a manifest.json from a
    /// previous run). Explicit flags win over config values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Feasible set: builtin name (triangle | square | pentagon |
    /// segment), a JSON file path, or inline JSON.
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub steps: Option<u32>,
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub branching: Option<u32>,
    /// Output directory for artifacts and manifest.json.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Artifact format: csv (default) or json (adds full JSON dumps).
    #[arg(long)]
    pub format: Option<String>,
    /// Worker threads (fallback: REFGAMES_THREADS). Output is independent
    /// of this value.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Monte Carlo SPE value samples over the random tree.
    Simulate {
        #[command(flatten)]
        common: CommonOpts,
        /// alternating | random | hybrid
        #[arg(long)]
        assignment: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        replicates: Option<u64>,
    },
    /// 1D CDF functional iteration.
    IterateCdf {
        #[command(flatten)]
        common: CommonOpts,
        /// phi | phi-eps | raw-pair
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        p1: Option<f64>,
    },
    /// 2D grid-measure evolution under a schedule.
    Evolve {
        #[command(flatten)]
        common: CommonOpts,
        /// alternating | random | hybrid
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
        /// Quantile level recorded in the track (default: median).
        #[arg(long)]
        level: Option<f64>,
    },
    /// Concentration point of an alternating or hybrid schedule.
    Solve {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// REF solution via the decreasing-epsilon schedule.
    Ref {
        #[command(flatten)]
        common: CommonOpts,
        /// Comma-separated decreasing epsilon values.
        #[arg(long, value_delimiter = ',')]
        eps_schedule: Option<Vec<f64>>,
    },
    /// Standard-axiom checks of the REF solution.
    Axioms {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, value_delimiter = ',')]
        eps_schedule: Option<Vec<f64>>,
    },
    /// Ternary-tree results: alternating fixed point and random limit.
    Ternary {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Monte Carlo vs analytic divergence report.
    Compare {
        /// Sample CSV (replicate,payoff1,payoff2).
        sample_csv: PathBuf,
        /// Analytic CDF CSV (x,F) for the payoff-1 marginal.
        analytic_csv: PathBuf,
        /// Box-mass check centers for the payoff-1 marginal.
        #[arg(long, value_delimiter = ',')]
        box_centers: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.05)]
        box_half_width: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Parser, Debug)]
#[command(name = "refgames", version, about = "Random extensive-form game value distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: &'a ExperimentConfig,
    seed: u64,
    version: &'a str,
    wall_time_secs: f64,
}

/// Sidecar metadata written next to each primary artifact; `compare`
/// reads it to flag depth mismatches.
#[derive(Serialize, Deserialize)]
pub struct ArtifactMeta {
    pub kind: String,
    pub seed: Option<u64>,
    /// Tree depth for sample artifacts; equivalent depth (levels applied)
    /// for analytic artifacts.
    pub depth: Option<u32>,
    pub replicates: Option<u64>,
    pub wall_time_secs: f64,
}

#[derive(Serialize)]
pub struct BoxCheck {
    pub center: f64,
    pub half_width: f64,
    pub empirical: f64,
    pub analytic: f64,
    pub diff: f64,
}

#[derive(Serialize)]
pub struct CompareReport {
    pub n: usize,
    pub ks: f64,
    pub ks_critical_95: f64,
    pub ks_pass: bool,
    pub box_checks: Vec<BoxCheck>,
    /// Set when the sidecar metadata of the two inputs disagree on depth.
    pub depth_mismatch: Option<String>,
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    // A manifest.json nests the config under "config".
    let config_value = value.get("config").cloned().unwrap_or(value);
    serde_json::from_value(config_value)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Resolves a domain argument: builtin name, file path, or inline JSON.
pub fn resolve_domain(arg: &str) -> Result<FeasibleSet> {
    let trimmed = arg.trim();
    let set = if trimmed.starts_with('{') {
        FeasibleSet::from_json_str(trimmed)?
    } else {
        match trimmed {
            "triangle" => builtin::triangle(),
            "square" => builtin::unit_square(),
            "pentagon" => builtin::pentagon(),
            "segment" => FeasibleSet::zero_sum_segment(),
            path => FeasibleSet::from_json_str(&fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("domain `{path}`: not a builtin name and {e}"))
            })?)?,
        }
    };
    set.validate()?;
    Ok(set)
}

fn parse_schedule(name: &str, eps: Option<f64>) -> Result<Schedule> {
    match name {
        "alternating" => Ok(Schedule::Alternating),
        "random" => Ok(Schedule::Random),
        "hybrid" => {
            let eps = eps.ok_or_else(|| Error::Config("hybrid schedule needs --eps".into()))?;
            Ok(Schedule::Hybrid { eps })
        }
        other => Err(Error::Config(format!("unknown schedule `{other}`"))),
    }
}

fn parse_assignment(name: &str, eps: Option<f64>) -> Result<AssignmentModel> {
    match name {
        "alternating" => Ok(AssignmentModel::alternating()),
        "random" => Ok(AssignmentModel::random()),
        "hybrid" => {
            let eps = eps.ok_or_else(|| Error::Config("hybrid assignment needs --eps".into()))?;
            AssignmentModel::hybrid(eps)
        }
        other => Err(Error::Config(format!("unknown assignment `{other}`"))),
    }
}

fn init_threads(cfg: &ExperimentConfig) {
    let n = cfg.threads.or_else(|| {
        std::env::var("REFGAMES_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        // Ignore the error if a pool already exists (e.g. under tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn out_dir(cfg: &ExperimentConfig) -> Result<PathBuf> {
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_file<F: FnOnce(&mut BufWriter<fs::File>) -> Result<()>>(
    dir: &Path,
    name: &str,
    body: F,
) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(dir.join(name))?);
    body(&mut w)
}

fn write_manifest(dir: &Path, command: &str, cfg: &ExperimentConfig, started: Instant) -> Result<()> {
    let manifest = Manifest {
        command,
        config: cfg,
        seed: cfg.seed.unwrap_or(0),
        version: env!("CARGO_PKG_VERSION"),
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    write_file(dir, "manifest.json", |w| io::write_json_pretty(w, &manifest))
}

fn merged_common(common: &CommonOpts) -> Result<ExperimentConfig> {
    let flags = ExperimentConfig {
        domain: common.domain.clone(),
        seed: common.seed,
        steps: common.steps,
        resolution: common.resolution,
        branching: common.branching,
        output: common.output.clone(),
        format: common.format.clone(),
        threads: common.threads,
        ..Default::default()
    };
    Ok(match &common.config {
        Some(path) => flags.merge_over(load_config(path)?),
        None => flags,
    })
}

fn domain_of(cfg: &ExperimentConfig, default: &str) -> Result<FeasibleSet> {
    resolve_domain(cfg.domain.as_deref().unwrap_or(default))
}

fn run_simulate(cfg: &ExperimentConfig) -> Result<()> {
    let started = Instant::now();
    let domain = domain_of(cfg, "segment")?;
    let assignment =
        parse_assignment(cfg.assignment.as_deref().unwrap_or("alternating"), cfg.eps)?;
    let spec = GameSpec {
        domain,
        assignment,
        depth: cfg.depth.unwrap_or(DEFAULT_DEPTH),
        branching: cfg.branching.unwrap_or(2),
    };
    spec.validate()?;
    let seed = cfg.seed.unwrap_or(0);
    let replicates = cfg.replicates.unwrap_or(DEFAULT_REPLICATES);
    let set = sample_many(&spec, seed, replicates)?;
    let dir = out_dir(cfg)?;
    write_file(&dir, "samples.csv", |w| io::write_samples_csv(w, &set))?;
    let meta = ArtifactMeta {
        kind: "samples".into(),
        seed: Some(seed),
        depth: Some(spec.depth),
        replicates: Some(replicates),
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    write_file(&dir, "samples.meta.json", |w| io::write_json_pretty(w, &meta))?;
    if cfg.format.as_deref() == Some("json") {
        write_file(&dir, "samples.json", |w| io::write_json_pretty(w, &set))?;
    }
    write_manifest(&dir, "simulate", cfg, started)
}

fn run_iterate_cdf(cfg: &ExperimentConfig) -> Result<()> {
    let started = Instant::now();
    let steps = cfg.steps.unwrap_or(30);
    let points = cfg.resolution.unwrap_or(DEFAULT_CDF_POINTS);
    let branching = cfg.branching.unwrap_or(2);
    let (map, depth_per_step) = match cfg.map.as_deref().unwrap_or("phi") {
        "phi" => (CdfMap::Phi, 2),
        "phi-eps" => (
            CdfMap::PhiEps(cfg.eps.ok_or_else(|| Error::Config("phi-eps needs --eps".into()))?),
            2,
        ),
        "raw-pair" => (
            CdfMap::RawPair {
                p1: cfg.p1.ok_or_else(|| Error::Config("raw-pair needs --p1".into()))?,
                branching,
            },
            1,
        ),
        other => return Err(Error::Config(format!("unknown map `{other}`"))),
    };
    let out = iterate_cdf(&CdfGrid::uniform(points), steps, map)?;
    let dir = out_dir(cfg)?;
    write_file(&dir, "cdf.csv", |w| io::write_cdf_csv(w, &out))?;
    let meta = ArtifactMeta {
        kind: "cdf".into(),
        seed: None,
        depth: Some(steps * depth_per_step),
        replicates: None,
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    write_file(&dir, "cdf.meta.json", |w| io::write_json_pretty(w, &meta))?;
    write_manifest(&dir, "iterate-cdf", cfg, started)
}

fn run_evolve(cfg: &ExperimentConfig) -> Result<()> {
    let started = Instant::now();
    let domain = domain_of(cfg, "triangle")?;
    let schedule = parse_schedule(cfg.schedule.as_deref().unwrap_or("random"), cfg.eps)?;
    let steps = cfg.steps.unwrap_or(DEFAULT_STEPS);
    let resolution = cfg.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let branching = cfg.branching.unwrap_or(2);
    let level = match cfg.level {
        Some(l) => l,
        None => 0.5,
    };
    let mut m = GridMeasure::from_domain(&domain, resolution, resolution)?;
    let mut track = crate::solution::QuantileTrack { level, points: Vec::new() };
    for s in 1..=steps {
        m = m.evolve(EvolveOp::Mix(schedule.p1_at_level(s)), branching)?;
        track.points.push(crate::solution::TrackPoint {
            step: s,
            x: m.marginal_quantile(0, level)?,
            y: m.marginal_quantile(1, level)?,
        });
    }
    let dir = out_dir(cfg)?;
    write_file(&dir, "grid.csv", |w| io::write_grid_csv(w, &m))?;
    write_file(&dir, "track.csv", |w| io::write_track_csv(w, &track))?;
    if cfg.format.as_deref() == Some("json") {
        write_file(&dir, "grid.json", |w| io::write_json_pretty(w, &m))?;
    }
    write_manifest(&dir, "evolve", cfg, started)
}

fn run_solve(cfg: &ExperimentConfig) -> Result<()> {
    let started = Instant::now();
    let domain = domain_of(cfg, "triangle")?;
    let schedule = parse_schedule(cfg.schedule.as_deref().unwrap_or("alternating"), cfg.eps)?;
    let steps = cfg.steps.unwrap_or(DEFAULT_STEPS);
    let resolution = cfg.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let report = concentration_point(&domain, schedule, steps, resolution)?;
    let dir = out_dir(cfg)?;
    write_file(&dir, "solution.json", |w| io::write_json_pretty(w, &report))?;
    write_file(&dir, "track.csv", |w| io::write_track_csv(w, &report.track))?;
    write_manifest(&dir, "solve", cfg, started)
}

fn run_ref(cfg: &ExperimentConfig) -> Result<()> {
    let started = Instant::now();
    let domain = domain_of(cfg, "triangle")?;
    let eps_schedule = cfg.eps_schedule.clone().unwrap_or_else(default_eps_schedule);
    let steps = cfg.steps.unwrap_or(40_000);
    let resolution = cfg.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let report = ref_solution(&domain, &eps_schedule, steps, resolution)?;
    let dir = out_dir(cfg)?;
    write_file(&dir, "ref.json", |w| io::write_json_pretty(w, &report))?;
    write_file(&dir, "track.csv", |w| io::write_track_csv(w, &report.solution.track))?;
    write_manifest(&dir, "ref", cfg, started)
}

fn run_axioms(cfg: &ExperimentConfig) -> Result<()> {
    let started = Instant::now();
    let domain = domain_of(cfg, "triangle")?;
    let eps_schedule = cfg.eps_schedule.clone().unwrap_or_else(default_eps_schedule);
    let steps = cfg.steps.unwrap_or(40_000);
    let resolution = cfg.resolution.unwrap_or(DEFAULT_RESOLUTION);
    let report = axiom_report(&domain, &eps_schedule, steps, resolution)?;
    let dir = out_dir(cfg)?;
    write_file(&dir, "axioms.json", |w| io::write_json_pretty(w, &report))?;
    write_manifest(&dir, "axioms", cfg, started)
}

#[derive(Serialize)]
struct TernaryReport {
    alternating_fixed_point: crate::cdf::FixedPointReport,
    /// Median of the alternating ternary CDF after `steps` two-level
    /// applications; concentrates at the fixed point.
    alternating_cdf_median: f64,
    random_limit_top_cells: [([f64; 2], f64); 2],
}

fn run_ternary(cfg: &ExperimentConfig) -> Result<()> {
    let started = Instant::now();
    let domain = domain_of(cfg, "triangle")?;
    let steps = cfg.steps.unwrap_or(60);
    let resolution = cfg.resolution.unwrap_or(256);
    let fp = ternary_alternating_fixed_point();
    let cdf = ternary_alternating_cdf(steps, cfg.resolution.unwrap_or(DEFAULT_CDF_POINTS))?;
    let report = TernaryReport {
        alternating_fixed_point: fp,
        alternating_cdf_median: cdf.quantile(0.5)?,
        random_limit_top_cells: ternary_random_limit(&domain, steps, resolution)?,
    };
    let dir = out_dir(cfg)?;
    write_file(&dir, "ternary.json", |w| io::write_json_pretty(w, &report))?;
    write_manifest(&dir, "ternary", cfg, started)
}

fn read_sidecar_meta(csv_path: &Path) -> Option<ArtifactMeta> {
    let meta_path = csv_path.with_extension("meta.json");
    let text = fs::read_to_string(meta_path).ok()?;
    serde_json::from_str(&text).ok()
}

pub fn run_compare(
    sample_csv: &Path,
    analytic_csv: &Path,
    box_centers: &[f64],
    box_half_width: f64,
    output: Option<&Path>,
) -> Result<CompareReport> {
    let samples = io::read_samples_csv(BufReader::new(fs::File::open(sample_csv)?))?;
    let cdf = io::read_cdf_csv(BufReader::new(fs::File::open(analytic_csv)?))?;
    let payoff1: Vec<f64> = samples.iter().map(|&(_, p1, _)| p1).collect();
    let ks = ks_statistic(&payoff1, |x| cdf.eval(x))?;
    let n = payoff1.len();
    let box_checks = box_centers
        .iter()
        .map(|&c| {
            let lo = c - box_half_width;
            let hi = c + box_half_width;
            let empirical =
                payoff1.iter().filter(|&&x| lo <= x && x <= hi).count() as f64 / n as f64;
            let analytic = cdf.eval(hi) - cdf.eval(lo);
            BoxCheck {
                center: c,
                half_width: box_half_width,
                empirical,
                analytic,
                diff: (empirical - analytic).abs(),
            }
        })
        .collect();
    let depth_mismatch = match (read_sidecar_meta(sample_csv), read_sidecar_meta(analytic_csv)) {
        (Some(s), Some(a)) => match (s.depth, a.depth) {
            (Some(ds), Some(da)) if ds != da => {
                Some(format!("sample depth {ds} != analytic depth {da}"))
            }
            _ => None,
        },
        _ => None,
    };
    let report = CompareReport {
        n,
        ks,
        ks_critical_95: ks_critical_95(n),
        ks_pass: ks < 3.0 * ks_critical_95(n),
        box_checks,
        depth_mismatch,
    };
    if let Some(dir) = output {
        fs::create_dir_all(dir)?;
        write_file(dir, "compare.json", |w| io::write_json_pretty(w, &report))?;
    } else {
        let mut stdout = std::io::stdout().lock();
        io::write_json_pretty(&mut stdout, &report)?;
    }
    Ok(report)
}

/// Dispatches a parsed command line. Errors map to exit codes in `main`.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { common, assignment, eps, depth, replicates } => {
            let mut cfg = merged_common(&common)?;
            cfg.assignment = assignment.or(cfg.assignment);
            cfg.eps = eps.or(cfg.eps);
            cfg.depth = depth.or(cfg.depth);
            cfg.replicates = replicates.or(cfg.replicates);
            init_threads(&cfg);
            run_simulate(&cfg)
        }
        Command::IterateCdf { common, map, eps, p1 } => {
            let mut cfg = merged_common(&common)?;
            cfg.map = map.or(cfg.map);
            cfg.eps = eps.or(cfg.eps);
            cfg.p1 = p1.or(cfg.p1);
            init_threads(&cfg);
            run_iterate_cdf(&cfg)
        }
        Command::Evolve { common, schedule, eps, level } => {
            let mut cfg = merged_common(&common)?;
            cfg.schedule = schedule.or(cfg.schedule);
            cfg.eps = eps.or(cfg.eps);
            cfg.level = level.or(cfg.level);
            init_threads(&cfg);
            run_evolve(&cfg)
        }
        Command::Solve { common, schedule, eps } => {
            let mut cfg = merged_common(&common)?;
            cfg.schedule = schedule.or(cfg.schedule);
            cfg.eps = eps.or(cfg.eps);
            init_threads(&cfg);
            run_solve(&cfg)
        }
        Command::Ref { common, eps_schedule } => {
            let mut cfg = merged_common(&common)?;
            cfg.eps_schedule = eps_schedule.or(cfg.eps_schedule);
            init_threads(&cfg);
            run_ref(&cfg)
        }
        Command::Axioms { common, eps_schedule } => {
            let mut cfg = merged_common(&common)?;
            cfg.eps_schedule = eps_schedule.or(cfg.eps_schedule);
            init_threads(&cfg);
            run_axioms(&cfg)
        }
        Command::Ternary { common } => {
            let cfg = merged_common(&common)?;
            init_threads(&cfg);
            run_ternary(&cfg)
        }
        Command::Compare { sample_csv, analytic_csv, box_centers, box_half_width, output } => {
            run_compare(
                &sample_csv,
                &analytic_csv,
                &box_centers.unwrap_or_default(),
                box_half_width,
                output.as_deref(),
            )
            .map(|_| ())
        }
    }
}

/// Exit code contract: 0 success, 2 not converged, 1 anything else.
pub fn exit_code(result: &Result<()>) -> i32 {
    match result {
        Ok(()) => 0,
        Err(Error::NotConverged { .. }) => 2,
        Err(_) => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_domains_resolve() {
        for name in ["triangle", "square", "pentagon", "segment"] {
            resolve_domain(name).unwrap();
        }
        assert!(resolve_domain("no-such-domain").is_err());
    }

    #[test]
    fn inline_domain_resolves() {
        let set = resolve_domain(r#"{"kind":"segment","endpoints":[[0,0],[1,-1]]}"#).unwrap();
        assert!(set.is_segment());
    }

    #[test]
    fn flags_override_config() {
        let file = ExperimentConfig { seed: Some(1), steps: Some(10), ..Default::default() };
        let flags = ExperimentConfig { seed: Some(2), ..Default::default() };
        let merged = flags.merge_over(file);
        assert_eq!(merged.seed, Some(2));
        assert_eq!(merged.steps, Some(10));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Ok(())), 0);
        assert_eq!(
            exit_code(&Err(Error::NotConverged { steps: 5, sup_dist: 0.1 })),
            2
        );
        assert_eq!(exit_code(&Err(Error::Config("x".into()))), 1);
    }
}
