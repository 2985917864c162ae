//! Command-line front end: propagation, field rendering, optimization,
//! reporting and constraint audit. Every command is deterministic under a
//! fixed (scenario, seed, flags) triple.
//!
//! Exit codes: 0 success, 1 infeasible / no solution, 2 input error.

pub mod svg;

use crate::astro::{kepler_to_state, propagate, Ephemeris, FrozenForm};
use crate::constraints::{CollisionMode, ParamVector};
use crate::perception::{field_to_csv, planar_grid, quality_field};
use crate::scenario::{self, ConstraintDecl, Scenario, ScenarioError};
use crate::solver::{solve_maxmin, SolveReport};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Run(_) => 1,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Io { .. }
            | ScenarioError::Parse { .. }
            | ScenarioError::Invalid(_)
            | ScenarioError::UnknownPreset(..) => CliError::Input(e.to_string()),
            other => CliError::Run(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "orbitplan", version, about = "Observer-orbit design for perception quality")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Scenario selection and common overrides.
#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Path to a scenario JSON file.
    #[arg(long, conflicts_with = "preset")]
    pub scenario: Option<PathBuf>,
    /// Built-in preset name.
    #[arg(long)]
    pub preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Override the scenario seed (beats the ORBITPLAN_SEED variable).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the collision handling mode.
    #[arg(long, value_parser = ["penalty", "constraint"])]
    pub collision_mode: Option<String>,
    /// Override the frozen-eccentricity relation form.
    #[arg(long, value_parser = ["paper", "standard"])]
    pub frozen_form: Option<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub extent_km: f64,
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected nx,ny,extent_km, got `{s}`"));
    }
    let nx = parts[0].trim().parse::<usize>().map_err(|e| format!("nx: {e}"))?;
    let ny = parts[1].trim().parse::<usize>().map_err(|e| format!("ny: {e}"))?;
    let extent_km = parts[2].trim().parse::<f64>().map_err(|e| format!("extent_km: {e}"))?;
    if nx == 0 || ny == 0 || !(extent_km > 0.0) {
        return Err("grid dimensions and extent must be positive".into());
    }
    Ok(GridSpec { nx, ny, extent_km })
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate every target and write one ephemeris CSV per object.
    Propagate(ScenarioArgs),
    /// Sample the observation quality field on a planar grid at one time.
    Field {
        #[command(flatten)]
        common: ScenarioArgs,
        /// 1-based sample index on the scenario time grid.
        #[arg(long, default_value_t = 1)]
        sample: usize,
        /// Grid as nx,ny,extent_km.
        #[arg(long, value_parser = parse_grid, default_value = "60,60,12000")]
        grid: GridSpec,
    },
    /// Run the multi-start max-min solve and persist the best solution.
    Optimize {
        #[command(flatten)]
        common: ScenarioArgs,
        /// Number of random starts (overrides the scenario value).
        #[arg(long)]
        n_starts: Option<usize>,
    },
    /// Summarize a finished optimize run directory.
    Report {
        /// Directory previously produced by `optimize`.
        run_dir: PathBuf,
    },
    /// Inspect the assembled constraint system.
    Constraints {
        #[command(subcommand)]
        action: ConstraintsAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstraintsAction {
    /// Print every linear row and nonlinear residual of the scenario.
    Dump(ScenarioArgs),
}

/// Provenance of one command invocation. Deliberately excludes wall time so
/// manifests hash-match across reruns.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub scenario_sha256: String,
    pub seed: u64,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    fn new(command: &str, scenario: &Scenario, mut outputs: Vec<String>) -> Self {
        outputs.sort();
        RunManifest {
            command: command.to_string(),
            scenario_sha256: sha256_hex(&scenario.to_canonical_json()),
            seed: scenario.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs,
        }
    }

    fn save(&self, dir: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Run(e.to_string()))?;
        text.push('\n');
        std::fs::write(dir.join("manifest.json"), text)?;
        Ok(())
    }
}

/// Resolve the scenario from the flags, applying seed and mode overrides.
pub fn load_scenario(args: &ScenarioArgs) -> Result<Scenario, CliError> {
    let mut s = match (&args.scenario, &args.preset) {
        (Some(path), None) => scenario::load(path)?,
        (None, Some(name)) => scenario::presets::build(name)?,
        (None, None) => {
            return Err(CliError::Input("provide --scenario <path> or --preset <name>".into()))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    if let Ok(env_seed) = std::env::var("ORBITPLAN_SEED") {
        s.seed = env_seed
            .parse()
            .map_err(|e| CliError::Input(format!("ORBITPLAN_SEED: {e}")))?;
    }
    if let Some(seed) = args.seed {
        s.seed = seed;
    }
    if let Some(mode) = &args.collision_mode {
        let mode = match mode.as_str() {
            "penalty" => CollisionMode::Penalty,
            _ => CollisionMode::Constraint,
        };
        for decl in &mut s.constraints {
            if let ConstraintDecl::Collision { mode: m, .. } = decl {
                *m = mode;
            }
        }
    }
    if let Some(form) = &args.frozen_form {
        let form = match form.as_str() {
            "standard" => FrozenForm::Standard,
            _ => FrozenForm::Paper,
        };
        for decl in &mut s.constraints {
            if let ConstraintDecl::Frozen { form: f, .. } = decl {
                *f = form;
            }
        }
    }
    let violations = scenario::validate(&s);
    if !violations.is_empty() {
        let lines: Vec<String> =
            violations.iter().map(|v| format!("  {}: {}", v.path, v.message)).collect();
        return Err(CliError::Input(format!("scenario is invalid:\n{}", lines.join("\n"))));
    }
    Ok(s)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn write_text(dir: &Path, name: &str, text: &str, outputs: &mut Vec<String>) -> Result<(), CliError> {
    std::fs::write(dir.join(name), text)?;
    outputs.push(name.to_string());
    Ok(())
}

/// Propagate every target; one CSV per object plus the normalized scenario
/// and a manifest.
pub fn cmd_propagate(s: &Scenario, out: &Path) -> Result<RunManifest, CliError> {
    ensure_dir(out)?;
    let targets = s.propagated_targets()?;
    let mut outputs = Vec::new();
    write_text(out, "scenario.json", &s.to_canonical_json(), &mut outputs)?;
    for (i, t) in targets.iter().enumerate() {
        write_text(out, &format!("target_{:02}.csv", i + 1), &t.ephemeris.to_csv(), &mut outputs)?;
    }
    let manifest = RunManifest::new("propagate", s, outputs);
    manifest.save(out)?;
    Ok(manifest)
}

/// Quality-field slice at sample k: CSV plus an SVG heatmap with the Earth
/// disk masked.
pub fn cmd_field(
    s: &Scenario,
    sample: usize,
    grid: GridSpec,
    out: &Path,
) -> Result<RunManifest, CliError> {
    if sample == 0 || sample > s.grid.n_samples {
        return Err(CliError::Input(format!(
            "--sample {sample} outside grid 1..={}",
            s.grid.n_samples
        )));
    }
    ensure_dir(out)?;
    let targets = s.propagated_targets()?;
    let snapshot: Vec<_> = targets
        .iter()
        .map(|t| (*t.ephemeris.state_at(sample), &t.faces))
        .collect();
    let points = planar_grid(grid.nx, grid.ny, grid.extent_km);
    let sensor = s.agents.sensors.first().copied().unwrap_or_default();
    let samples = quality_field(
        &snapshot,
        &sensor,
        &s.sun_unit_vec(),
        &s.constants,
        &s.weights,
        &points,
    )
    .map_err(|e| CliError::Run(e.to_string()))?;

    let mut outputs = Vec::new();
    write_text(out, "scenario.json", &s.to_canonical_json(), &mut outputs)?;
    let csv_name = format!("field_{sample:03}.csv");
    write_text(out, &csv_name, &field_to_csv(&samples), &mut outputs)?;
    let values: Vec<Option<f64>> = samples.iter().map(|x| x.value).collect();
    let title = format!("quality field, t = {:.1} s", s.grid.time_at(sample));
    let svg_name = format!("field_{sample:03}.svg");
    write_text(out, &svg_name, &svg::heatmap_svg(grid.nx, grid.ny, &values, &title), &mut outputs)?;
    let manifest = RunManifest::new("field", s, outputs);
    manifest.save(out)?;
    Ok(manifest)
}

fn agent_ephemerides(s: &Scenario, params: &[f64]) -> Result<Vec<Ephemeris>, CliError> {
    let p = ParamVector(params.to_vec());
    (1..=s.agent_count())
        .map(|j| {
            let sv = kepler_to_state(&p.elements(j), &s.constants)
                .map_err(|e| CliError::Run(e.to_string()))?;
            propagate(&sv, &s.grid, None, None, &s.constants)
                .map_err(|e| CliError::Run(e.to_string()))
        })
        .collect()
}

fn orbits_svg(s: &Scenario, agents: &[Ephemeris]) -> Result<String, CliError> {
    let targets = s.propagated_targets()?;
    let mut curves = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        curves.push(svg::Curve {
            label: format!("target {}", i + 1),
            points: t.ephemeris.states.iter().map(|sv| (sv.r.x, sv.r.y)).collect(),
            color: "#bbbbbb",
        });
    }
    for (j, eph) in agents.iter().enumerate() {
        curves.push(svg::Curve {
            label: format!("agent {}", j + 1),
            points: eph.states.iter().map(|sv| (sv.r.x, sv.r.y)).collect(),
            color: svg::CURVE_COLORS[j % svg::CURVE_COLORS.len()],
        });
    }
    Ok(svg::trajectory_svg(&curves, s.constants.r_earth_km, &s.name))
}

fn convergence_csv(report: &SolveReport) -> String {
    let mut out = String::from("start,iter,objective,max_violation\r\n");
    for rec in &report.starts {
        for (it, (obj, viol)) in rec.history.iter().zip(&rec.violation_history).enumerate() {
            out.push_str(&format!("{},{},{:.16e},{:.16e}\r\n", rec.index + 1, it + 1, obj, viol));
        }
    }
    out
}

/// Multi-start solve; writes report JSON, convergence CSV, optimized agent
/// ephemerides and a trajectory plot. Exit code 1 when no feasible solution
/// is found (artifacts are still written).
pub fn cmd_optimize(
    s: &Scenario,
    n_starts: Option<usize>,
    out: &Path,
) -> Result<(RunManifest, SolveReport), CliError> {
    ensure_dir(out)?;
    let evaluator = s.build_evaluator()?;
    let mut opts = s.maxmin_options();
    if let Some(n) = n_starts {
        opts.n_starts = n;
    }
    let report = solve_maxmin(&evaluator, &opts).map_err(|e| CliError::Run(e.to_string()))?;

    let mut outputs = Vec::new();
    write_text(out, "scenario.json", &s.to_canonical_json(), &mut outputs)?;
    let mut report_json =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Run(e.to_string()))?;
    report_json.push('\n');
    write_text(out, "report.json", &report_json, &mut outputs)?;
    write_text(out, "convergence.csv", &convergence_csv(&report), &mut outputs)?;
    let agents = agent_ephemerides(s, &report.params)?;
    for (j, eph) in agents.iter().enumerate() {
        write_text(out, &format!("agent_{:02}.csv", j + 1), &eph.to_csv(), &mut outputs)?;
    }
    write_text(out, "orbits.svg", &orbits_svg(s, &agents)?, &mut outputs)?;
    let manifest = RunManifest::new("optimize", s, outputs);
    manifest.save(out)?;
    eprintln!("wall time: {:.2} s", report.wall_time_s);
    Ok((manifest, report))
}

/// Human-readable summary of an optimize run directory.
pub fn cmd_report(run_dir: &Path) -> Result<String, CliError> {
    let manifest_path = run_dir.join("manifest.json");
    if !manifest_path.exists() {
        return Err(CliError::Input(format!("no manifest at {}", manifest_path.display())));
    }
    let manifest: RunManifest =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path)?)
            .map_err(|e| CliError::Input(format!("manifest.json: {e}")))?;
    let report: SolveReport =
        serde_json::from_str(&std::fs::read_to_string(run_dir.join("report.json"))?)
            .map_err(|e| CliError::Input(format!("report.json: {e}")))?;
    let s = scenario::load(&run_dir.join("scenario.json"))?;

    let mut evaluator = s.build_evaluator()?;
    let p = ParamVector(report.params.clone());
    let eval = evaluator
        .evaluate(&p)
        .map_err(|e| CliError::Run(e.to_string()))?;

    let mut text = String::new();
    text.push_str(&format!("run: {} (seed {}, {} starts)\n", s.name, report.seed, report.n_starts));
    text.push_str(&format!("objective (min cumulative quality): {:.6}\n", report.objective));
    text.push_str(&format!("feasible: {}\n", report.feasible));
    text.push_str(&format!("min pairwise distance: {:.3} km\n", eval.d_min_exact));
    text.push_str("cumulative quality per target and face:\n");
    let (n, l) = eval.jsum.dim();
    text.push_str(&format!(
        "  target | {}\n",
        (1..=l).map(|x| format!("face {x:>8}")).collect::<Vec<_>>().join(" | ")
    ));
    for i in 0..n {
        let row: Vec<String> = (0..l).map(|j| format!("{:13.6}", eval.jsum[[i, j]])).collect();
        text.push_str(&format!("  {:>6} | {}\n", i + 1, row.join(" | ")));
    }
    text.push_str("constraint residuals:\n");
    let set = s.constraint_set()?;
    for row in &set.linear_eq {
        text.push_str(&format!("  eq  {} = {}: residual {:.3e}\n", row.describe(), row.rhs, row.residual(&p)));
    }
    for row in &set.linear_ineq {
        text.push_str(&format!("  ineq {} <= {}: residual {:.3e}\n", row.describe(), row.rhs, row.residual(&p)));
    }
    for nc in &set.nonlinear {
        let r = nc.residual(&p, &s.constants).map_err(|e| CliError::Run(e.to_string()))?;
        let rel = if nc.is_equality() { "=" } else { "<=" };
        text.push_str(&format!("  {} {} 0: residual {:.3e}\n", nc.label(), rel, r));
    }
    if let Some(policy) = &set.collision {
        text.push_str(&format!(
            "  separation >= {} km: d_min {:.3} km\n",
            policy.threshold_km, eval.d_min_exact
        ));
    }
    text.push_str(&format!("manifest: {} outputs, scenario sha256 {}\n", manifest.outputs.len(), manifest.scenario_sha256));

    let agents = agent_ephemerides(&s, &report.params)?;
    std::fs::write(run_dir.join("report.svg"), orbits_svg(&s, &agents)?)?;
    Ok(text)
}

/// Dump the assembled constraint system for audit.
pub fn cmd_constraints_dump(s: &Scenario) -> Result<String, CliError> {
    Ok(s.constraint_set()?.dump())
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Propagate(args) => {
            let s = load_scenario(&args)?;
            cmd_propagate(&s, &args.out)?;
            println!("propagated {} targets into {}", s.targets.len(), args.out.display());
            Ok(0)
        }
        Command::Field { common, sample, grid } => {
            let s = load_scenario(&common)?;
            cmd_field(&s, sample, grid, &common.out)?;
            println!("field slice {} written to {}", sample, common.out.display());
            Ok(0)
        }
        Command::Optimize { common, n_starts } => {
            let s = load_scenario(&common)?;
            let (_, report) = cmd_optimize(&s, n_starts, &common.out)?;
            println!(
                "best objective {:.6} (feasible: {}, d_min {:.3} km), report in {}",
                report.objective,
                report.feasible,
                report.d_min_km,
                common.out.display()
            );
            Ok(if report.feasible { 0 } else { 1 })
        }
        Command::Report { run_dir } => {
            let text = cmd_report(&run_dir)?;
            print!("{text}");
            Ok(0)
        }
        Command::Constraints { action } => match action {
            ConstraintsAction::Dump(args) => {
                let s = load_scenario(&args)?;
                print!("{}", cmd_constraints_dump(&s)?);
                Ok(0)
            }
        },
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
