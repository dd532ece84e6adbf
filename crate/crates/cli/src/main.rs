//! `polyconic`: reproducible experiments on polyellipses and generalized
//! conics. Every subcommand reads a JSON scene, writes CSV/JSON (and with
//! `--svg`, SVG) files into `--out`, and exits with
//! 0 when every check passes, 1 on invalid input, 2 on numerical failure
//! and 3 when a checked property is violated.

mod commands;
mod error;
mod output;
mod scene;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::commands::Context;
use crate::error::CliError;
use crate::output::OutDir;
use crate::scene::{Overrides, SceneFile, Settings};

const THREADS_ENV: &str = "POLYCONIC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "polyconic", version, about = "Polyellipses, Fermat-Weber points and generalized conics")]
#[command(after_help = "Environment: POLYCONIC_THREADS caps the worker threads.\n\
Exit codes: 0 pass, 1 invalid input, 2 numerical failure, 3 property violation.")]
struct Cli {
    /// Scene file (JSON, `"version": 1`).
    #[arg(long, global = true, value_name = "PATH")]
    scene: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Seed for randomized experiments (ChaCha8 stream).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Also write SVG drawings.
    #[arg(long, global = true)]
    svg: bool,
    /// Root tolerance of level tracing, relative to the total weight.
    #[arg(long, global = true, value_name = "TOL")]
    tol_root: Option<f64>,
    /// Absolute tolerance of curve quadrature.
    #[arg(long, global = true, value_name = "TOL")]
    tol_quad: Option<f64>,
    /// Rays per traced curve.
    #[arg(long, global = true, value_name = "N")]
    rays: Option<usize>,
    /// Record wall-clock time in report.json (makes reports run-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Trace the level curves of the scene's focal set.
    ///
    /// Writes level_<i>.csv per level with columns theta,x,y,F: ray angle
    /// around the minimizer, vertex, and distance sum at the vertex.
    Trace,
    /// Certified Fermat-Weber point of the scene's focal set.
    Minimize,
    /// Hausdorff distance between two compact sets.
    ///
    /// Takes the scene's two `sets`, or two files: CSV files with x,y columns
    /// (closed polylines) or scenes (first set, else traced level curve).
    Hausdorff {
        #[arg(value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Dihedral symmetrization of a polyellipse around the scene polygon.
    ///
    /// Writes symmetrized.json, a scene holding the orbit and the level
    /// through the polygon's vertices.
    Symmetrize,
    /// Randomized sweep of the curvature floor at the edge-midpoint point.
    ///
    /// Writes theorem_check.csv with columns instance,status,p,level,
    /// kappa_measured,kappa_floor,d1f_measured,d1f_upper,d2d2f_measured,
    /// d2d2f_lower,q_x,q_y,q_in_unit_disk,q_clear_of_focuses,valid,holds.
    /// Exits 3 if a valid report falls below the floor.
    TheoremCheck,
    /// Midpoint polyellipse approximations of a generalized conic.
    ///
    /// Writes conic.csv and polyellipse_m<M>.csv (theta,x,y,F), and
    /// convergence.csv (m,uniform_bound,max_deviation,hausdorff,within_bound).
    /// With experiment.polygon_error = [p_min, p_max] and a circle curve,
    /// also polygon_error.csv (p,formula,polygon_to_curve,
    /// polygon_to_polyellipse,bound,ok).
    Conic,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV}={value} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(format!("{THREADS_ENV}: {e}")))
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    let started = Instant::now();
    configure_threads()?;
    let overrides = Overrides { seed: cli.seed, tol_root: cli.tol_root, tol_quad: cli.tol_quad, rays: cli.rays };
    let scene = cli.scene.as_deref().map(SceneFile::load).transpose()?;
    let settings: Settings = match &scene {
        Some(s) => s.settings(&overrides)?,
        None => SceneFile::parse(r#"{"version": 1}"#)?.settings(&overrides)?,
    };
    let mut ctx = Context {
        scene,
        scene_path: cli.scene.as_ref().map(|p| p.display().to_string()),
        settings,
        out: OutDir::create(&cli.out)?,
        svg: cli.svg,
        started: cli.timing.then_some(started),
    };
    match &cli.command {
        Command::Trace => commands::trace(&mut ctx),
        Command::Minimize => commands::minimize_cmd(&mut ctx),
        Command::Hausdorff { files } => commands::hausdorff(&mut ctx, files),
        Command::Symmetrize => commands::symmetrize(&mut ctx),
        Command::TheoremCheck => commands::theorem_check(&mut ctx),
        Command::Conic => commands::conic(&mut ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(outcome) if outcome.pass => {
            println!("{}", outcome.message);
            ExitCode::SUCCESS
        }
        Ok(outcome) => {
            let e = CliError::Violation(outcome.message);
            eprintln!("check failed: {e}");
            e.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
