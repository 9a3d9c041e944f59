//! `wavetrain`: solve, sweep and validate periodic travelling waves of
//! Klein-Gordon chains.
//!
//! Exit codes: 0 success, 1 invalid input or I/O failure, 2 the iteration
//! hit `--max-iter` (outputs are still written), 3 a validation check failed.

mod check;
mod files;
mod solve;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use wavetrain::solver::{DEFAULT_MAX_ITER, DEFAULT_TOL_FIXEDPOINT};
use wavetrain::Potential;

use crate::check::Check;
use crate::solve::Point;
use crate::sweep::Preset;

#[derive(Parser)]
#[command(
    name = "wavetrain",
    version,
    about = "Periodic travelling waves in Klein-Gordon chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for a single wave train.
    Solve(SolveArgs),
    /// Solve a grid of (gamma, k) points.
    Sweep(SweepArgs),
    /// Check a stored solve directory against the independent oracles.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SolverFlags {
    /// Fixed-point tolerance (relative to sqrt(2 gamma)).
    #[arg(long, default_value_t = DEFAULT_TOL_FIXEDPOINT)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// `cosine`, or a CSV file with an `X` column (e.g. an earlier profile.csv).
    #[arg(long, default_value = "cosine")]
    initial: String,
}

impl SolverFlags {
    fn initial(&self) -> Option<PathBuf> {
        (self.initial != "cosine").then(|| PathBuf::from(&self.initial))
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Kinetic constraint level.
    #[arg(long)]
    gamma: f64,
    /// Wave number; k * N must be an integer.
    #[arg(long)]
    k: f64,
    /// Grid size (even, at least 8).
    #[arg(long = "N")]
    n: usize,
    /// harmonic:c=<value>, exp_decay, quartic or saturating.
    #[arg(long, value_parser = parse_potential)]
    potential: Potential,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, default_value = "wavetrain_out")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, conflicts_with_all = ["gamma_list", "k_list", "potential"])]
    preset: Option<Preset>,
    /// Comma-separated gamma values.
    #[arg(long)]
    gamma_list: Option<String>,
    /// Comma-separated wave numbers.
    #[arg(long)]
    k_list: Option<String>,
    /// Grid size; presets default to 800.
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long, value_parser = parse_potential)]
    potential: Option<Potential>,
    #[command(flatten)]
    solver: SolverFlags,
    /// Check that the phase-plane traces of each k are nested (always on for ex3).
    #[arg(long)]
    nesting: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value = "sweep_out")]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// Directory written by `solve`.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "residual,trace")]
    checks: Vec<Check>,
    /// Chain length for the lattice simulation.
    #[arg(long = "J", default_value_t = 40)]
    particles: usize,
    /// Simulated time (default: one temporal period 1/omega).
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 1e-3)]
    residual_tol: f64,
}

fn parse_potential(s: &str) -> Result<Potential, String> {
    s.parse().map_err(|e: wavetrain::Error| e.to_string())
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let point = Point {
        gamma: args.gamma,
        k: args.k,
        nodes: args.n,
        potential: args.potential,
        tol: args.solver.tol,
        max_iter: args.solver.max_iter,
        initial: args.solver.initial(),
    };
    let cfg = point.config()?;
    let out = solve::run_point(&point, &cfg, &args.out, "solve")?;
    let w = &out.wave;
    println!(
        "omega2 = {:.12e}  xhat = {:.6e}  residual = {:.3e}  iterations = {}  in_cone = {}",
        w.omega2, w.xhat, w.residual_sup, w.iterations, w.in_cone
    );
    if out.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("warning: no convergence within {} iterations", cfg.max_iter);
        Ok(ExitCode::from(2))
    }
}

fn sweep(args: SweepArgs) -> Result<ExitCode> {
    let (gammas, ks, potential, nesting) = match args.preset {
        Some(preset) => {
            let (g, k, p) = preset.grid();
            (g, k, p, args.nesting || preset == Preset::Ex3)
        }
        None => {
            let (Some(g), Some(k), Some(p)) = (&args.gamma_list, &args.k_list, args.potential)
            else {
                bail!(
                    "either --preset or all of --gamma-list, --k-list and --potential are required"
                );
            };
            (
                sweep::parse_list(g)?,
                sweep::parse_list(k)?,
                p,
                args.nesting,
            )
        }
    };
    let nodes = match (args.n, args.preset) {
        (Some(n), _) => n,
        (None, Some(_)) => sweep::PRESET_NODES,
        (None, None) => bail!("--N is required without --preset"),
    };
    let template = Point {
        gamma: 0.0,
        k: 0.0,
        nodes,
        potential,
        tol: args.solver.tol,
        max_iter: args.solver.max_iter,
        initial: args.solver.initial(),
    };
    let out = args.out.clone();
    let all_converged = sweep::run(sweep::Plan {
        gammas,
        ks,
        template,
        nesting,
        out,
        jobs: args.jobs,
    })?;
    println!("wrote {}", args.out.join("summary.csv").display());
    Ok(if all_converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn validate(args: ValidateArgs) -> Result<ExitCode> {
    let settings = check::Settings {
        checks: args.checks,
        particles: args.particles,
        t_end: args.t_end,
        dt: args.dt,
        residual_tol: args.residual_tol,
    };
    let passed = check::run(&args.input, &settings)?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are invalid input; --help and --version are not errors
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Validate(a) => validate(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    })
}
