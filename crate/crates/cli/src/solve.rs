use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use wavetrain::validate::{build_trace, Trace};
use wavetrain::{solve, Potential, SolveConfig64, WaveTrain};

use crate::files::{self, Field};

/// One parameter point and its solver settings.
#[derive(Debug, Clone)]
pub struct Point {
    pub gamma: f64,
    pub k: f64,
    pub nodes: usize,
    pub potential: Potential,
    pub tol: f64,
    pub max_iter: usize,
    /// `None` starts from the cosine.
    pub initial: Option<PathBuf>,
}

impl Point {
    /// Builds the solver configuration; reports every invalid input up front.
    pub fn config(&self) -> Result<SolveConfig64> {
        let mut cfg = SolveConfig64::new(self.gamma, self.k, self.nodes, self.potential)?
            .with_tol(self.tol)
            .with_max_iter(self.max_iter);
        if let Some(path) = &self.initial {
            // the mean is irrelevant (it is absorbed by x_hat), so drop it
            let x = files::read_initial(path, cfg.grid)?.mean_projected();
            cfg = cfg.with_initial(x);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub struct Outcome {
    pub wave: WaveTrain,
    pub converged: bool,
    pub trace: Trace,
}

fn unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// Solves one point and writes its run directory.
pub fn run_point(point: &Point, cfg: &SolveConfig64, dir: &Path, command: &str) -> Result<Outcome> {
    let started = unix_ms();
    let sol = solve(cfg)?;
    let finished = unix_ms();
    let converged = sol.converged();
    let wave = sol.wave;
    let trace = build_trace(&wave);

    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    files::write_profile(dir, &wave)?;
    files::write_trace(dir, &trace)?;
    let initial = match &point.initial {
        Some(p) => p.display().to_string(),
        None => "cosine".into(),
    };
    let e = wave.energy;
    files::write_meta(
        dir,
        &[
            ("gamma", Field::Num(wave.gamma)),
            ("k", Field::Num(wave.k.k())),
            ("N", Field::Int(cfg.grid.len() as u64)),
            ("potential", Field::Str(point.potential.to_string())),
            ("omega2", Field::Num(wave.omega2)),
            ("xhat", Field::Num(wave.xhat)),
            ("residual_sup", Field::Num(wave.residual_sup)),
            ("gamma_actual", Field::Num(wave.gamma_actual)),
            ("iterations", Field::Int(wave.iterations as u64)),
            ("converged", Field::Bool(converged)),
            ("in_cone", Field::Bool(wave.in_cone)),
            ("coupling", Field::Num(e.coupling)),
            ("onsite", Field::Num(e.onsite)),
            ("total", Field::Num(e.total)),
            ("command", Field::Str(command.into())),
            ("k_requested", Field::Num(point.k)),
            ("tol_fixedpoint", Field::Num(cfg.tol_fixedpoint)),
            ("tol_xhat", Field::Num(cfg.tol_xhat)),
            ("max_iter", Field::Int(cfg.max_iter as u64)),
            ("initial", Field::Str(initial)),
            ("started_unix_ms", Field::Int(started)),
            ("finished_unix_ms", Field::Int(finished)),
            ("profile_csv", Field::Str(files::PROFILE_FILE.into())),
            ("trace_csv", Field::Str(files::TRACE_FILE.into())),
        ],
    )?;
    Ok(Outcome {
        wave,
        converged,
        trace,
    })
}
