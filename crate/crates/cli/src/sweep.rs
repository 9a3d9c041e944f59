use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use wavetrain::validate::check_nesting;
use wavetrain::{Potential, SolveConfig64};

use crate::files::num;
use crate::solve::{run_point, Outcome, Point};

/// Built-in parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// gamma = 10, k = 0.1, exp_decay
    Ex1,
    /// gamma = 50, k in {0.1, 0.3, 0.5}, quartic
    Ex2,
    /// gamma in {0.1, 3, 12, 30, 60, 100}, k = 0.1, saturating
    Ex3,
}

pub const PRESET_NODES: usize = 800;

impl Preset {
    pub fn grid(self) -> (Vec<f64>, Vec<f64>, Potential) {
        match self {
            Self::Ex1 => (vec![10.0], vec![0.1], Potential::ExpDecay),
            Self::Ex2 => (vec![50.0], vec![0.1, 0.3, 0.5], Potential::Quartic),
            Self::Ex3 => (
                vec![0.1, 3.0, 12.0, 30.0, 60.0, 100.0],
                vec![0.1],
                Potential::Saturating,
            ),
        }
    }
}

pub struct Plan {
    pub gammas: Vec<f64>,
    pub ks: Vec<f64>,
    pub template: Point,
    pub nesting: bool,
    pub out: PathBuf,
    pub jobs: Option<usize>,
}

pub fn dir_name(gamma: f64, k: f64) -> String {
    format!("gamma_{gamma}_k_{k}")
}

struct Row {
    point: Point,
    dir: PathBuf,
    cfg: SolveConfig64,
}

/// Runs every `(gamma, k)` point; returns whether all of them converged.
pub fn run(plan: Plan) -> Result<bool> {
    if plan.gammas.is_empty() || plan.ks.is_empty() {
        bail!("empty parameter list");
    }
    let mut pairs: Vec<(f64, f64)> = plan
        .gammas
        .iter()
        .flat_map(|&g| plan.ks.iter().map(move |&k| (g, k)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pairs.dedup();

    // validate everything before any work starts
    let rows = pairs
        .into_iter()
        .map(|(gamma, k)| {
            let point = Point {
                gamma,
                k,
                ..plan.template.clone()
            };
            let cfg = point
                .config()
                .with_context(|| format!("gamma = {gamma}, k = {k}"))?;
            Ok(Row {
                dir: plan.out.join(dir_name(gamma, k)),
                point,
                cfg,
            })
        })
        .collect::<Result<Vec<Row>>>()?;

    fs::create_dir_all(&plan.out).with_context(|| format!("creating {}", plan.out.display()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.jobs.unwrap_or(0))
        .build()?;
    let outcomes = pool.install(|| {
        rows.par_iter()
            .map(|r| run_point(&r.point, &r.cfg, &r.dir, "sweep"))
            .collect::<Result<Vec<Outcome>>>()
    })?;

    let nesting = if plan.nesting {
        Some(nesting_by_k(&outcomes)?)
    } else {
        None
    };
    write_summary(&plan.out, &rows, &outcomes, nesting.as_ref())?;
    Ok(outcomes.iter().all(|o| o.converged))
}

/// Nesting verdict for every wave number that has at least two traces.
fn nesting_by_k(outcomes: &[Outcome]) -> Result<BTreeMap<usize, bool>> {
    let mut groups: BTreeMap<usize, Vec<_>> = BTreeMap::new();
    for o in outcomes {
        groups
            .entry(o.wave.k.shift())
            .or_default()
            .push(o.trace.clone());
    }
    let mut verdicts = BTreeMap::new();
    for (p, traces) in groups {
        if traces.len() >= 2 {
            verdicts.insert(p, check_nesting(&traces)?);
        }
    }
    Ok(verdicts)
}

fn write_summary(
    out: &Path,
    rows: &[Row],
    outcomes: &[Outcome],
    nesting: Option<&BTreeMap<usize, bool>>,
) -> Result<()> {
    let path = out.join("summary.csv");
    let mut w =
        csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
    let mut header = vec![
        "gamma",
        "k",
        "omega2",
        "residual_sup",
        "iterations",
        "in_cone",
        "converged",
        "dir",
    ];
    if nesting.is_some() {
        header.push("nesting");
    }
    w.write_record(&header)?;
    for (r, o) in rows.iter().zip(outcomes) {
        let wave = &o.wave;
        let mut rec = vec![
            num(wave.gamma),
            num(wave.k.k()),
            num(wave.omega2),
            num(wave.residual_sup),
            wave.iterations.to_string(),
            wave.in_cone.to_string(),
            o.converged.to_string(),
            r.dir
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
        ];
        if let Some(verdicts) = nesting {
            rec.push(
                verdicts
                    .get(&wave.k.shift())
                    .map(bool::to_string)
                    .unwrap_or_default(),
            );
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Comma-separated list of reals.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("`{t}` is not a number"))
        })
        .collect()
}
