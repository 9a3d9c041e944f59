use std::path::Path;

use anyhow::{ensure, Context, Result};
use wavetrain::validate::{build_trace, check_k0, simulate_chain};
use wavetrain::{ChainRun, PeriodicGrid, Potential, Profile, WaveNumber, WaveTrain};

use crate::files::{self, Meta, ProfileTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    Residual,
    K0,
    Chain,
    Trace,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub checks: Vec<Check>,
    pub particles: usize,
    pub t_end: Option<f64>,
    pub dt: f64,
    pub residual_tol: f64,
}

pub struct Row {
    pub name: &'static str,
    pub pass: bool,
    pub value: String,
    pub limit: String,
}

pub struct Stored {
    pub wave: WaveTrain,
    pub potential: Potential,
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + scale)
}

fn same_column(name: &str, stored: &[f64], fresh: &[f64]) -> Result<()> {
    let scale = fresh.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (j, (&a, &b)) in stored.iter().zip(fresh).enumerate() {
        ensure!(
            close(a, b, scale),
            "{name} at row {} is {a} but the samples give {b}",
            j + 1
        );
    }
    Ok(())
}

/// Loads a run directory and checks that every stored quantity agrees with
/// what the stored profile implies.
pub fn load(dir: &Path) -> Result<Stored> {
    let meta = Meta::read(dir)?;
    let table = ProfileTable::read(dir)?;
    let n = meta.usize("N")?;
    ensure!(
        table.len() == n,
        "profile.csv has {} rows but N = {n}",
        table.len()
    );
    let grid = PeriodicGrid::new(n)?;
    let k = WaveNumber::new(meta.f64("k")?, grid)?;
    let potential: Potential = meta.str("potential")?.parse()?;
    let omega2 = meta.f64("omega2")?;
    ensure!(omega2 > 0.0, "omega2 must be positive, found {omega2}");

    for (j, &phi) in table.phi.iter().enumerate() {
        ensure!(
            close(phi, grid.node(j), 0.0),
            "phi at row {} is {phi}, expected {}",
            j + 1,
            grid.node::<f64>(j)
        );
    }
    let x = Profile::new(grid, table.x.clone())?;
    let wave = WaveTrain::assemble(
        x,
        meta.f64("xhat")?,
        omega2,
        meta.f64("gamma")?,
        k,
        meta.usize("iterations")?,
        &potential,
    );
    same_column("dX", &table.dx, wave.profile.derivative().samples())?;
    same_column(
        "ddX",
        &table.ddx,
        wave.profile.second_difference().samples(),
    )?;
    same_column("V", &table.v, wave.velocity().samples())?;

    let e = wave.energy;
    for (key, fresh) in [
        ("residual_sup", wave.residual_sup),
        ("gamma_actual", wave.gamma_actual),
        ("coupling", e.coupling),
        ("onsite", e.onsite),
        ("total", e.total),
    ] {
        let stored = meta.f64(key)?;
        ensure!(
            close(stored, fresh, fresh.abs()),
            "meta.json {key} = {stored} but the profile gives {fresh}"
        );
    }
    ensure!(
        meta.bool("in_cone")? == wave.in_cone,
        "meta.json in_cone disagrees with the profile"
    );

    let trace = files::read_trace(dir)?;
    ensure!(
        trace.len() == n,
        "trace.csv has {} rows but N = {n}",
        trace.len()
    );
    let fresh = build_trace(&wave);
    let (xs, vs): (Vec<f64>, Vec<f64>) = trace.into_iter().unzip();
    let (fx, fv): (Vec<f64>, Vec<f64>) = fresh.points.into_iter().unzip();
    same_column("trace X", &xs, &fx)?;
    same_column("trace V", &vs, &fv)?;
    Ok(Stored { wave, potential })
}

fn row(name: &'static str, pass: bool, value: String, limit: String) -> Row {
    Row {
        name,
        pass,
        value,
        limit,
    }
}

pub fn run_checks(stored: &Stored, s: &Settings) -> Vec<Row> {
    let wave = &stored.wave;
    let p = &stored.potential;
    let mut rows = Vec::new();
    for &check in &s.checks {
        match check {
            Check::Residual => {
                let r = wave.residual_sup;
                rows.push(row(
                    "residual",
                    r <= s.residual_tol,
                    format!("{r:.3e}"),
                    format!("<= {:.1e}", s.residual_tol),
                ));
            }
            Check::K0 => match check_k0(wave, p) {
                Ok(r) => {
                    rows.push(row(
                        "k0 energy",
                        r.energy_variation <= 1e-3,
                        format!("{:.3e}", r.energy_variation),
                        "<= 1e-3".into(),
                    ));
                    rows.push(row(
                        "k0 period",
                        r.period_mismatch <= 1e-3,
                        format!("{:.3e}", r.period_mismatch),
                        "<= 1e-3".into(),
                    ));
                }
                Err(e) => rows.push(row("k0", false, "error".into(), e.to_string())),
            },
            Check::Chain => {
                let run = ChainRun {
                    particles: s.particles,
                    t_end: s.t_end.unwrap_or(1.0 / wave.omega()),
                    dt: s.dt,
                };
                match simulate_chain(wave, p, run) {
                    Ok(r) => {
                        // the linear chain carries the wave exactly up to interpolation error
                        let budget = if matches!(p, Potential::Harmonic { .. }) {
                            1e-3
                        } else {
                            1e-2
                        };
                        let amplitude = wave.profile.sup_norm();
                        let rel = if amplitude > 0.0 {
                            r.max_deviation / amplitude
                        } else {
                            r.max_deviation
                        };
                        rows.push(row(
                            "chain deviation",
                            rel <= budget,
                            format!("{rel:.3e}"),
                            format!("<= {budget:.0e} * amplitude"),
                        ));
                        rows.push(row(
                            "chain energy",
                            r.energy_drift <= 1e-6,
                            format!("{:.3e}", r.energy_drift),
                            "<= 1e-6".into(),
                        ));
                    }
                    Err(e) => rows.push(row("chain", false, "error".into(), e.to_string())),
                }
            }
            Check::Trace => {
                let trace = build_trace(wave);
                let scale = trace
                    .points
                    .iter()
                    .fold(0.0f64, |m, &(x, v)| m.max(x.abs()).max(v.abs()));
                let defect = trace.symmetry_defect();
                let pass = defect <= 1e-12 * (1.0 + scale) && trace.area() > 0.0;
                rows.push(row(
                    "trace symmetry",
                    pass,
                    format!("{defect:.3e}"),
                    "<= 1e-12 * scale".into(),
                ));
            }
        }
    }
    rows
}

pub fn print_table(dir: &Path, rows: &[Row]) {
    println!("{}", dir.display());
    println!("{:<16} {:<6} {:<22} limit", "check", "result", "value");
    for r in rows {
        println!(
            "{:<16} {:<6} {:<22} {}",
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.value,
            r.limit
        );
    }
}

pub fn run(dir: &Path, settings: &Settings) -> Result<bool> {
    ensure!(!settings.checks.is_empty(), "no checks selected");
    let stored =
        load(dir).with_context(|| format!("{} is not a valid run directory", dir.display()))?;
    let rows = run_checks(&stored, settings);
    print_table(dir, &rows);
    Ok(rows.iter().all(|r| r.pass))
}
