//! On-disk layout of a run directory: `profile.csv`, `trace.csv`, `meta.json`.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde_json::{Map, Value};
use wavetrain::validate::Trace;
use wavetrain::{PeriodicGrid, Profile, WaveTrain};

pub const PROFILE_FILE: &str = "profile.csv";
pub const TRACE_FILE: &str = "trace.csv";
pub const META_FILE: &str = "meta.json";

pub const PROFILE_HEADER: [&str; 5] = ["phi", "X", "dX", "ddX", "V"];
pub const TRACE_HEADER: [&str; 2] = ["X", "V"];

/// 17 significant digits; parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_profile(dir: &Path, wave: &WaveTrain) -> Result<()> {
    let x = &wave.profile;
    let grid = x.grid();
    let (dx, ddx, v) = (x.derivative(), x.second_difference(), wave.velocity());
    let path = dir.join(PROFILE_FILE);
    let mut w =
        csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(PROFILE_HEADER)?;
    for j in 0..grid.len() {
        let row = [
            grid.node::<f64>(j),
            x.samples()[j],
            dx.samples()[j],
            ddx.samples()[j],
            v.samples()[j],
        ];
        w.write_record(row.map(num))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace(dir: &Path, trace: &Trace) -> Result<()> {
    let path = dir.join(TRACE_FILE);
    let mut w =
        csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(TRACE_HEADER)?;
    for &(x, v) in &trace.points {
        w.write_record([num(x), num(v)])?;
    }
    w.flush()?;
    Ok(())
}

/// A value in the flat manifest.
#[derive(Debug, Clone)]
pub enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Str(String),
}

/// Writes a flat JSON object, keys in the given order. Floats keep 17
/// significant digits, which `serde_json` would otherwise shorten.
pub fn write_meta(dir: &Path, fields: &[(&str, Field)]) -> Result<()> {
    let mut out = String::from("{\n");
    for (i, (key, value)) in fields.iter().enumerate() {
        let rendered = match value {
            Field::Num(x) => {
                ensure!(x.is_finite(), "non-finite value for {key}");
                num(*x)
            }
            Field::Int(n) => n.to_string(),
            Field::Bool(b) => b.to_string(),
            Field::Str(s) => serde_json::to_string(s)?,
        };
        let sep = if i + 1 < fields.len() { "," } else { "" };
        out.push_str(&format!(
            "  {}: {rendered}{sep}\n",
            serde_json::to_string(key)?
        ));
    }
    out.push_str("}\n");
    let path = dir.join(META_FILE);
    fs::write(&path, out).with_context(|| format!("writing {}", path.display()))
}

pub struct Meta(Map<String, Value>);

impl Meta {
    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(META_FILE);
        let text =
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        match serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))? {
            Value::Object(map) => Ok(Self(map)),
            _ => bail!("{} is not a JSON object", path.display()),
        }
    }

    fn get(&self, key: &str) -> Result<&Value> {
        self.0
            .get(key)
            .with_context(|| format!("meta.json is missing `{key}`"))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        self.get(key)?
            .as_f64()
            .with_context(|| format!("meta.json `{key}` is not a number"))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let n = self
            .get(key)?
            .as_u64()
            .with_context(|| format!("meta.json `{key}` is not an integer"))?;
        Ok(usize::try_from(n)?)
    }

    pub fn bool(&self, key: &str) -> Result<bool> {
        self.get(key)?
            .as_bool()
            .with_context(|| format!("meta.json `{key}` is not a boolean"))
    }

    pub fn str(&self, key: &str) -> Result<&str> {
        self.get(key)?
            .as_str()
            .with_context(|| format!("meta.json `{key}` is not a string"))
    }
}

fn parse_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let found: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    ensure!(
        found == header,
        "{}: expected header {}, found {}",
        path.display(),
        header.join(","),
        found.join(",")
    );
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.with_context(|| format!("{}: row {}", path.display(), i + 1))?;
        let row = record
            .iter()
            .map(|f| f.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .with_context(|| {
                format!("{}: row {} has a non-numeric field", path.display(), i + 1)
            })?;
        rows.push(row);
    }
    Ok(rows)
}

/// Columns of `profile.csv`.
pub struct ProfileTable {
    pub phi: Vec<f64>,
    pub x: Vec<f64>,
    pub dx: Vec<f64>,
    pub ddx: Vec<f64>,
    pub v: Vec<f64>,
}

impl ProfileTable {
    pub fn read(dir: &Path) -> Result<Self> {
        let rows = parse_rows(&dir.join(PROFILE_FILE), &PROFILE_HEADER)?;
        let col = |c: usize| rows.iter().map(|r| r[c]).collect::<Vec<f64>>();
        Ok(Self {
            phi: col(0),
            x: col(1),
            dx: col(2),
            ddx: col(3),
            v: col(4),
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }
}

pub fn read_trace(dir: &Path) -> Result<Vec<(f64, f64)>> {
    Ok(parse_rows(&dir.join(TRACE_FILE), &TRACE_HEADER)?
        .into_iter()
        .map(|r| (r[0], r[1]))
        .collect())
}

/// Reads an initial profile: either a `profile.csv` from an earlier run
/// (the `X` column is used) or a headerless single column of samples.
pub fn read_initial(path: &Path, grid: PeriodicGrid) -> Result<Profile> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut column = None;
    let mut samples = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.with_context(|| format!("{}: row {}", path.display(), i + 1))?;
        if i == 0 && record.iter().any(|f| f.trim().parse::<f64>().is_err()) {
            column = Some(
                record
                    .iter()
                    .position(|f| f.trim() == "X")
                    .with_context(|| format!("{}: header has no `X` column", path.display()))?,
            );
            continue;
        }
        let c = match column {
            Some(c) => c,
            None if record.len() == 1 => 0,
            None => bail!(
                "{}: several columns but no header naming `X`",
                path.display()
            ),
        };
        let field = record
            .get(c)
            .with_context(|| format!("{}: row {} is short", path.display(), i + 1))?;
        let v: f64 = field.trim().parse().with_context(|| {
            format!(
                "{}: row {}: `{field}` is not a number",
                path.display(),
                i + 1
            )
        })?;
        samples.push(v);
    }
    ensure!(
        samples.len() == grid.len(),
        "{} holds {} samples but --N is {}",
        path.display(),
        samples.len(),
        grid.len()
    );
    Ok(Profile::new(grid, samples)?)
}
