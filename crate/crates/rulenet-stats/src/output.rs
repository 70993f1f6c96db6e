//! CSV and JSON file formats.
//!
//! Every CSV starts with a `schema_version` column and every JSON object
//! carries a `schema_version` key. Floats are written with 17 significant
//! digits so that values round-trip bit-exactly; missing values are empty
//! fields (CSV) or `null` (JSON).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::{Comparison, LevelPrediction, StatsError, StatsReport, TransitionScan};

pub const SCHEMA_VERSION: u32 = 1;

/// Column layout of one CSV file kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: &'static str,
    /// Columns after `schema_version`.
    pub columns: &'static [&'static str],
}

pub const LEVELS: Schema = Schema {
    name: "levels",
    columns: &[
        "level",
        "mean_V",
        "mean_prim",
        "mean_logV",
        "surviving_runs",
        "log_mean_V",
        "se_V",
        "se_prim",
        "log_growth",
    ],
};
pub const HEIGHTS: Schema = Schema {
    name: "heights",
    columns: &["height", "count", "censored"],
};
pub const PREDICTIONS: Schema = Schema {
    name: "predictions",
    columns: &["level", "plain", "k0", "k1", "primitives"],
};
pub const RATIOS: Schema = Schema {
    name: "ratios",
    columns: &[
        "level",
        "empirical",
        "plain",
        "k0",
        "k1",
        "ratio_plain",
        "ratio_k0",
        "ratio_k1",
    ],
};
pub const PHASES: Schema = Schema {
    name: "phases",
    columns: &[
        "z",
        "psi",
        "phi",
        "phase",
        "n0",
        "n0p",
        "m0",
        "m0p",
        "empty_prob",
    ],
};
pub const EXTINCTION: Schema = Schema {
    name: "extinction",
    columns: &[
        "n",
        "u0n",
        "lower",
        "upper",
        "regime",
        "monte_carlo",
        "stderr",
    ],
};
pub const LOGSIZE: Schema = Schema {
    name: "logsize",
    columns: &[
        "n",
        "mean_logZ",
        "log_meanZ",
        "harmonic",
        "relative_gap",
        "survival",
    ],
};
pub const COMPONENTS: Schema = Schema {
    name: "components",
    columns: &["level", "isolated", "two_molecule", "open_flagged"],
};
pub const SCAN: Schema = Schema {
    name: "scan",
    columns: &[
        "z",
        "runs",
        "extinct",
        "censored",
        "budget_exceeded",
        "class",
    ],
};

/// One CSV field.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    OptFloat(Option<f64>),
    OptInt(Option<i64>),
    Bool(bool),
    Str(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::OptFloat(v) => v.map(fmt_float).unwrap_or_default(),
            Cell::OptInt(v) => v.map(|x| x.to_string()).unwrap_or_default(),
            Cell::Bool(v) => u8::from(*v).to_string(),
            Cell::Str(s) => s.clone(),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::OptFloat(v)
    }
}
impl From<Option<u32>> for Cell {
    fn from(v: Option<u32>) -> Self {
        Cell::OptInt(v.map(i64::from))
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_owned())
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn write_csv(
    path: &Path,
    schema: &Schema,
    rows: impl IntoIterator<Item = Vec<Cell>>,
) -> Result<(), StatsError> {
    let mut w = csv::Writer::from_path(path)?;
    write_rows(&mut w, schema, rows)?;
    w.flush()?;
    Ok(())
}

/// CSV text of `rows`, as [`write_csv`] would write it.
pub fn csv_string(
    schema: &Schema,
    rows: impl IntoIterator<Item = Vec<Cell>>,
) -> Result<String, StatsError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write_rows(&mut w, schema, rows)?;
    let bytes = w.into_inner().map_err(|e| StatsError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("cells are UTF-8"))
}

fn write_rows<W: Write>(
    w: &mut csv::Writer<W>,
    schema: &Schema,
    rows: impl IntoIterator<Item = Vec<Cell>>,
) -> Result<(), StatsError> {
    let mut header = vec!["schema_version"];
    header.extend_from_slice(schema.columns);
    w.write_record(&header)?;
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != schema.columns.len() {
            return Err(StatsError::Schema(format!(
                "{} row {i} has {} cells",
                schema.name,
                row.len()
            )));
        }
        let mut rec = vec![SCHEMA_VERSION.to_string()];
        rec.extend(row.iter().map(Cell::render));
        w.write_record(&rec)?;
    }
    Ok(())
}

/// Parsed CSV rows keyed by the schema's column order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub schema: Schema,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn col(&self, name: &str) -> Result<usize, StatsError> {
        self.schema
            .columns
            .iter()
            .position(|c| *c == name)
            .ok_or_else(|| StatsError::Schema(format!("{} has no column {name}", self.schema.name)))
    }

    pub fn f64s(&self, name: &str) -> Result<Vec<f64>, StatsError> {
        self.opt_f64s(name)?
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    StatsError::Schema(format!("{} row {i}: empty {name}", self.schema.name))
                })
            })
            .collect()
    }

    pub fn opt_f64s(&self, name: &str) -> Result<Vec<Option<f64>>, StatsError> {
        let c = self.col(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let s = r[c].trim();
                if s.is_empty() {
                    return Ok(None);
                }
                s.parse::<f64>().map(Some).map_err(|_| {
                    StatsError::Schema(format!("{} row {i}: bad {name} {s:?}", self.schema.name))
                })
            })
            .collect()
    }

    pub fn u32s(&self, name: &str) -> Result<Vec<u32>, StatsError> {
        let c = self.col(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r[c].trim().parse::<u32>().map_err(|_| {
                    StatsError::Schema(format!(
                        "{} row {i}: bad {name} {:?}",
                        self.schema.name, r[c]
                    ))
                })
            })
            .collect()
    }
}

/// Reads a CSV written with `schema`, rejecting other headers and versions.
pub fn read_csv(path: &Path, schema: &Schema) -> Result<Table, StatsError> {
    read_csv_from(File::open(path)?, schema)
}

pub fn read_csv_from(reader: impl std::io::Read, schema: &Schema) -> Result<Table, StatsError> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    let mut want = vec!["schema_version".to_owned()];
    want.extend(schema.columns.iter().map(|c| (*c).to_owned()));
    if header != want {
        return Err(StatsError::Schema(format!(
            "{}: header {header:?} does not match {want:?}",
            schema.name
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let version = &rec[0];
        if version != SCHEMA_VERSION.to_string() {
            return Err(StatsError::Schema(format!(
                "{} row {i}: unknown schema_version {version:?}",
                schema.name
            )));
        }
        rows.push(rec.iter().skip(1).map(str::to_owned).collect());
    }
    Ok(Table {
        schema: *schema,
        rows,
    })
}

/// Serializes `value` (an object) with a leading `schema_version` key.
pub fn json_string<T: Serialize>(value: &T) -> Result<String, StatsError> {
    let mut v = serde_json::to_value(value)?;
    match &mut v {
        Value::Object(map) => {
            map.insert("schema_version".into(), SCHEMA_VERSION.into());
        }
        _ => return Err(StatsError::Schema("JSON outputs must be objects".into())),
    }
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), StatsError> {
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(json_string(value)?.as_bytes())?;
    f.flush()?;
    Ok(())
}

/// Parses a JSON output and checks its `schema_version`.
pub fn read_json(path: &Path) -> Result<Value, StatsError> {
    let v: Value = serde_json::from_reader(File::open(path)?)?;
    match v.get("schema_version").and_then(Value::as_u64) {
        Some(x) if x == u64::from(SCHEMA_VERSION) => Ok(v),
        other => Err(StatsError::Schema(format!(
            "unknown schema_version {other:?}"
        ))),
    }
}

pub fn levels_rows(report: &StatsReport) -> Vec<Vec<Cell>> {
    report
        .levels
        .iter()
        .map(|l| {
            vec![
                l.level.into(),
                l.mean_v.into(),
                l.mean_prim.into(),
                l.mean_log_v.into(),
                l.surviving_runs.into(),
                l.log_mean_v.into(),
                l.se_v.into(),
                l.se_prim.into(),
                l.log_growth.into(),
            ]
        })
        .collect()
}

pub fn heights_rows(report: &StatsReport) -> Vec<Vec<Cell>> {
    report
        .heights
        .iter()
        .map(|h| vec![h.height.into(), h.count.into(), h.censored.into()])
        .collect()
}

/// Scalar part of a [`StatsReport`] for `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary<'a> {
    pub kind: rulenet_core::Kind,
    pub sample_size: u64,
    pub n_max: u32,
    pub master_seed: u64,
    pub n0: u32,
    pub n0_prime: Option<u32>,
    pub m0: u32,
    pub m0_prime: Option<u32>,
    pub censored: u64,
    pub mean_height: f64,
    pub extinction_cdf: &'a [f64],
    pub jensen_violations: Vec<u32>,
}

impl<'a> Summary<'a> {
    pub fn of(r: &'a StatsReport) -> Self {
        Self {
            kind: r.kind,
            sample_size: r.sample_size,
            n_max: r.n_max,
            master_seed: r.master_seed,
            n0: r.n0,
            n0_prime: r.n0_prime,
            m0: r.m0,
            m0_prime: r.m0_prime,
            censored: r.censored,
            mean_height: r.mean_height,
            extinction_cdf: &r.extinction_cdf,
            jensen_violations: r.jensen_violations(),
        }
    }
}

/// Writes `levels.csv`, `heights.csv` and `summary.json` into `dir`.
pub fn write_stats_report(dir: &Path, report: &StatsReport) -> Result<(), StatsError> {
    write_csv(&dir.join("levels.csv"), &LEVELS, levels_rows(report))?;
    write_csv(&dir.join("heights.csv"), &HEIGHTS, heights_rows(report))?;
    write_json(&dir.join("summary.json"), &Summary::of(report))
}

pub fn predictions_rows(preds: &[LevelPrediction]) -> Vec<Vec<Cell>> {
    preds
        .iter()
        .map(|p| {
            vec![
                p.level.into(),
                p.plain.into(),
                p.k0.into(),
                p.k1.into(),
                p.primitives.into(),
            ]
        })
        .collect()
}

pub fn read_predictions(table: &Table) -> Result<Vec<LevelPrediction>, StatsError> {
    let level = table.u32s("level")?;
    let plain = table.f64s("plain")?;
    let k0 = table.f64s("k0")?;
    let k1 = table.opt_f64s("k1")?;
    let prim = table.f64s("primitives")?;
    Ok((0..level.len())
        .map(|i| LevelPrediction {
            level: level[i],
            plain: plain[i],
            k0: k0[i],
            k1: k1[i],
            primitives: prim[i],
        })
        .collect())
}

pub fn ratios_rows(c: &Comparison) -> Vec<Vec<Cell>> {
    c.rows
        .iter()
        .map(|r| {
            vec![
                r.level.into(),
                r.empirical.into(),
                r.plain.into(),
                r.k0.into(),
                r.k1.into(),
                r.ratio_plain.into(),
                r.ratio_k0.into(),
                r.ratio_k1.into(),
            ]
        })
        .collect()
}

pub fn scan_rows(s: &TransitionScan) -> Vec<Vec<Cell>> {
    s.points
        .iter()
        .map(|p| {
            let class = match p.class {
                crate::ScanClass::Finite => "finite",
                crate::ScanClass::Exploding => "exploding",
            };
            vec![
                p.z.into(),
                p.runs.into(),
                p.extinct.into(),
                p.censored.into(),
                p.budget_exceeded.into(),
                class.into(),
            ]
        })
        .collect()
}
