//! `key = value` config files merged with command-line overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use rulenet_core::{Alphabet, Foodset, ModelParams, Variant};
use serde::Serialize;

use crate::CliError;

/// Model and run options shared by every subcommand. Each can also be given
/// in the config file under the same name (`A`, `p`, `z_grid`, …).
#[derive(Args, Clone, Debug, Default)]
pub struct RunOpts {
    /// Config file with one `key = value` per line and `#` comments.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model variant: I (z = 1) or II.
    #[arg(long)]
    pub model: Option<String>,
    /// Alphabet size |A|.
    #[arg(long = "A")]
    pub alphabet: Option<u32>,
    /// `atoms`, `single`, or comma-separated words such as `a,ab`.
    #[arg(long)]
    pub foods: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub z: Option<f64>,
    /// `start:stop:step`, inclusive.
    #[arg(long)]
    pub z_grid: Option<String>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub nmax: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-run cap on stored vertices.
    #[arg(long)]
    pub budget: Option<usize>,
}

const KEYS: &[&str] = &[
    "model", "A", "foods", "p", "q", "z", "z_grid", "samples", "nmax", "seed", "out", "budget",
    "threads",
];

/// Parses `key = value` lines. Unknown keys and repeated keys are errors.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(CliError::Config(format!(
                "line {}: unknown key `{k}`",
                i + 1
            )));
        }
        if map.insert(k.to_owned(), v.to_owned()).is_some() {
            return Err(CliError::Config(format!(
                "line {}: duplicate key `{k}`",
                i + 1
            )));
        }
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("invalid value for {key}: `{v}`")))
}

/// Fully merged settings, flags taking precedence over the config file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: ModelParams,
    pub samples: u64,
    pub n_max: u32,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
    pub budget: usize,
    pub z_grid: Option<Vec<f64>>,
    /// `threads` from the config file.
    #[serde(skip)]
    pub threads: Option<usize>,
}

/// Per-subcommand fallbacks for unset options.
#[derive(Clone, Copy, Debug)]
pub struct Defaults {
    pub n_max: u32,
    pub samples: u64,
    /// Model II subcommands that scan `z` still need a base `z`.
    pub default_z: Option<f64>,
    pub budget: usize,
}

impl RunOpts {
    pub fn resolve(&self, defaults: Defaults) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        let get = |k: &str| file.get(k).map(String::as_str);

        let size = match self.alphabet {
            Some(v) => v,
            None => get("A").map(|v| parse("A", v)).transpose()?.unwrap_or(3),
        };
        let alphabet = Alphabet::new(size).map_err(|e| CliError::Config(e.to_string()))?;
        let foods_spec = self
            .foods
            .clone()
            .or_else(|| get("foods").map(str::to_owned))
            .unwrap_or_else(|| "single".into());
        let foodset = parse_foods(&alphabet, &foods_spec)?;

        let pick = |flag: Option<f64>, key: &str| -> Result<Option<f64>, CliError> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => get(key).map(|v| parse(key, v)).transpose(),
            }
        };
        let p = pick(self.p, "p")?.unwrap_or(0.08);
        let q = pick(self.q, "q")?.unwrap_or(0.08);
        let z = pick(self.z, "z")?;
        let model = self
            .model
            .clone()
            .or_else(|| get("model").map(str::to_owned));
        let variant = match model.as_deref().map(str::trim) {
            Some("I") | Some("1") => Variant::ModelI,
            Some("II") | Some("2") => Variant::ModelII,
            None => match z {
                Some(z) if z < 1.0 => Variant::ModelII,
                _ => Variant::ModelI,
            },
            Some(other) => return Err(CliError::Config(format!("unknown model `{other}`"))),
        };
        let z = match variant {
            Variant::ModelI => z.unwrap_or(1.0),
            Variant::ModelII => z
                .or(defaults.default_z)
                .ok_or_else(|| CliError::Config("model II needs z".into()))?,
        };
        let params = ModelParams::with_variant(alphabet, foodset, p, q, z, variant)
            .map_err(|e| CliError::Config(e.to_string()))?;

        let grid_spec = self
            .z_grid
            .clone()
            .or_else(|| get("z_grid").map(str::to_owned));
        let z_grid = grid_spec.map(|s| parse_grid(&s)).transpose()?;
        let samples = match self.samples {
            Some(v) => v,
            None => get("samples")
                .map(|v| parse("samples", v))
                .transpose()?
                .unwrap_or(defaults.samples),
        };
        if samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        let n_max = match self.nmax {
            Some(v) => v,
            None => get("nmax")
                .map(|v| parse("nmax", v))
                .transpose()?
                .unwrap_or(defaults.n_max),
        };
        let seed = match self.seed {
            Some(v) => v,
            None => get("seed")
                .map(|v| parse("seed", v))
                .transpose()?
                .unwrap_or(1),
        };
        let budget = match self.budget {
            Some(v) => v,
            None => get("budget")
                .map(|v| parse("budget", v))
                .transpose()?
                .unwrap_or(defaults.budget),
        };
        let out = self
            .out
            .clone()
            .or_else(|| get("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let threads = get("threads").map(|v| parse("threads", v)).transpose()?;
        Ok(RunConfig {
            params,
            samples,
            n_max,
            seed,
            out,
            budget,
            z_grid,
            threads,
        })
    }
}

pub fn parse_foods(alphabet: &Alphabet, spec: &str) -> Result<Foodset, CliError> {
    match spec.trim() {
        "atoms" => Ok(Foodset::atoms(alphabet)),
        "single" => Ok(Foodset::single_atom(alphabet)),
        list => {
            let words = list
                .split(',')
                .map(|w| alphabet.parse_word(w))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Config(format!("foods: {e}")))?;
            Foodset::new(words).map_err(|e| CliError::Config(format!("foods: {e}")))
        }
    }
}

/// `start:stop:step`, inclusive of `stop` up to rounding. Values are rounded
/// to 12 decimals so that `0.75:0.9:0.03` yields `0.81`, not `0.8100000000000001`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
    let bad = || CliError::Config(format!("z grid `{spec}` is not start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if ![start, stop, step].iter().all(|x| x.is_finite()) || step <= 0.0 || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(CliError::Config(format!(
            "z grid `{spec}` has too many points"
        )));
    }
    let grid: Vec<f64> = (0..count)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect();
    if let Some(z) = grid.iter().find(|&&z| !(z > 0.0 && z < 1.0)) {
        return Err(CliError::Config(format!("z grid value {z} outside (0, 1)")));
    }
    Ok(grid)
}

pub fn ensure_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(CliError::Io)
}
