//! Run settings assembled from defaults, a flat key = value config file,
//! the environment, and command-line flags — later sources win.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use c0semi_core::{TimeGrid, ToleranceConfig};
use serde::Serialize;

pub const OUT_DIR_ENV: &str = "C0SEMI_OUT";

pub const KNOWN_SCENARIOS: &[&str] = &[
    "example",
    "isometric",
    "shift",
    "l1",
    "hilbert",
    "spectrum",
    "trajectory",
];

const KNOWN_KEYS: &[&str] = &[
    "scenario",
    "dim",
    "dims",
    "grid",
    "omega",
    "lambda",
    "mu",
    "seed",
    "trials",
    "evaluator",
    "k",
    "eq_tol",
    "argmax_tol",
    "spectral_tol",
    "out",
    "format",
];

/// Raw option bag; every field may still be unset after merging.
#[derive(Debug, Default, Clone)]
pub struct Settings {
    pub dim: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub grid: Option<(f64, f64, f64)>,
    pub omega: Option<Vec<f64>>,
    pub lambda: Option<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub evaluator: Option<String>,
    pub mode_index: Option<usize>,
    pub eq_tol: Option<f64>,
    pub argmax_tol: Option<f64>,
    pub spectral_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Settings {
    /// Reads a flat `key = value` file (empty lines and `#` comments
    /// allowed). Unknown keys and malformed values are configuration errors.
    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut pairs = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {} is not `key = value`: {raw}", lineno + 1);
            };
            let key = key.trim();
            let value = value.trim();
            if !KNOWN_KEYS.contains(&key) {
                bail!("unknown config key `{key}` on line {}", lineno + 1);
            }
            pairs.insert(key.to_string(), value.to_string());
        }

        if let Some(scenario) = pairs.get("scenario") {
            if !KNOWN_SCENARIOS.contains(&scenario.as_str()) {
                bail!("unknown scenario `{scenario}` in config file");
            }
        }

        let mut s = Settings::default();
        if let Some(v) = pairs.get("dim") {
            s.dim = Some(v.parse().with_context(|| format!("bad dim `{v}`"))?);
        }
        if let Some(v) = pairs.get("dims") {
            s.dims = Some(parse_list(v).context("bad dims")?);
        }
        if let Some(v) = pairs.get("grid") {
            s.grid = Some(parse_grid_spec(v)?);
        }
        if let Some(v) = pairs.get("omega") {
            s.omega = Some(parse_list(v).context("bad omega")?);
        }
        if let Some(v) = pairs.get("lambda") {
            s.lambda = Some(parse_list(v).context("bad lambda")?);
        }
        if let Some(v) = pairs.get("mu") {
            s.mu = Some(parse_list(v).context("bad mu")?);
        }
        if let Some(v) = pairs.get("seed") {
            s.seed = Some(v.parse().with_context(|| format!("bad seed `{v}`"))?);
        }
        if let Some(v) = pairs.get("trials") {
            s.trials = Some(v.parse().with_context(|| format!("bad trials `{v}`"))?);
        }
        if let Some(v) = pairs.get("evaluator") {
            s.evaluator = Some(v.clone());
        }
        if let Some(v) = pairs.get("k") {
            s.mode_index = Some(v.parse().with_context(|| format!("bad k `{v}`"))?);
        }
        if let Some(v) = pairs.get("eq_tol") {
            s.eq_tol = Some(v.parse().with_context(|| format!("bad eq_tol `{v}`"))?);
        }
        if let Some(v) = pairs.get("argmax_tol") {
            s.argmax_tol = Some(v.parse().with_context(|| format!("bad argmax_tol `{v}`"))?);
        }
        if let Some(v) = pairs.get("spectral_tol") {
            s.spectral_tol = Some(
                v.parse()
                    .with_context(|| format!("bad spectral_tol `{v}`"))?,
            );
        }
        if let Some(v) = pairs.get("out") {
            s.out = Some(PathBuf::from(v));
        }
        if let Some(v) = pairs.get("format") {
            s.formats = Some(parse_formats(v)?);
        }
        Ok(s)
    }

    /// Overlays `other` (higher precedence) on top of `self`.
    pub fn overlay(mut self, other: Settings) -> Settings {
        macro_rules! take {
            ($field:ident) => {
                if other.$field.is_some() {
                    self.$field = other.$field;
                }
            };
        }
        take!(dim);
        take!(dims);
        take!(grid);
        take!(omega);
        take!(lambda);
        take!(mu);
        take!(seed);
        take!(trials);
        take!(evaluator);
        take!(mode_index);
        take!(eq_tol);
        take!(argmax_tol);
        take!(spectral_tol);
        take!(out);
        take!(formats);
        self
    }

    pub fn tolerances(&self) -> Result<ToleranceConfig> {
        let defaults = ToleranceConfig::default();
        ToleranceConfig::new(
            self.eq_tol.unwrap_or(defaults.eq_tol),
            self.argmax_tol.unwrap_or(defaults.argmax_tol),
            self.spectral_tol.unwrap_or(defaults.spectral_tol),
        )
        .map_err(|e| anyhow!("{e}"))
    }

    pub fn grid_or(&self, default: (f64, f64, f64)) -> Result<((f64, f64, f64), TimeGrid)> {
        let spec = self.grid.unwrap_or(default);
        let grid = TimeGrid::from_range(spec.0, spec.1, spec.2).map_err(|e| anyhow!("{e}"))?;
        Ok((spec, grid))
    }

    /// Output directory: flag/config value, overridden by the environment
    /// when the flag is absent, falling back to `out/`.
    pub fn out_dir(&self, flag: Option<PathBuf>) -> PathBuf {
        if let Some(path) = flag {
            return path;
        }
        if let Ok(path) = std::env::var(OUT_DIR_ENV) {
            if !path.is_empty() {
                return PathBuf::from(path);
            }
        }
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn formats_or_default(&self) -> Vec<Format> {
        let mut formats = self
            .formats
            .clone()
            .unwrap_or_else(|| vec![Format::Csv, Format::Json]);
        formats.sort();
        formats.dedup();
        formats
    }
}

pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<T>()
                .map_err(|e| anyhow!("cannot parse `{part}`: {e}"))
        })
        .collect()
}

/// Grid spec `start:stop:step`.
pub fn parse_grid_spec(text: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("grid must be start:stop:step, got `{text}`");
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| anyhow!("bad grid component `{p}`: {e}"))
        })
        .collect::<Result<_>>()?;
    Ok((nums[0], nums[1], nums[2]))
}

pub fn parse_formats(text: &str) -> Result<Vec<Format>> {
    text.split(',')
        .map(|part| match part.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => bail!("unknown format `{other}` (expected json or csv)"),
        })
        .collect()
}

/// Tolerance overrides given as repeated `--tol key=value` flags.
pub fn apply_tol_flags(settings: &mut Settings, flags: &[String]) -> Result<()> {
    for flag in flags {
        let Some((key, value)) = flag.split_once('=') else {
            bail!("--tol expects key=value, got `{flag}`");
        };
        let value: f64 = value
            .trim()
            .parse()
            .with_context(|| format!("bad tolerance value in `{flag}`"))?;
        match key.trim() {
            "eq" | "eq_tol" => settings.eq_tol = Some(value),
            "argmax" | "argmax_tol" => settings.argmax_tol = Some(value),
            "spectral" | "spectral_tol" => settings.spectral_tol = Some(value),
            other => bail!("unknown tolerance `{other}` (expected eq, argmax, or spectral)"),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn config_file_round_trip_and_precedence() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            file,
            "# comment\nscenario = example\ndim = 32\ngrid = 0:5:0.5\nformat = json\nseed = 9"
        )
        .unwrap();
        let base = Settings::from_config_file(file.path()).unwrap();
        assert_eq!(base.dim, Some(32));
        assert_eq!(base.grid, Some((0.0, 5.0, 0.5)));
        assert_eq!(base.formats, Some(vec![Format::Json]));

        let flags = Settings {
            dim: Some(64),
            ..Default::default()
        };
        let merged = base.overlay(flags);
        assert_eq!(merged.dim, Some(64));
        assert_eq!(merged.seed, Some(9));
    }

    #[test]
    fn unknown_keys_and_scenarios_are_rejected() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "bogus = 1").unwrap();
        assert!(Settings::from_config_file(file.path()).is_err());

        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "scenario = warp").unwrap();
        assert!(Settings::from_config_file(file.path()).is_err());
    }

    #[test]
    fn grid_spec_parsing() {
        assert_eq!(parse_grid_spec("0:10:0.1").unwrap(), (0.0, 10.0, 0.1));
        assert!(parse_grid_spec("0:10").is_err());
        assert!(parse_grid_spec("a:b:c").is_err());
    }

    #[test]
    fn tol_flags_apply_by_key() {
        let mut settings = Settings::default();
        apply_tol_flags(&mut settings, &["eq=1e-9".into(), "spectral=1e-7".into()]).unwrap();
        assert_eq!(settings.eq_tol, Some(1e-9));
        assert_eq!(settings.spectral_tol, Some(1e-7));
        assert!(apply_tol_flags(&mut settings, &["ziggy=1".into()]).is_err());
    }
}
