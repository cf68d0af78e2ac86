//! Report file emission. JSON envelopes are canonical (sorted keys, fixed
//! float formatting), so identical configurations produce byte-identical
//! files.

use std::path::PathBuf;

use anyhow::{Context, Result};
use c0semi_core::report::to_canonical_json;
use serde::Serialize;
use serde_json::Value;

use crate::settings::Format;

/// Configuration echo embedded in every JSON report.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub tolerances: ToleranceEcho,
    pub formats: Vec<Format>,
}

#[derive(Debug, Serialize)]
pub struct GridEcho {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub points: usize,
}

#[derive(Debug, Serialize)]
pub struct ToleranceEcho {
    pub eq_tol: f64,
    pub argmax_tol: f64,
    pub spectral_tol: f64,
}

impl ConfigEcho {
    pub fn new(scenario: &str, tol: &c0semi_core::ToleranceConfig, formats: &[Format]) -> Self {
        Self {
            scenario: scenario.into(),
            dim: None,
            dims: None,
            grid: None,
            omega: None,
            lambda: None,
            mu: None,
            seed: None,
            trials: None,
            evaluator: None,
            k: None,
            tolerances: ToleranceEcho {
                eq_tol: tol.eq_tol,
                argmax_tol: tol.argmax_tol,
                spectral_tol: tol.spectral_tol,
            },
            formats: formats.to_vec(),
        }
    }
}

pub struct Emitter {
    out_dir: PathBuf,
    formats: Vec<Format>,
}

impl Emitter {
    pub fn new(out_dir: PathBuf, formats: Vec<Format>) -> Result<Self> {
        std::fs::create_dir_all(&out_dir)
            .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
        Ok(Self { out_dir, formats })
    }

    pub fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    /// Writes `<name>.json` containing `{"config": ..., "result": ...}`.
    pub fn write_json<R: Serialize>(
        &self,
        name: &str,
        config: &ConfigEcho,
        result: &R,
    ) -> Result<()> {
        if !self.wants(Format::Json) {
            return Ok(());
        }
        let envelope = Envelope { config, result };
        let text = to_canonical_json(&envelope).map_err(|e| anyhow::anyhow!("{e}"))?;
        self.write_file(&format!("{name}.json"), &text)
    }

    pub fn write_csv(&self, name: &str, content: &str) -> Result<()> {
        if !self.wants(Format::Csv) {
            return Ok(());
        }
        self.write_file(name, content)
    }

    fn write_file(&self, name: &str, content: &str) -> Result<()> {
        let path = self.path(name);
        std::fs::write(&path, content)
            .with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    config: &'a ConfigEcho,
    result: &'a R,
}

/// Canonical JSON value for a trajectory sample table.
pub fn trajectory_samples(times: &[f64], values: &[num_complex::Complex64]) -> Value {
    let rows: Vec<Value> = times
        .iter()
        .zip(values)
        .map(|(t, v)| serde_json::json!([t, v.re, v.im, v.norm()]))
        .collect();
    Value::Array(rows)
}
