//! Run configuration files.
//!
//! ```toml
//! task = "spheres_entropy"      # optional; must match the command line
//! seed = 7                      # optional; --seed wins
//!
//! [params]
//! material = "perfect"
//! radius = 1.0
//! separation = 10.0
//!
//! [sweep]
//! variable = "z"
//! start = 0.05
//! stop = 10.0
//! points = 200
//! scale = "linear"              # or "log"
//!
//! [output]
//! path = "entropy.csv"
//! format = "csv"                # or "json"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: toml::Table,
    pub sweep: Option<Sweep>,
    pub output: Option<OutputSpec>,
    /// Directory relative paths inside the file are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "default_scale")]
    pub scale: Scale,
}

fn default_scale() -> Scale {
    Scale::Linear
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    /// An empty configuration (all parameters at their defaults).
    pub fn empty() -> Self {
        Self { task: None, seed: None, params: toml::Table::new(), sweep: None, output: None, base_dir: PathBuf::from(".") }
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::config(format!("{}", e.message())).with_span(text, e.span()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        let mut cfg = Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn resolve_path(&self, p: &str) -> PathBuf {
        let p = PathBuf::from(p);
        if p.is_absolute() {
            p
        } else {
            self.base_dir.join(p)
        }
    }
}

impl CliError {
    fn with_span(self, text: &str, span: Option<std::ops::Range<usize>>) -> Self {
        match (self, span) {
            (CliError::Config(m), Some(r)) => {
                let line = text[..r.start.min(text.len())].matches('\n').count() + 1;
                CliError::Config(format!("line {line}: {m}"))
            }
            (e, _) => e,
        }
    }
}

impl Sweep {
    /// Sample points; the endpoints are included.
    pub fn values(&self) -> CliResult<Vec<f64>> {
        if self.points == 0 {
            return Err(CliError::config("sweep.points: must be at least 1"));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::config("sweep.start/stop: must be finite"));
        }
        if self.scale == Scale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(CliError::config("sweep.start/stop: log sweeps need positive bounds"));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        let n = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| {
                let t = i as f64 / n;
                match self.scale {
                    Scale::Linear => self.start + t * (self.stop - self.start),
                    Scale::Log => (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sweep_endpoints() {
        let s = Sweep { variable: "l".into(), start: 0.05, stop: 10.0, points: 5, scale: Scale::Log };
        let v = s.values().unwrap();
        assert_eq!(v.len(), 5);
        assert!((v[0] - 0.05).abs() < 1e-15 && (v[4] - 10.0).abs() < 1e-12);
        assert!((v[2] - (0.05f64 * 10.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unknown_section_rejected() {
        let e = RunConfig::parse("[parms]\nx = 1\n").unwrap_err();
        assert!(matches!(e, CliError::Config(ref m) if m.contains("line 1")), "{e}");
    }
}
