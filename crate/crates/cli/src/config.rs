//! Run configuration: built-in defaults, then a flat `key = value` file, then
//! command-line flags, each layer overriding the previous one.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use dicke_core::crit::LambdaGrid;
use dicke_core::{ModelParams, ScanPolicy};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("expected csv or json, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Analytic,
    Sweep,
    Scaling,
    GpLoop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega: f64,
    pub omega0: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_steps: usize,
    pub n_ladder: Vec<usize>,
    pub m_max_factor: f64,
    pub loop_steps: usize,
    /// 0 means one worker per available core.
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub plot: bool,
    /// Atom number for `gp-loop`.
    pub n_atoms: usize,
    /// Coupling for `gp-loop`.
    pub lambda: f64,
}

impl RunConfig {
    /// Built-in defaults. `w = w0 = 1` throughout; the coupling window of the
    /// scaling command is narrowed around the transition.
    pub fn defaults(command: CommandKind) -> Self {
        let base = RunConfig {
            omega: 1.0,
            omega0: 1.0,
            lambda_min: 0.2,
            lambda_max: 1.4,
            lambda_steps: 61,
            n_ladder: vec![8, 16, 32, 64],
            m_max_factor: ScanPolicy::default().m_max_factor,
            loop_steps: 512,
            workers: 0,
            out: None,
            format: Format::Csv,
            plot: false,
            n_atoms: 4,
            lambda: 1.2,
        };
        match command {
            CommandKind::Scaling => RunConfig {
                lambda_min: 0.5,
                lambda_max: 1.0,
                lambda_steps: 26,
                n_ladder: vec![32, 64, 128, 256],
                ..base
            },
            _ => base,
        }
    }

    pub fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams::new(self.omega, self.omega0)?)
    }

    pub fn grid(&self) -> Result<LambdaGrid> {
        Ok(LambdaGrid::uniform(
            self.lambda_min,
            self.lambda_max,
            self.lambda_steps,
        )?)
    }

    pub fn scan(&self) -> ScanPolicy {
        ScanPolicy {
            m_max_factor: self.m_max_factor,
            require_interior: true,
        }
    }

    /// Checks every field the command uses, naming the first offender.
    pub fn validate(&self, command: CommandKind) -> Result<()> {
        positive("omega", self.omega)?;
        positive("omega0", self.omega0)?;
        positive("m_max_factor", self.m_max_factor)?;
        match command {
            CommandKind::GpLoop => {
                if self.n_atoms < 1 {
                    return Err(CliError::config("n_atoms", "must be at least 1"));
                }
                if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
                    return Err(CliError::config("lambda", "must be non-negative"));
                }
            }
            _ => {
                if !(self.lambda_min >= 0.0) || !self.lambda_min.is_finite() {
                    return Err(CliError::config("lambda_min", "must be non-negative"));
                }
                if !(self.lambda_max > self.lambda_min) || !self.lambda_max.is_finite() {
                    return Err(CliError::config(
                        "lambda_max",
                        "must be greater than lambda_min",
                    ));
                }
                if self.lambda_steps < 2 {
                    return Err(CliError::config("lambda_steps", "must be at least 2"));
                }
            }
        }
        match command {
            CommandKind::Sweep | CommandKind::Scaling => {
                if self.n_ladder.is_empty() {
                    return Err(CliError::config("n_ladder", "must list at least one N"));
                }
                if self.n_ladder.contains(&0) {
                    return Err(CliError::config("n_ladder", "atom numbers must be positive"));
                }
            }
            _ => {}
        }
        if command == CommandKind::Scaling {
            let mut distinct = self.n_ladder.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() < dicke_core::crit::MIN_SCALING_LADDER {
                return Err(CliError::config(
                    "n_ladder",
                    format!(
                        "scaling needs at least {} distinct atom numbers",
                        dicke_core::crit::MIN_SCALING_LADDER
                    ),
                ));
            }
            if self.lambda_steps < 3 {
                return Err(CliError::config("lambda_steps", "scaling needs at least 3"));
            }
        }
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "omega" => self.omega = parse(&key, value)?,
            "omega0" => self.omega0 = parse(&key, value)?,
            "lambda_min" => self.lambda_min = parse(&key, value)?,
            "lambda_max" => self.lambda_max = parse(&key, value)?,
            "lambda_steps" => self.lambda_steps = parse(&key, value)?,
            "n_ladder" => self.n_ladder = parse_ladder(value)?,
            "m_max_factor" => self.m_max_factor = parse(&key, value)?,
            "loop_steps" => self.loop_steps = parse(&key, value)?,
            "workers" => self.workers = parse(&key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = parse(&key, value)?,
            "plot" => self.plot = parse(&key, value)?,
            "n_atoms" => self.n_atoms = parse(&key, value)?,
            "lambda" => self.lambda = parse(&key, value)?,
            _ => return Err(CliError::config(key, "unknown configuration key")),
        }
        Ok(())
    }

    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (key, value) in parse_key_values(text)? {
            self.set(&key, &value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading config {}", path.display()), e))?;
        self.apply_file_text(&text)
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be positive, got {v}")))
    }
}

fn parse<T: FromStr>(field: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e: T::Err| CliError::config(field, format!("cannot parse `{value}`: {e}")))
}

pub fn parse_ladder(value: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse("n_ladder", s))
        .collect()
}

/// Flat `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::Parse {
            what: "config file".into(),
            reason: format!("line {} has no `=`: `{}`", lineno + 1, raw.trim()),
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}
