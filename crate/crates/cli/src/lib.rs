//! Command-line front end: argument parsing, configuration layering and the
//! `analytic`, `sweep`, `scaling` and `gp-loop` commands.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{CommandKind, Format, RunConfig};
pub use crate::error::{CliError, Result};

const PRECEDENCE: &str = "Settings are layered: command-line flags override values from \
--config <file>, which override built-in defaults (omega = omega0 = 1). The config file \
holds flat `key = value` lines using the flag names (dashes or underscores), `#` comments \
allowed.\n\nExit codes: 0 success, 2 configuration error, 3 numerical error \
(scan boundary, no convergence), 4 I/O error.";

#[derive(Debug, Parser)]
#[command(
    name = "dicke",
    version,
    about = "Ground state, geometric phase and super-radiant transition of the Dicke model",
    after_long_help = PRECEDENCE
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Thermodynamic-limit mean-field table over the coupling grid.
    Analytic,
    /// Exact diagonalization over an atom-number ladder next to the analytic curves.
    Sweep,
    /// Linear fit of the peak geometric-phase derivative against N.
    Scaling,
    /// Discrete loop versus closed-form geometric phase of one ground state.
    GpLoop {
        #[arg(long)]
        n_atoms: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
    },
}

#[derive(Debug, Args, Default)]
pub struct Flags {
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda_max: Option<f64>,
    #[arg(long, global = true)]
    pub lambda_steps: Option<usize>,
    /// Comma-separated atom numbers, e.g. 16,32,64.
    #[arg(long, global = true)]
    pub n_ladder: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub m_max_factor: Option<f64>,
    #[arg(long, global = true)]
    pub loop_steps: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Also write a two-panel SVG next to the sweep table.
    #[arg(long, global = true)]
    pub plot: bool,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl Cli {
    pub fn kind(&self) -> CommandKind {
        match self.command {
            Command::Analytic => CommandKind::Analytic,
            Command::Sweep => CommandKind::Sweep,
            Command::Scaling => CommandKind::Scaling,
            Command::GpLoop { .. } => CommandKind::GpLoop,
        }
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::defaults(self.kind());
        if let Some(path) = &self.flags.config {
            cfg.apply_file(path)?;
        }
        let f = &self.flags;
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = f.$field.clone() {
                    cfg.$field = v;
                }
            )*};
        }
        take!(omega, omega0, lambda_min, lambda_max, lambda_steps, m_max_factor, loop_steps, workers, format);
        if let Some(ladder) = &f.n_ladder {
            cfg.n_ladder = config::parse_ladder(ladder)?;
        }
        if let Some(out) = &f.out {
            cfg.out = Some(out.clone());
        }
        if f.plot {
            cfg.plot = true;
        }
        if let Command::GpLoop { n_atoms, lambda } = &self.command {
            if let Some(n) = n_atoms {
                cfg.n_atoms = *n;
            }
            if let Some(l) = lambda {
                cfg.lambda = *l;
            }
        }
        cfg.validate(self.kind())?;
        Ok(cfg)
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let cfg = cli.resolve()?;
    match cli.kind() {
        CommandKind::Analytic => commands::cmd_analytic(&cfg, stdout),
        CommandKind::Sweep => commands::cmd_sweep(&cfg, stdout),
        CommandKind::Scaling => commands::cmd_scaling(&cfg, stdout),
        CommandKind::GpLoop => commands::cmd_gp_loop(&cfg, stdout),
    }
}

/// One-line diagnostic for stderr.
pub fn diagnostic(err: &CliError) -> String {
    match err {
        CliError::Model(dicke_core::DickeError::ScanBoundaryHit { .. }) => {
            format!("error: {err} (--m-max-factor)")
        }
        _ => format!("error: {err}"),
    }
}
