//! Experiment runner for the degentrace toolkit: configuration, subcommands, reports and CSV output.

use std::path::{Path, PathBuf};

use degentrace::dynamics::DynamicsError;
use degentrace::geometry::GeometryError;
use degentrace::mellin::MellinError;
use degentrace::oscillatory::OscError;
use degentrace::spectral::SpectralError;

pub mod commands;
pub mod config;
pub mod output;
pub mod report;

pub use config::ExperimentConfig;
pub use report::{Comparison, Provenance, Record, RunReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("refused: {0}")]
    Refused(String),
    #[error("geometry: {0}")]
    Geometry(#[from] GeometryError),
    #[error("dynamics: {0}")]
    Dynamics(#[from] DynamicsError),
    #[error("mellin: {0}")]
    Mellin(#[from] MellinError),
    #[error("expansion: {0}")]
    Osc(#[from] OscError),
    #[error("spectral: {0}")]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    VerifyIdentities,
    /// All configured cases, or the one matching (n, k).
    Expand(Option<(u32, u32)>),
    Spectral,
    Dynamics,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyIdentities => "verify-identities",
            Command::Expand(_) => "expand",
            Command::Spectral => "spectral",
            Command::Dynamics => "dynamics",
        }
    }
}

/// Runs one subcommand, writing the report and CSV files into `out`.
pub fn run(cmd: Command, cfg: &ExperimentConfig, out: &Path) -> Result<RunReport, CliError> {
    cfg.validate()?;
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(out.display().to_string(), e))?;
    let report = match cmd {
        Command::VerifyIdentities => commands::identities::run(cfg, out)?,
        Command::Expand(nk) => commands::expand::run(cfg, nk, out)?,
        Command::Spectral => commands::spectral::run(cfg, out)?,
        Command::Dynamics => commands::dynamics::run(cfg, out)?,
    };
    output::write_report(&report, out)?;
    Ok(report)
}

/// Output directory: the override if given, else the config's.
pub fn out_dir(cfg: &ExperimentConfig, over: Option<&Path>) -> PathBuf {
    over.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(&cfg.out_dir))
}
