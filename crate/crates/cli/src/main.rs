use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use degentrace_cli::{out_dir, run, Command, ExperimentConfig};

#[derive(Parser)]
#[command(name = "degentrace", version, about = "Trace asymptotics at a degenerate potential maximum")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// TOML experiment config; defaults are used when absent
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides out_dir)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed (overrides seed)
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Sub {
    /// Closed-form identities and residue-engine structure
    VerifyIdentities,
    /// Oracle vs residue expansion on the λ grid
    Expand {
        /// Expansion order (number of catalog poles)
        #[arg(long)]
        order: Option<usize>,
        /// Run only the case with this (n, k)
        #[arg(long, value_name = "N,K", value_parser = parse_nk)]
        nk: Option<(u32, u32)>,
    },
    /// Windowed eigenvalue traces over the h grid
    Spectral,
    /// Flow jets, generating function and periodic orbits
    Dynamics,
}

fn parse_nk(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected N,K")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(p) => match ExperimentConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let cmd = match cli.command {
        Sub::VerifyIdentities => Command::VerifyIdentities,
        Sub::Expand { order, nk } => {
            if let Some(o) = order {
                cfg.expand.order = o;
            }
            Command::Expand(nk)
        }
        Sub::Spectral => Command::Spectral,
        Sub::Dynamics => Command::Dynamics,
    };
    let out = out_dir(&cfg, cli.out.as_deref());
    match run(cmd, &cfg, &out) {
        Ok(r) => {
            print!("{}", r.render());
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
