//! `cwl`: runs the harmonic-analysis and wave-energy experiments and writes
//! CSV tables, JSON reports and gnuplot scripts.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use commands::Command;
use config::ExperimentConfig;

#[derive(Debug, Parser)]
#[command(name = "cwl", version, about = "Wave-energy experiments for Cherednik operators")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Configuration file with one `key = value` per line.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (overrides `threads`; 0 picks automatically).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for sampled grids (overrides `seed`).
    #[arg(long)]
    seed: Option<u64>,
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, config::ConfigError> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    cfg.apply_env(std::env::vars())?;
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cwl: configuration error: {e}");
            return ExitCode::from(2);
        }
    };
    if cfg.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global() {
            eprintln!("cwl: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::ReportAll => commands::report_all(&cfg, &cfg.out),
        cmd => commands::run(cmd, &cfg, &cfg.out).map(|r| {
            for f in &r.failures {
                eprintln!("{}: {}", f.stage, f.error);
            }
            for c in r.checks.iter().filter(|c| !c.pass) {
                eprintln!("check {} failed: {:e} {} {:e} is false", c.name, c.value, c.relation, c.limit);
            }
            r.pass
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("cwl: {e:#}");
            ExitCode::from(2)
        }
    }
}
