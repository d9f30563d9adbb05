mod config;
mod error;
mod presets;
mod run;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::ScenarioConfig;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "dyngal", version, about = "Dynamical Galerkin experiments: Burgers 1D and Euler 2D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the cartesian product of a scenario's [sweep] axes.
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pool: Pool,
    },
    /// Run a named figure preset.
    Preset {
        name: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pool: Pool,
    },
    /// List the figure presets.
    ListPresets,
}

#[derive(Args)]
struct Common {
    /// Output directory; overrides the scenario's `output` key.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Override a scenario key, e.g. `--set projector.q=4`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct Pool {
    /// Concurrent sweep members.
    #[arg(long, env = "DYNGAL_WORKERS")]
    workers: Option<usize>,
}

impl Pool {
    fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

fn output_dir(cfg: &ScenarioConfig, flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| Path::new("runs").join(&cfg.name))
}

fn report_sweep(rows: &[sweep::SweepRow], dir: &Path) -> Result<(), CliError> {
    let failed: Vec<&sweep::SweepRow> = rows.iter().filter(|r| r.failed()).collect();
    println!(
        "{}",
        serde_json::json!({ "sweep": dir.join("sweep.csv"), "members": rows.len(), "failed": failed.len() })
    );
    match failed.first() {
        None => Ok(()),
        Some(first) => {
            let mut err = first.outcome.as_ref().err().cloned().expect("failed row");
            err.message = format!("{} of {} sweep members failed; first: {}", failed.len(), rows.len(), err.message);
            Err(err)
        }
    }
}

fn execute(cfg: &ScenarioConfig, dir: &Path, workers: usize) -> Result<(), CliError> {
    if cfg.sweep.is_empty() {
        let summary = run::run(cfg, dir)?;
        println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
        Ok(())
    } else {
        report_sweep(&sweep::sweep(cfg, dir, workers)?, dir)
    }
}

fn main_inner(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, common } => {
            let cfg = config::load(&config, &common.overrides)?;
            if !cfg.sweep.is_empty() {
                return Err(CliError::config("scenario has sweep axes; use `dyngal sweep`", Some("sweep".into())));
            }
            execute(&cfg, &output_dir(&cfg, &common.output), 1)
        }
        Command::Sweep { config, common, pool } => {
            let cfg = config::load(&config, &common.overrides)?;
            let dir = output_dir(&cfg, &common.output);
            report_sweep(&sweep::sweep(&cfg, &dir, pool.workers())?, &dir)
        }
        Command::Preset { name, common, pool } => {
            let preset = presets::find(&name).ok_or_else(|| {
                let known: Vec<&str> = presets::PRESETS.iter().map(|p| p.name).collect();
                CliError::config(format!("unknown preset '{name}'; known: {}", known.join(", ")), None)
            })?;
            let root = common.output.clone().unwrap_or_else(|| Path::new("runs").join(preset.name));
            for (sub, src) in preset.runs {
                let cfg = config::parse(src, &common.overrides)?;
                execute(&cfg, &root.join(sub), pool.workers())?;
            }
            Ok(())
        }
        Command::ListPresets => {
            for p in presets::PRESETS {
                println!("{:<8} {}", p.name, p.description);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
