//! `eitlab`: linear response, dispersion and soliton propagation for the
//! five-level tripod-Lambda medium from a JSON config file.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use commands::{GridFlags, Mode, PropagateOptions, SweepSpec};
use config::RunConfig;
use error::{CliError, CliResult};
use output::OutputSet;

#[derive(Debug, Parser)]
#[command(name = "eitlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (created if missing). Defaults to eitlab-out/<subcommand>.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Lower end of the probe-detuning grid, in the config's frequency unit.
    #[arg(long, global = true, allow_negative_numbers = true)]
    grid_min: Option<f64>,

    /// Upper end of the probe-detuning grid, in the config's frequency unit.
    #[arg(long, global = true, allow_negative_numbers = true)]
    grid_max: Option<f64>,

    /// Number of grid points (detuning grid, or FFT size for propagate).
    #[arg(long, global = true)]
    grid_points: Option<usize>,

    /// Recorded in the manifest; no subcommand draws random numbers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
enum Command {
    /// Steady-state coherences across the probe-detuning grid (CSV).
    Spectrum,
    /// Eigenvalues and eigenvectors of the control-field Hamiltonian (JSON).
    Eigen,
    /// Taylor coefficients of κ(ω), group velocity and absorption (JSON).
    Dispersion,
    /// NLS coefficients and the soliton they admit (JSON).
    Soliton {
        /// Soliton width in seconds.
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Pulse propagation snapshots (CSV per checkpoint plus waterfall).
    Propagate {
        #[arg(long, value_enum, default_value_t = Mode::Ideal)]
        mode: Mode,
        /// Number of evenly spaced snapshots; 0 writes only the final one.
        #[arg(long, default_value_t = 0)]
        checkpoints: usize,
        /// Propagation length in cm.
        #[arg(long)]
        length: Option<f64>,
        /// Pulse or soliton width in seconds (nonlinear modes).
        #[arg(long)]
        tau: Option<f64>,
        /// Split-step size in cm (nonlinear modes).
        #[arg(long)]
        step: Option<f64>,
    },
    /// Parameter sweep, one CSV row per value.
    Scan {
        /// FIELD=START:END:STEPS, e.g. phi=0:3.141592653589793:9.
        #[arg(long, value_name = "SPEC")]
        sweep: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Eigen => "eigen",
            Command::Dispersion => "dispersion",
            Command::Soliton { .. } => "soliton",
            Command::Propagate { .. } => "propagate",
            Command::Scan { .. } => "scan",
        }
    }
}

#[derive(Serialize)]
struct RunManifest<'a, S: Serialize> {
    subcommand: &'a Command,
    config_path: &'a PathBuf,
    config: &'a eitlab_core::params::ConfigFile,
    output_dir: &'a PathBuf,
    grid: GridFlags,
    seed: u64,
    summary: &'a S,
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("EITLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("EITLAB_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure worker threads: {e}")))
}

fn finish<S: Serialize>(ctx: &Context, out: OutputSet, summary: S) -> CliResult<()> {
    println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
    out.finish(&RunManifest {
        subcommand: &ctx.command,
        config_path: &ctx.run.path,
        config: &ctx.run.file,
        output_dir: &ctx.out_dir,
        grid: ctx.grid,
        seed: ctx.seed,
        summary: &summary,
    })
}

struct Context {
    command: Command,
    run: RunConfig,
    out_dir: PathBuf,
    grid: GridFlags,
    seed: u64,
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let config = cli
        .config
        .ok_or_else(|| CliError::Usage("--config PATH is required".into()))?;
    let run = RunConfig::load(&config)?;
    run.warn();
    let grid = GridFlags {
        min: cli.grid_min,
        max: cli.grid_max,
        points: cli.grid_points,
    };
    let sweep = match &cli.command {
        Command::Scan { sweep } => Some(SweepSpec::parse(sweep)?),
        _ => None,
    };
    let out_dir = cli.out.unwrap_or_else(|| commands::default_out_dir(cli.command.name()));
    let ctx = Context {
        command: cli.command.clone(),
        run,
        out_dir,
        grid,
        seed: cli.seed,
    };
    let mut out = OutputSet::create(&ctx.out_dir)?;
    let r = &ctx.run;
    match cli.command {
        Command::Spectrum => {
            let s = commands::spectrum(r, grid, &mut out)?;
            finish(&ctx, out, s)
        }
        Command::Eigen => {
            grid.reject_window_or_points("eigen")?;
            let s = commands::eigen(r, &mut out)?;
            finish(&ctx, out, s)
        }
        Command::Dispersion => {
            grid.reject_window_or_points("dispersion")?;
            let s = commands::dispersion(r, &mut out)?;
            finish(&ctx, out, s)
        }
        Command::Soliton { tau } => {
            grid.reject_window_or_points("soliton")?;
            let s = commands::soliton(r, tau, &mut out)?;
            finish(&ctx, out, s)
        }
        Command::Propagate {
            mode,
            checkpoints,
            length,
            tau,
            step,
        } => {
            let opts = PropagateOptions {
                mode,
                checkpoints,
                length,
                tau,
                step,
            };
            let s = commands::propagate(r, grid, opts, &mut out)?;
            finish(&ctx, out, s)
        }
        Command::Scan { .. } => {
            let sweep = sweep.expect("parsed above");
            let s = commands::scan(r, grid, &sweep, &mut out)?;
            finish(&ctx, out, s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
