//! `subdiff`: configuration-driven runs of the subdiffusion spectral solver.
//!
//! Commands: forward, invert, diagnose-modes, example1, roundtrip, verify,
//! ml-eval. Precedence: command-line flags override config-file fields,
//! which override built-in defaults. All outputs are deterministic for a
//! fixed configuration. Thread count follows RAYON_NUM_THREADS.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subdiff_cli::commands::{self, CliError, CliResult};
use subdiff_cli::config::RunConfig;

#[derive(Parser)]
#[command(name = "subdiff", version, about = "Spectral forward/inverse solver for the subdiffusion equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// TOML run configuration
    #[arg(long)]
    config: Option<String>,
    /// output directory (overrides config)
    #[arg(long)]
    out: Option<String>,
    /// fractional order in (0, 1] (overrides config)
    #[arg(long)]
    rho: Option<f64>,
    /// snapshot time for the over-determination condition (overrides config)
    #[arg(long)]
    t0: Option<f64>,
    /// time horizon (overrides config)
    #[arg(long)]
    horizon: Option<f64>,
    /// retained modes per axis, comma separated (overrides config)
    #[arg(long, value_delimiter = ',')]
    modes: Option<Vec<usize>>,
    /// grid nodes per axis, comma separated (overrides config)
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<usize>>,
    /// product-integration cells for sampled profiles (overrides config)
    #[arg(long)]
    cells: Option<usize>,
    /// snapshot times, comma separated (overrides config)
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    /// reserved; all computations are deterministic and ignore it
    #[arg(long)]
    #[allow(dead_code)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the forward problem and write grid snapshots
    Forward(CommonArgs),
    /// Recover the source factor f from a snapshot
    Invert(CommonArgs),
    /// Classify modes by their Duhamel coefficient at t0
    #[command(name = "diagnose-modes")]
    DiagnoseModes(CommonArgs),
    /// Run the canonical sign-changing non-uniqueness scenario
    Example1 {
        #[command(flatten)]
        common: CommonArgs,
        /// exponent b of the time factor t^rho (1 - t^b)
        #[arg(long, default_value_t = 0.1)]
        b: f64,
        /// eigenmode carrying the invisible source component
        #[arg(long, value_delimiter = ',', default_value = "1")]
        mode: Vec<usize>,
    },
    /// Forward solve with a known source, then recover it and report errors
    Roundtrip(CommonArgs),
    /// Run the oracle conformance checks and write a JSON report
    Verify(CommonArgs),
    /// Evaluate the two-parameter Mittag-Leffler function E_{rho,mu}(z)
    #[command(name = "ml-eval")]
    MlEval {
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// argument, z <= 0
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
}

fn load_config(common: &CommonArgs) -> CliResult<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{path}: {e}")))?;
            RunConfig::from_toml(&text).map_err(CliError::Config)?
        }
        None => RunConfig::default(),
    };
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(rho) = common.rho {
        cfg.rho = rho;
    }
    if let Some(t0) = common.t0 {
        cfg.t0 = t0;
        if cfg.horizon < t0 {
            cfg.horizon = t0;
        }
    }
    if let Some(horizon) = common.horizon {
        cfg.horizon = horizon;
    }
    if let Some(modes) = &common.modes {
        cfg.discretization.modes = modes.clone();
    }
    if let Some(grid) = &common.grid {
        cfg.discretization.grid = grid.clone();
    }
    if let Some(cells) = common.cells {
        cfg.discretization.quadrature_cells = cells;
    }
    if let Some(times) = &common.times {
        cfg.snapshot_times = times.clone();
    }
    // a single per-axis value may stand for both axes of a 2-D domain
    let dim = cfg.domain.lengths.len();
    if cfg.discretization.modes.len() == 1 && dim == 2 {
        let m = cfg.discretization.modes[0];
        cfg.discretization.modes = vec![m, m];
    }
    if cfg.discretization.grid.len() == 1 && dim == 2 {
        let g = cfg.discretization.grid[0];
        cfg.discretization.grid = vec![g, g];
    }
    Ok(cfg)
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Forward(common) => commands::run_forward(load_config(&common)?),
        Command::Invert(common) => commands::run_invert(load_config(&common)?),
        Command::DiagnoseModes(common) => commands::run_diagnose(load_config(&common)?),
        Command::Example1 { common, b, mode } => {
            commands::run_example1(load_config(&common)?, b, mode)
        }
        Command::Roundtrip(common) => commands::run_roundtrip(load_config(&common)?),
        Command::Verify(common) => commands::run_verify(load_config(&common)?),
        Command::MlEval { rho, mu, z } => commands::run_ml_eval(rho, mu, z),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
