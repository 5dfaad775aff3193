use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use obslab::cli;

#[derive(Parser)]
#[command(
    name = "obslab",
    version,
    about = "Output-feedback control laboratory: estimator-based tracking of uncertain integrator chains on the inverted-pendulum benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and export trace.csv, metrics.json, and plot.gp.
    Simulate {
        /// Scenario config file (TOML).
        #[arg(short = 'c', long)]
        config: Option<PathBuf>,
        /// Built-in preset (fig3|fig4|fig5|fig6); bypasses the config file.
        #[arg(long)]
        preset: Option<String>,
        /// Output directory.
        #[arg(short = 'o', long)]
        output: PathBuf,
        /// Override the measurement-noise seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tabulate the integral-chain vs classical high-gain frequency response.
    Freqresp {
        #[arg(short = 'c', long)]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Estimator output channel (1..=n+1).
        #[arg(long)]
        channel: usize,
        /// Lowest angular frequency (rad/s).
        #[arg(long)]
        wmin: f64,
        /// Highest angular frequency (rad/s).
        #[arg(long)]
        wmax: f64,
        /// Number of log-spaced grid points.
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Re-run a scenario across several epsilon values.
    Sweep {
        #[arg(short = 'c', long)]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Swept parameter (only `epsilon` is supported).
        #[arg(long, default_value = "epsilon")]
        param: String,
        /// Comma-separated values to sweep.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(short = 'o', long)]
        output: PathBuf,
        /// Worker pool size (defaults to available parallelism, capped by
        /// the OBSLAB_THREADS environment variable).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run several presets side by side and tabulate their metrics.
    Compare {
        /// Comma-separated preset names (fig3,fig4,fig5).
        #[arg(long, value_delimiter = ',', required = true)]
        presets: Vec<String>,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { config, preset, output, seed } => {
            cli::cmd_simulate(config.as_deref(), preset.as_deref(), output, *seed)
        }
        Command::Freqresp { config, preset, channel, wmin, wmax, points, output } => {
            cli::cmd_freqresp(
                config.as_deref(),
                preset.as_deref(),
                *channel,
                *wmin,
                *wmax,
                *points,
                output,
            )
        }
        Command::Sweep { config, preset, param, values, output, threads, seed } => cli::cmd_sweep(
            config.as_deref(),
            preset.as_deref(),
            param,
            values,
            output,
            *threads,
            *seed,
        ),
        Command::Compare { presets, output } => cli::cmd_compare(presets, output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("obslab: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
