//! Command-line front end: scenario configs, presets, metrics, CSV and plot
//! exports, and the simulate/freqresp/sweep/compare commands.

pub mod commands;
pub mod config;
pub mod csv;
pub mod metrics;
pub mod plots;
pub mod presets;

pub use commands::{cmd_compare, cmd_freqresp, cmd_simulate, cmd_sweep};
pub use config::ScenarioConfig;
pub use metrics::MetricsReport;

use std::fmt;

/// CLI-level failures with their process exit codes: 2 for usage and config
/// problems, 3 for numerical failures.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
