//! Configuration loading, subcommand pipelines and reports for the `parsym`
//! binary.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run, Command, Outcome, RunError};
pub use config::{load_config, parse_config, ConfigError, RunConfig};

/// A comma-separated list of reals, as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Reals(pub Vec<f64>);

/// Parse `"a,b,c"` into reals.
pub fn parse_vector(s: &str) -> Result<Reals, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("`{}`: {e}", t.trim()))
        })
        .collect::<Result<_, _>>()
        .map(Reals)
}
