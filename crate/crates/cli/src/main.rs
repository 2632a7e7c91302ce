use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use parsym::{load_config, parse_vector, run, Command, Reals};

/// Local symmetries of absolute parallelisms.
#[derive(Parser)]
#[command(name = "parsym", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `[outputs] directory`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sub {
    /// Killing dimensions, integrability and homogeneity at the sample points.
    Analyze(Common),
    /// Build and check the Killing field through a point.
    Killing {
        #[command(flatten)]
        common: Common,
        /// Base point, comma-separated.
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        at: Option<Reals>,
        /// Generator in frame components; defaults to a basis of Kill^{n+1}.
        #[arg(long = "gen", value_parser = parse_vector, allow_hyphen_values = true)]
        generator: Option<Reals>,
    },
    /// Scan the grid, stratify and label orbits.
    Orbits(Common),
    /// Run every numerical self-check and print a pass/fail table.
    Verify(Common),
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("PARSYM_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("PARSYM_THREADS must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let (common, command) = match cli.command {
        Sub::Analyze(c) => (c, Command::Analyze),
        Sub::Killing {
            common,
            at,
            generator,
        } => (
            common,
            Command::Killing {
                at: at.map(|r| r.0),
                generator: generator.map(|r| r.0),
            },
        ),
        Sub::Orbits(c) => (c, Command::Orbits),
        Sub::Verify(c) => (c, Command::Verify),
    };
    let cfg = match load_config(&common.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {}: {e}", common.config.display());
            return ExitCode::from(2);
        }
    };
    let out_dir = common.out.unwrap_or_else(|| cfg.out_dir.clone());
    match run(&command, &cfg, &out_dir) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
