//! `bgkmix`: batch front-end for the two-species BGK solvers.

mod commands;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bgkmix::twofluid::LimitSystem;
use bgkmix::verify::Suite;

#[derive(Debug, Parser)]
#[command(name = "bgkmix", version, about = "Two-species BGK mixture solver and verification suite")]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Space-homogeneous relaxation; writes a time-series CSV.
    Relax {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV; defaults to `[output] path` or `series.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 1D transport with relaxation; writes snapshot and totals CSVs.
    Transport {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 1D ideal-MHD Riemann problem from the `[mhd]` section.
    Mhd {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residual convergence table of a limit system on the advected-layer solution.
    Limits {
        #[arg(long, default_value = "thm43", value_parser = parse_system)]
        system: LimitSystem,
        /// Number of grid levels, each twice as fine as the previous.
        #[arg(long, default_value_t = 4)]
        refine: usize,
        #[arg(long, default_value_t = 32)]
        base: usize,
        #[arg(long, default_value_t = 1.0)]
        c1: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[arg(long, default_value_t = 1.0)]
        c3: f64,
        #[arg(long, default_value_t = 1.0)]
        c5: f64,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        /// Also write the table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite and report each measured extremum.
    Verify {
        #[arg(default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = bgkmix::config::DEFAULT_SEED)]
        seed: u64,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_system(s: &str) -> Result<LimitSystem, String> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Relax { config, out } => commands::relax(&config, out),
        Command::Transport { config, out } => commands::transport(&config, out),
        Command::Mhd { config, out } => commands::mhd(&config, out),
        Command::Limits { system, refine, base, c1, c2, c3, c5, nu, out } => {
            commands::limits(system, refine, base, [c1, c2, c3, c5, nu], out)
        }
        Command::Verify { suite, seed, out } => commands::verify(suite, seed, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
