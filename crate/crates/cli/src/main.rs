//! `optsample`: solve, sweep, simulate and compare energy-optimal sampling policies.

mod commands;
mod error;
mod output;
mod policy;
mod scenario;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::CliResult;
use settings::{PresetName, Settings};

#[derive(Debug, Parser)]
#[command(name = "optsample", version, about = "Energy-optimal periodic sampling of a random event time")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Best policy without offset (pi-sharp) and with offset (pi-star).
    Solve(Box<Settings>),
    /// Evaluate policies along a range of one quantity.
    Sweep(Box<Settings>),
    /// Check the analytic expectations of a policy by Monte Carlo.
    Simulate(Box<Settings>),
    /// Penalty, energy and battery-life gain of two policies.
    Compare(Box<Settings>),
    /// Reference scenarios.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
enum PresetAction {
    /// Print a preset as a config file usable with --config.
    Dump {
        #[arg(value_enum)]
        name: PresetName,
        /// Output file [default: stdout].
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Solve(s) => commands::solve::run(&s.resolve()?),
        Command::Sweep(s) => commands::sweep::run(&s.resolve()?),
        Command::Simulate(s) => commands::simulate::run(&s.resolve()?),
        Command::Compare(s) => commands::compare::run(&s.resolve()?),
        Command::Preset { action: PresetAction::Dump { name, out } } => commands::preset::dump(name, out.as_deref()),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors and 0 for --help.
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
