//! `dspec`: incidence bialgebras of restriction species and checks of the
//! decomposition-space axioms on their layered complexes.
//!
//! Exit codes: 0 success, 1 unexpected check failure, 2 usage or parse
//! error, 3 invalid structure for the species, 4 operation unsupported by
//! the species.

mod commands;
mod config;
mod error;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CommonArgs, RunConfig};
use error::CliError;
use suites::Which;

#[derive(Parser)]
#[command(name = "dspec", version, about = "Decomposition spaces and incidence bialgebras of restriction species")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coproduct of the structure in FILE.
    Coproduct {
        file: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Antipode of the structure in FILE, checked against the convolution identity.
    Antipode {
        file: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run axiom suites on the layered complex and the incidence bialgebra.
    Check {
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        which: Vec<Which>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Basis counts per grade and the coproduct of every basis element.
    Table {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coproduct { file, common } => commands::coproduct(&RunConfig::resolve(common)?, &file),
        Command::Antipode { file, common } => commands::antipode(&RunConfig::resolve(common)?, &file),
        Command::Check { which, common } => suites::check(&RunConfig::resolve(common)?, &which),
        Command::Table { common } => commands::table(&RunConfig::resolve(common)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
