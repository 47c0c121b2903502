//! `kcbs`: verify the KCBS scenario, certify the monogamy decomposition and
//! simulate the key distribution protocol.

mod basis_file;
mod monogamy;
mod output;
mod simulate;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "kcbs", version, about = "KCBS contextuality key distribution simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the pentagon basis and print the KCBS extremes.
    Verify(verify::Args),
    /// Build and check the monogamy certificate for the joint graph.
    Monogamy(monogamy::Args),
    /// Run a protocol session and write its report.
    Simulate(simulate::Args),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Exit codes 2 and 3 carry verdicts, so usage errors use 1.
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Verify(args) => verify::run(&args),
        Command::Monogamy(args) => monogamy::run(&args),
        Command::Simulate(args) => simulate::run(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
