//! Exact p-adic lattice tools: orthogonalization, closest- and
//! largest-vector solvers, invariants, self-checks, and an instance
//! generator. Instances are JSON files with canonical rational strings;
//! reports are deterministic text or JSON.

mod commands;
mod error;
mod instance;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::{CliError, CliResult};
use report::Format;

/// Environment variable overriding the brute-force verification budget
/// (number of enumeration nodes).
const BUDGET_ENV: &str = "PADIC_LATTICE_ORACLE_BUDGET";

#[derive(Parser)]
#[command(
    name = "padic-lattice",
    version,
    about = "Exact algorithms for lattices over the p-adic integers"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orthogonalize the basis of an instance file.
    Orthogonalize {
        instance: PathBuf,
        /// Drive the reduction through the closest-vector solver instead of
        /// the direct frame algorithm.
        #[arg(long)]
        via_cvp: bool,
    },
    /// Solve the closest-vector problem for the instance's target.
    Cvp {
        instance: PathBuf,
        /// Re-check the distance against brute-force enumeration.
        #[arg(long)]
        verify: bool,
    },
    /// Find a largest lattice vector strictly below the top norm.
    Lvp {
        instance: PathBuf,
        /// Re-check the norm against brute-force enumeration.
        #[arg(long)]
        verify: bool,
    },
    /// Print successive maxima, escape distance, and the norm ladder.
    Invariants {
        instance: PathBuf,
        /// Number of ladder entries to print.
        #[arg(long, default_value_t = padic_lattice::DEFAULT_LADDER_LEN)]
        ladder: usize,
    },
    /// Run the verification battery on an instance.
    Check {
        instance: PathBuf,
        /// Ground-truth sidecar to compare against.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Generate a seeded instance plus its ground-truth sidecar.
    Gen {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance output path; the sidecar lands next to it with a
        /// .truth.json extension.
        #[arg(long)]
        out: PathBuf,
    },
}

fn oracle_budget() -> CliResult<u64> {
    match std::env::var(BUDGET_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(padic_lattice::DEFAULT_ORACLE_BUDGET),
        Err(e) => Err(CliError::input(format!("{BUDGET_ENV}: {e}"))),
        Ok(s) => s
            .parse::<u64>()
            .map_err(|e| CliError::input(format!("{BUDGET_ENV}={s:?}: {e}"))),
    }
}

fn run(cli: &Cli) -> CliResult<(report::Report, u8)> {
    match &cli.command {
        Command::Orthogonalize { instance, via_cvp } => {
            let inst = instance::load(instance)?;
            commands::orthogonalize(&inst, *via_cvp)
        }
        Command::Cvp { instance, verify } => {
            let inst = instance::load(instance)?;
            commands::cvp(&inst, *verify, oracle_budget()?)
        }
        Command::Lvp { instance, verify } => {
            let inst = instance::load(instance)?;
            commands::lvp(&inst, *verify)
        }
        Command::Invariants { instance, ladder } => {
            if *ladder == 0 {
                return Err(CliError::input("--ladder must be at least 1"));
            }
            let inst = instance::load(instance)?;
            commands::invariants(&inst, *ladder)
        }
        Command::Check { instance, truth } => {
            let inst = instance::load(instance)?;
            commands::check(&inst, truth.as_deref(), oracle_budget()?)
        }
        Command::Gen {
            p,
            dim,
            rank,
            seed,
            out,
        } => commands::gen(*p, *dim, *rank, *seed, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, exit)) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(exit)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
