//! The `pds` command-line tool: solve, verify, trace, gen and bench.

use std::io::Write;

pub mod args;
pub mod bench;
pub mod commands;
pub mod report;

pub use args::Cli;
use args::{Command, Format};

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A set failed verification.
    Infeasible,
}

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input.
    Usage(anyhow::Error),
    /// A solver hit its budget or state limit.
    Budget(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.into())
    }
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

pub fn exit_code(r: &Result<Status, Failure>) -> u8 {
    match r {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::Infeasible) => EXIT_INFEASIBLE,
        Err(Failure::Usage(_)) => EXIT_USAGE,
        Err(Failure::Budget(_)) => EXIT_BUDGET,
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Status, Failure> {
    match &cli.command {
        Command::Solve(a) => commands::solve(cli, a, out),
        Command::Verify(a) => commands::verify(cli, a, out),
        Command::Trace(a) => commands::trace(cli, a, out),
        Command::Gen(g) => commands::gen(cli, g, out),
        Command::Bench(a) => {
            let cfg = match &a.config {
                Some(p) => bench::BenchConfig::load(p)?,
                None => bench::BenchConfig::default(),
            };
            let results = bench::run(a.suite, &cfg, cli.seed, a.threads, !cli.no_time).map_err(classify)?;
            if let Some(p) = &a.csv {
                std::fs::write(p, results.csv()?)?;
            }
            if let Some(p) = &a.json {
                std::fs::write(p, results.json()?)?;
            }
            match cli.format {
                Format::Json => out.write_all(results.json()?.as_bytes())?,
                Format::Text => out.write_all(results.text().as_bytes())?,
            }
            let all_verified = results.records.iter().all(|r| r.row.verified == r.row.feasible);
            Ok(if all_verified { Status::Ok } else { Status::Infeasible })
        }
    }
}

/// Budget errors anywhere in the chain map to exit code 3.
fn classify(e: anyhow::Error) -> Failure {
    let budget = e.chain().any(|c| {
        c.downcast_ref::<pds_core::exact::ExactError>().is_some()
            || matches!(
                c.downcast_ref::<pds_core::directed::DpError>(),
                Some(pds_core::directed::DpError::TooManyStates { .. } | pds_core::directed::DpError::WidthTooLarge { .. })
            )
    });
    if budget {
        Failure::Budget(e)
    } else {
        Failure::Usage(e)
    }
}
