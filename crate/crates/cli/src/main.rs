//! `reidemeister`: twisted classes, Reidemeister numbers and twisted
//! characters from the command line.
//!
//! Exit status: 0 on success, 1 when a verdict fails (oracle, congruence,
//! chartable resampling), 2 on errors.

mod commands;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use reidemeister_core::oracle::BoxSpec;
use reidemeister_core::Group;

use crate::output::Format;

const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Parser)]
#[command(name = "reidemeister", version, about)]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Seed for sampling checks.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Worker threads for the oracle sweep.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    jobs: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Twisted class of an element "((m,k),n)".
    Classify {
        element: String,
        /// "phi", "phi^k", "id" or "M=[[a,b],[c,d]];eps=±1"
        #[arg(long, default_value = "phi")]
        twist: String,
    },
    /// Reidemeister number of a twist.
    Reidemeister {
        #[arg(long, default_value = "phi")]
        twist: String,
    },
    /// Twisted character table of the four representations.
    Chartable {
        /// Random conjugates checked per class.
        #[arg(long, default_value_t = 50)]
        samples: u32,
    },
    /// Möbius congruences for R(F^n), n = 1..=n_max.
    Congruence {
        /// "A", "A^k", "-A", "I" or "[[a,b],[c,d]]"
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
    },
    /// Brute-force class discovery, checked against the classification.
    Oracle {
        #[arg(long, default_value = "phi")]
        twist: String,
        #[arg(long, default_value_t = 6)]
        v_bound: u32,
        #[arg(long, default_value_t = 4)]
        n_bound: u32,
        #[arg(long, default_value_t = 10)]
        conj_v_bound: u32,
        #[arg(long, default_value_t = 4)]
        conj_z_bound: u32,
    },
    /// Finite invariant orbits on the dual torus with denominators dividing q_max.
    Orbits {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        q_max: u32,
        #[arg(long, default_value = "phi")]
        twist: String,
    },
}

fn run(cli: &Cli) -> anyhow::Result<commands::Outcome> {
    let group = Group::standard();
    match &cli.command {
        Command::Classify { element, twist } => commands::classify(&group, element, twist),
        Command::Reidemeister { twist } => commands::reidemeister(&group, twist),
        Command::Chartable { samples } => commands::chartable(&group, cli.seed, *samples),
        Command::Congruence { matrix, n_max } => commands::congruence(&group, matrix, *n_max),
        Command::Oracle {
            twist,
            v_bound,
            n_bound,
            conj_v_bound,
            conj_z_bound,
        } => {
            let spec = BoxSpec {
                v_bound: *v_bound,
                n_bound: *n_bound,
                conj_v_bound: *conj_v_bound,
                conj_z_bound: *conj_z_bound,
            };
            commands::oracle(&group, twist, spec, cli.jobs as usize)
        }
        Command::Orbits { q_max, twist } => commands::orbits(&group, twist, *q_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = outcome
        .envelope
        .write(cli.format, &mut lock)
        .and_then(|()| Ok(lock.flush()?))
    {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
