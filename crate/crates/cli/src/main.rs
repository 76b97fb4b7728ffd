//! `shiftseq` command-line front end.
//!
//! Every command writes one JSON report to standard output. `--pretty` adds a
//! human-readable summary on standard error.
//!
//! Exit codes: 0 success, 1 verdict or reproduction failure, 2 input error,
//! 3 budget refusal.

mod commands;
mod report;
mod reproduce;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "shiftseq",
    version,
    about = "Interleaved low-correlation signal sets and shift-sequence conditions"
)]
pub struct Cli {
    /// Print a human-readable summary to standard error.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a 2-level autocorrelation sequence.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Periodic cross- or autocorrelation profile.
    Correlate(CorrelateArgs),
    /// Build the interleaved signal set.
    Build(BuildArgs),
    /// Check a shift-sequence condition.
    Check(CheckArgs),
    /// Search shift-sequence space.
    Search(SearchArgs),
    /// Exhaustively test the open condition for 2 <= v <= vmax.
    VerifyNonexistence(VerifyArgs),
    /// Re-run the reference checks and print a pass/fail table.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Subcommand)]
enum GenFamily {
    /// Maximal-length LFSR sequence of period 2^n - 1.
    Mseq {
        #[arg(long)]
        degree: usize,
        /// Characteristic polynomial, highest degree first ("1011" = x^3 + x + 1).
        #[arg(long)]
        poly: String,
        /// Initial state s_0 .. s_{n-1}.
        #[arg(long)]
        state: String,
    },
    /// Quadratic-residue sequence of prime period.
    Legendre {
        #[arg(long)]
        v: usize,
        /// Value at index 0.
        #[arg(long, default_value_t = 0)]
        zero: u32,
    },
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: Option<String>,
    /// Autocorrelation of --a.
    #[arg(long)]
    auto: bool,
    /// Use the word-parallel / FFT path.
    #[arg(long)]
    fast: bool,
    /// Prime modulus of the sequences.
    #[arg(long, default_value_t = 2)]
    p: u32,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    /// Shift sequence, e.g. "0,0,1,0,6,3,5".
    #[arg(long)]
    e: String,
    /// Compute the maximum correlation with witnesses.
    #[arg(long)]
    delta: bool,
    /// Use the naive correlation path for delta.
    #[arg(long)]
    naive: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    e: String,
    /// A, B or open.
    #[arg(long)]
    cond: String,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    v: usize,
    /// A, B, b-not-a, open, or a conjunction such as "B&!A".
    #[arg(long)]
    pred: String,
    /// Keep at most N witnesses (0 counts only).
    #[arg(long)]
    limit: Option<usize>,
    /// full, backtrack or sample.
    #[arg(long, default_value = "backtrack")]
    strategy: String,
    /// Number of random candidates for --strategy sample.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Search all v^v vectors instead of fixing e_0 = 0.
    #[arg(long)]
    unnormalized: bool,
    /// Allow exhaustive search beyond the budget.
    #[arg(long)]
    force: bool,
    /// Emit examined counts on standard error.
    #[arg(long)]
    progress: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    vmax: usize,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Emit the table as a JSON report.
    #[arg(long)]
    json: bool,
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replace the example shift sequence (negative control).
    #[arg(long)]
    e: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let result = match &cli.command {
        Command::Gen { family } => match family {
            GenFamily::Mseq { degree, poly, state } => commands::gen_mseq(*degree, poly, state),
            GenFamily::Legendre { v, zero } => commands::gen_legendre(*v, *zero),
        },
        Command::Correlate(args) => commands::correlate(args),
        Command::Build(args) => commands::build(args),
        Command::Check(args) => commands::check(args),
        Command::Search(args) => commands::search(args),
        Command::VerifyNonexistence(args) => commands::verify(args),
        Command::Reproduce(args) => return reproduce::run(args, argv),
    };
    match result {
        Ok(mut outcome) => {
            outcome.report.command = argv;
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", outcome.report.to_json());
            if cli.pretty {
                eprint!("{}", outcome.pretty);
            }
            match outcome.verdict_failure {
                Some(msg) => {
                    eprintln!("verdict: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}
