//! `gentle`: command-line front end for gentle-core.

mod commands;
mod render;
mod selftest;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "gentle", version, about = "Derived-category computations for gentle algebras")]
struct Cli {
    /// Machine-readable JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Evaluate Hom computations on all cores (output is unchanged).
    #[arg(long, global = true)]
    parallel: bool,
    /// Seed for the random-algebra generator used by `selftest`.
    #[arg(long, global = true, default_value_t = 20261016)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Pair {
    /// Source object, `<word>[@shift]`.
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    /// Target object, `<word>[@shift]`.
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    /// Scalar for band words, `p` or `p/q`.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    scalar: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a presentation, and report its path basis.
    Validate { file: PathBuf },
    /// Permitted and forbidden threads, the matchings between them, and their cycles.
    Threads { file: PathBuf },
    /// Serre orbits of mouth objects and their invariants (n, m).
    Ag {
        file: PathBuf,
        /// Print the orbit graph in DOT format.
        #[arg(long)]
        dot: bool,
    },
    /// Dimension of Hom in the homotopy category between two word complexes.
    Hom {
        file: PathBuf,
        #[command(flatten)]
        pair: Pair,
        /// Report Hom(X, Y[i]) for every i in the window where it can be nonzero.
        #[arg(long)]
        profile: bool,
    },
    /// Combinatorial basis of chain maps between two string complexes.
    Alp {
        file: PathBuf,
        #[command(flatten)]
        pair: Pair,
    },
    /// Exceptional cycles from the thread classification.
    Cycles {
        file: PathBuf,
        /// Re-run the defining checks on every reported cycle.
        #[arg(long)]
        verify: bool,
    },
    /// Decide whether a band complex is an exceptional 1-cycle.
    Band {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        band: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        scalar: String,
    },
    /// Exhaustive search for exceptional cycles among string complexes.
    Search {
        file: PathBuf,
        /// Longest homotopy string considered (default: twice the number of arrows).
        #[arg(long)]
        max_letters: Option<usize>,
        /// Largest |m| accepted in a Serre link (default from the thread lengths).
        #[arg(long)]
        shift_window: Option<i32>,
    },
    /// Run the property suites on a seeded random corpus.
    Selftest {
        /// Number of random algebras.
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

/// Why a command did not succeed, mapped onto the exit codes.
#[derive(Debug)]
pub enum Failure {
    Domain(String),
    Usage(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<gentle_core::GentleError> for Failure {
    fn from(e: gentle_core::GentleError) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("gentle: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
