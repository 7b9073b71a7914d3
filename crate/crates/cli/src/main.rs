//! `toriclass`: construct (0,1)-polytopes, compute their invariants and
//! reproduce the headline results as JSON reports.
//!
//! Exit status: 0 on success, 1 when a computation's precondition fails
//! (non-normal input to `classgroup`, a failed `reproduce` claim, ...),
//! 2 for usage errors and unreadable or ill-formed input.

mod input;
mod report;
mod reproduce;
mod survey;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::input::InputArgs;

#[derive(Parser, Debug)]
#[command(name = "toriclass", version, about = "Exact invariants of (0,1)-polytopes and their toric rings")]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct OutputArgs {
    /// Emit JSON (the default and only format).
    #[arg(long, global = true)]
    json: bool,
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Every invariant of one polytope.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Compute class group data even when the polytope is not normal; the result is labeled formal.
        #[arg(long)]
        force: bool,
    },
    /// Normalized facet inequalities.
    Facets {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Pairing matrix, Smith form, class group, weights and k_P.
    Classgroup {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        force: bool,
    },
    /// Gale transform and the classified diagram of the dual polytope (rank 2).
    Gale {
        #[command(flatten)]
        input: InputArgs,
        /// Write the standard diagram as SVG to this path.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Combinatorial equivalence and invariant differences of two polytope files.
    Compare { first: PathBuf, second: PathBuf },
    /// The Gröbner basis of the toric ideal of P_{n1,...,nk}, verified.
    ToricGb {
        /// The tuple n1 ... nk.
        #[arg(required = true, num_args = 1..)]
        ns: Vec<usize>,
        /// Also count minimal generators by degree up to this degree.
        #[arg(long, value_name = "D")]
        min_gens: Option<u32>,
    },
    /// Rerun every claim and report computed against expected values.
    Reproduce {
        /// Run only claims whose id or tag matches (repeatable).
        #[arg(long, value_name = "ID|TAG")]
        only: Vec<String>,
        /// Replace a fixed example by a polytope file, as NAME=PATH (q1 or q2).
        #[arg(long, value_name = "NAME=PATH")]
        fixture: Vec<String>,
    },
    /// Histogram of rank-2 diagram types over random (0,1)-polytopes.
    SurveyRank2 {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        dim_max: usize,
    },
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
    /// A report was produced but records a failure.
    Report(Value),
}

impl From<toriclass::Error> for Failure {
    fn from(e: toriclass::Error) -> Self {
        if e.is_input_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

fn emit(v: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("reports serialize");
    println!("{text}");
}

fn run(cli: Cli) -> Result<Value, Failure> {
    let timing = cli.out.timing;
    match cli.command {
        Command::Analyze { input, force } => report::analyze(&input.load()?, force, timing),
        Command::Facets { input } => report::facets(&input.load()?),
        Command::Classgroup { input, force } => report::classgroup(&input.load()?, force),
        Command::Gale { input, svg } => report::gale(&input.load()?, svg.as_deref()),
        Command::Compare { first, second } => {
            report::compare(&input::load_file(&first)?, &input::load_file(&second)?, timing)
        }
        Command::ToricGb { ns, min_gens } => report::toric_gb(&ns, min_gens),
        Command::Reproduce { only, fixture } => reproduce::run(&only, &fixture, timing),
        Command::SurveyRank2 { seed, count, dim_max } => survey::run(seed, count, dim_max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pretty = cli.out.pretty;
    match run(cli) {
        Ok(v) => {
            emit(&v, pretty);
            ExitCode::SUCCESS
        }
        Err(Failure::Report(v)) => {
            emit(&v, pretty);
            ExitCode::from(1)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
