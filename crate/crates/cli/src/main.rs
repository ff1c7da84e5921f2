//! `qdep`: dependency schemes for QDIMACS formulas from the command line.
//!
//! Exit codes: 0 success (and "dependent" for `query`, "all passed" for
//! `check`), 1 negative verdict, 2 unreadable or malformed input, 3 usage
//! error, 4 budget exceeded.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "qdep", version, about = "Variable dependencies of quantified CNF formulas")]
struct Cli {
    /// Write a JSON run report (timings and work counters) to standard error.
    #[arg(long, global = true)]
    report: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a dependency relation.
    Deps(DepsArgs),
    /// Decide whether one pair is a resolution-path dependency.
    Query(QueryArgs),
    /// Evaluate a formula by brute force.
    Eval(EvalArgs),
    /// Cross-check the dependency computation against slow oracles.
    Check(CheckArgs),
    /// Time the per-variable dependency computation on generated formulas.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Res,
    Triv,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
pub struct DepsArgs {
    /// QDIMACS file, or `-` for standard input.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "res")]
    pub scheme: SchemeArg,
    /// Only pairs whose first variable is this one.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub var: Option<u32>,
    /// Attach resolution paths to pairs with an existential first variable.
    #[arg(long)]
    pub witness: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Annotate variables with quantifier and prefix depth.
    #[arg(long)]
    pub verbose: bool,
    /// Worker threads for the full relation.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
}

#[derive(Args)]
pub struct QueryArgs {
    pub file: PathBuf,
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    pub x: u32,
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    pub y: u32,
    #[arg(long)]
    pub witness: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args)]
pub struct EvalArgs {
    pub file: PathBuf,
    /// Refuse formulas with more variables than this.
    #[arg(long, default_value_t = 20)]
    pub max_vars: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub max_vars: usize,
    /// Refuse formulas needing more prefix reorderings than this for D^mat.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_reorderings: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Chain,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "chain")]
    pub family: Family,
    /// Target formula sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Timed runs per size; the median is reported.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub runs: u32,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Failure modes with their exit codes.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Usage(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Usage(_) => 3,
            Failure::Budget(_) => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    let mut run = report::RunReport::start(match &cli.command {
        Command::Deps(_) => "deps",
        Command::Query(_) => "query",
        Command::Eval(_) => "eval",
        Command::Check(_) => "check",
        Command::Bench(_) => "bench",
    });
    let outcome = match &cli.command {
        Command::Deps(a) => commands::deps(a, &mut run),
        Command::Query(a) => commands::query(a, &mut run),
        Command::Eval(a) => commands::eval(a, &mut run),
        Command::Check(a) => commands::check(a, &mut run),
        Command::Bench(a) => commands::bench(a, &mut run),
    };
    if cli.report {
        run.finish();
        eprintln!("{}", serde_json::to_string(&run).expect("report serializes"));
    }
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            let (kind, message) = match &failure {
                Failure::Input(m) => ("error", m),
                Failure::Usage(m) => ("usage error", m),
                Failure::Budget(m) => ("budget exceeded", m),
            };
            eprintln!("qdep: {kind}: {message}");
            ExitCode::from(failure.code())
        }
    }
}
