//! `bmtl`: parse, rewrite, evaluate and check bounded MTL formulas.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use bmtl_core::Rational;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bmtl", version, about = "Bounded metric temporal logic toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula and print its syntax tree as an s-expression.
    Parse(FormulaInput),
    /// Eliminate always/once operators, leaving only since and until.
    Rewrite {
        #[command(flatten)]
        input: FormulaInput,
        #[command(flatten)]
        mode: ModeArgs,
        /// Also print the sequence of rule applications.
        #[arg(long)]
        report: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the exact truth set of a formula over a trace file.
    Eval {
        #[command(flatten)]
        input: FormulaInput,
        #[arg(long, value_name = "PATH")]
        trace: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print operator counts and structural properties of a formula.
    Census {
        #[command(flatten)]
        input: FormulaInput,
        #[arg(long)]
        json: bool,
    },
    /// Run a randomized equivalence campaign for the rewriter.
    Check {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(long, default_value_t = 6)]
        facts: usize,
        #[arg(long, default_value = "40", value_name = "Q")]
        horizon_length: Rational,
        #[arg(long, default_value = "4", value_name = "Q")]
        bound_max: Rational,
        #[arg(long, default_value_t = 4)]
        bound_denominator_max: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct FormulaInput {
    /// Formula text; omit when using --file.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    formula: Option<String>,
    /// Read the formula from a file.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Punctual,
    Mitl,
}

#[derive(Debug, Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value_t = Mode::Punctual)]
    mode: Mode,
    /// Slack of the until jumps (mitl mode only).
    #[arg(long, value_name = "Q")]
    kappa: Option<Rational>,
    /// Slack of the since jumps (mitl mode only).
    #[arg(long, value_name = "Q")]
    lambda: Option<Rational>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
