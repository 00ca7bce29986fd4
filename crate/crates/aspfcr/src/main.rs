use std::io;
use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand};

use aspfcr::cli::{self, Mode, Options};

#[derive(Parser)]
#[command(
    name = "aspfcr",
    version,
    about = "Answer set solver for programs with partial functions and consistency-restoring rules"
)]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute answer sets
    Solve {
        /// Input programs, concatenated in order (`-` reads standard input)
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Maximum number of answers to report, 0 for all
        #[arg(long, default_value_t = 0)]
        models: usize,
        /// Time budget in seconds
        #[arg(long)]
        time: Option<f64>,
        /// Suppress answers whose visible projection repeats an earlier one
        #[arg(long)]
        distinct: bool,
        /// Cross-check the solver against exhaustive enumeration first
        #[arg(long)]
        oracle: bool,
    },
    /// Print the ground program
    Ground {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print per-rule instantiation counts as CSV
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Classify a candidate model against a program
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// File holding one model, literals separated by whitespace
        #[arg(long)]
        model: PathBuf,
    },
    /// Run every .aspf program in a directory against its .expected answers
    Corpus { dir: PathBuf },
}

fn main() {
    let args = Args::parse();
    let mut out = io::stdout();
    let mut err = io::stderr();
    let code = match args.cmd {
        Cmd::Solve { files, models, time, distinct, oracle } => cli::run(
            &Options {
                mode: Mode::Solve,
                files,
                max_models: models,
                time_budget: time,
                distinct,
                oracle,
                model_file: None,
            },
            &mut out,
            &mut err,
        ),
        Cmd::Ground { files } => {
            cli::run(&Options { mode: Mode::Ground, files, ..Options::default() }, &mut out, &mut err)
        }
        Cmd::Stats { files } => {
            cli::run(&Options { mode: Mode::Stats, files, ..Options::default() }, &mut out, &mut err)
        }
        Cmd::Check { files, model } => cli::run(
            &Options { mode: Mode::Check, files, model_file: Some(model), ..Options::default() },
            &mut out,
            &mut err,
        ),
        Cmd::Corpus { dir } => cli::run_corpus(&dir, &mut out, &mut err),
    };
    exit(code);
}
