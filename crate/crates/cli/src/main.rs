//! `semipartm`: two-stage topic modeling (sparse NMF plus spline regression
//! on document covariates), LSA/PLSA/LDA baselines, synthetic-corpus
//! simulation, and cosine-similarity evaluation.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
//! Failures print a one-line JSON record to stderr.

mod commands;
mod config_file;
mod error;
mod model_store;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "semipartm",
    version,
    about = "Two-stage semiparametric topic modeling toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build corpus and covariate matrices from raw documents.
    Ingest(commands::ingest::IngestArgs),
    /// Fit a topic model and persist its artifacts.
    Fit(commands::fit::FitArgs),
    /// Predict topic expressions for new inputs under a fitted model.
    Predict(commands::predict::PredictArgs),
    /// Select the shrinkage penalty by K-fold cross-validation.
    Cv(commands::cv::CvArgs),
    /// Generate a synthetic dataset with known topic structure.
    Simulate(commands::simulate::SimulateArgs),
    /// Run the simulation study over a scenario grid.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// Re-aggregate evaluation rows into comparison tables.
    Report(commands::report::ReportArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result: Result<(), CliError> = match &cli.command {
        Command::Ingest(args) => commands::ingest::run(args),
        Command::Fit(args) => commands::fit::run(args),
        Command::Predict(args) => commands::predict::run(args),
        Command::Cv(args) => commands::cv::run(args),
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Evaluate(args) => commands::evaluate::run(args),
        Command::Report(args) => commands::report::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
