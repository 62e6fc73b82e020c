//! `cv`: stand-alone penalty selection by K-fold cross-validation.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use semipartm_core::io::{read_aux_tsv, read_corpus_tsv, write_json, write_matrix_tsv};
use semipartm_core::seed::derive_seed;
use semipartm_core::splinereg::SplineBasisSpec;
use semipartm_core::tuning::{cross_validate_xi, CvOptions, DEFAULT_XI_GRID};
use semipartm_core::{Auxiliary64, Corpus64};

use crate::commands::fit::parse_grid;
use crate::error::{data, usage, CliError};

#[derive(Args, Debug)]
pub struct CvArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub aux: PathBuf,
    #[arg(long)]
    pub topics: usize,
    /// Comma-separated candidate penalties.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Train on one fold and test on the remaining K-1.
    #[arg(long)]
    pub paper_literal_folds: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct CvManifest {
    command: &'static str,
    topics: usize,
    grid: Vec<f64>,
    folds: usize,
    seed: u64,
    literal_folds: bool,
    mean_errors: Vec<f64>,
    chosen_xi: f64,
}

pub fn run(args: &CvArgs) -> Result<(), CliError> {
    if args.topics == 0 {
        return Err(usage("--topics must be positive"));
    }
    let corpus: Corpus64 = read_corpus_tsv(&args.corpus)?;
    let aux: Auxiliary64 = read_aux_tsv(&args.aux)?;
    let grid = match &args.grid {
        Some(raw) => parse_grid(raw)?,
        None => DEFAULT_XI_GRID.to_vec(),
    };
    let options = CvOptions {
        spline: SplineBasisSpec::default(),
        ridge: 1e-6,
        literal_folds: args.paper_literal_folds,
        jobs: args.jobs,
        ..CvOptions::default()
    };
    let result = cross_validate_xi(
        &corpus.scores,
        &aux.values,
        args.topics,
        &grid,
        args.folds,
        derive_seed(args.seed, "cv", 0),
        &options,
    )?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| data(format!("cannot create {}: {e}", args.out.display())))?;
    let candidate_labels: Vec<String> = grid.iter().map(|x| format!("xi={x}")).collect();
    let fold_labels: Vec<String> = (1..=args.folds).map(|f| format!("fold{f}")).collect();
    write_matrix_tsv(
        &args.out.join("cv_errors.tsv"),
        &result.fold_errors,
        &candidate_labels,
        &fold_labels,
        "candidate",
    )?;
    write_json(
        &args.out.join("metadata.json"),
        &CvManifest {
            command: "cv",
            topics: args.topics,
            grid: result.grid.clone(),
            folds: args.folds,
            seed: args.seed,
            literal_folds: args.paper_literal_folds,
            mean_errors: result.mean_errors.clone(),
            chosen_xi: result.chosen_xi,
        },
    )?;
    println!("chosen xi = {}", result.chosen_xi);
    Ok(())
}
