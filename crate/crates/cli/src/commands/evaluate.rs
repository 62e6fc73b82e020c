//! `evaluate`: the simulation study. Enumerates the requested grid, runs
//! every (cell, replicate, method) job, and writes per-replicate rows plus
//! an aggregated comparison table. Partial failures are preserved in a
//! failure manifest instead of aborting the study.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use semipartm_core::evaluate::{
    aggregate_report, render_table_text, render_table_tsv, AlignMode, EvalOptions, GroupKey,
    Method, PlsaHoldoutMode,
};
use semipartm_core::io::{write_json, write_text};
use semipartm_core::study::{run_study, StudyConfig};

use crate::commands::fit::parse_grid;
use crate::commands::rows::render_rows;
use crate::config_file::ConfigFile;
use crate::error::{data, usage, CliError};

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Comma-separated document counts, e.g. `150,1000,3000`.
    #[arg(long)]
    pub docs: Option<String>,
    /// Comma-separated vocabulary sizes.
    #[arg(long)]
    pub words: Option<String>,
    /// Comma-separated sparsity levels.
    #[arg(long)]
    pub sparsity: Option<String>,
    /// Comma-separated misspecification multipliers.
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Comma-separated method names, e.g. `lsa,plsa,lda,semipartm1,semipartmcv`.
    #[arg(long)]
    pub methods: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub holdout_frac: Option<f64>,
    /// Topic alignment before scoring: `hungarian` (default) or `index`.
    #[arg(long)]
    pub align: Option<String>,
    /// PLSA expressions for unseen documents: `refit` (default) or `fold-in`.
    #[arg(long)]
    pub plsa_holdout: Option<String>,
    /// Candidate penalties for the cross-validated configuration.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub folds: Option<usize>,
    /// `key = value` config file; explicit flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct CellRecord {
    docs: usize,
    words: usize,
    sparsity: f64,
    misspec: f64,
}

#[derive(Serialize)]
struct EvaluateManifest {
    command: &'static str,
    seed: u64,
    docs: Vec<usize>,
    words: Vec<usize>,
    sparsity: Vec<f64>,
    misspec: Vec<f64>,
    replicates: usize,
    methods: Vec<String>,
    holdout_fraction: f64,
    jobs: usize,
    align: String,
    plsa_holdout: String,
    cv_grid: Vec<f64>,
    cv_folds: usize,
    cells: Vec<CellRecord>,
}

#[derive(Serialize)]
struct FailureRecord {
    docs: usize,
    words: usize,
    sparsity: f64,
    misspec: f64,
    replicate: u64,
    method: String,
    message: String,
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, CliError> {
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| usage(format!("bad {what} value {part:?}")))
        })
        .collect()
}

pub fn build_study_config(args: &EvaluateArgs) -> Result<StudyConfig, CliError> {
    let config = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::empty(),
    };
    let mut docs = args.docs.clone();
    let mut words = args.words.clone();
    let mut sparsity = args.sparsity.clone();
    let mut misspec = args.m.clone();
    let mut reps = args.reps;
    let mut methods = args.methods.clone();
    let mut seed = args.seed;
    let mut jobs = args.jobs;
    let mut holdout_frac = args.holdout_frac;
    let mut align = args.align.clone();
    let mut plsa_holdout = args.plsa_holdout.clone();
    let mut grid = args.grid.clone();
    let mut folds = args.folds;
    config.fill(&mut docs, "docs")?;
    config.fill(&mut words, "words")?;
    config.fill(&mut sparsity, "sparsity")?;
    config.fill(&mut misspec, "m")?;
    config.fill(&mut reps, "reps")?;
    config.fill(&mut methods, "methods")?;
    config.fill(&mut seed, "seed")?;
    config.fill(&mut jobs, "jobs")?;
    config.fill(&mut holdout_frac, "holdout-frac")?;
    config.fill(&mut align, "align")?;
    config.fill(&mut plsa_holdout, "plsa-holdout")?;
    config.fill(&mut grid, "grid")?;
    config.fill(&mut folds, "folds")?;

    let reps = reps.ok_or_else(|| usage("--reps is required"))?;
    if reps == 0 {
        return Err(usage("--reps must be at least 1"));
    }
    let methods_raw = methods.ok_or_else(|| usage("--methods is required"))?;
    let methods: Vec<Method> = methods_raw
        .split(',')
        .map(|name| Method::parse(name).map_err(CliError::from))
        .collect::<Result<_, _>>()?;

    let mut eval = EvalOptions::default();
    eval.align = match align.as_deref() {
        None | Some("hungarian") => AlignMode::Hungarian,
        Some("index") => AlignMode::IndexOrder,
        Some(other) => return Err(usage(format!("unknown alignment mode {other:?}"))),
    };
    eval.plsa_holdout = match plsa_holdout.as_deref() {
        None | Some("refit") => PlsaHoldoutMode::Refit,
        Some("fold-in") | Some("foldin") => PlsaHoldoutMode::FoldIn,
        Some(other) => return Err(usage(format!("unknown plsa holdout mode {other:?}"))),
    };
    if let Some(raw) = &grid {
        eval.cv_grid = parse_grid(raw)?;
    }
    if let Some(folds) = folds {
        eval.cv_folds = folds;
    }

    Ok(StudyConfig {
        docs: parse_list(docs.as_deref().unwrap_or("150"), "docs")?,
        words: parse_list(words.as_deref().unwrap_or("500"), "words")?,
        sparsities: parse_list(sparsity.as_deref().unwrap_or("0.70"), "sparsity")?,
        misspecs: parse_list(misspec.as_deref().unwrap_or("1"), "misspec")?,
        replicates: reps,
        methods,
        holdout_fraction: holdout_frac.unwrap_or(0.25),
        seed: seed.unwrap_or(0),
        jobs: jobs.unwrap_or(1),
        eval,
    })
}

pub fn run(args: &EvaluateArgs) -> Result<(), CliError> {
    let study = build_study_config(args)?;
    let outcome = run_study::<f64>(&study)?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| data(format!("cannot create {}: {e}", args.out.display())))?;

    let manifest = EvaluateManifest {
        command: "evaluate",
        seed: study.seed,
        docs: study.docs.clone(),
        words: study.words.clone(),
        sparsity: study.sparsities.clone(),
        misspec: study.misspecs.clone(),
        replicates: study.replicates,
        methods: study.methods.iter().map(Method::label).collect(),
        holdout_fraction: study.holdout_fraction,
        jobs: study.jobs,
        align: match study.eval.align {
            AlignMode::Hungarian => "hungarian".to_string(),
            AlignMode::IndexOrder => "index".to_string(),
        },
        plsa_holdout: match study.eval.plsa_holdout {
            PlsaHoldoutMode::Refit => "refit".to_string(),
            PlsaHoldoutMode::FoldIn => "fold-in".to_string(),
        },
        cv_grid: study.eval.cv_grid.clone(),
        cv_folds: study.eval.cv_folds,
        cells: outcome
            .cells
            .iter()
            .map(|c| CellRecord {
                docs: c.docs,
                words: c.words,
                sparsity: c.sparsity,
                misspec: c.misspec,
            })
            .collect(),
    };
    write_json(&args.out.join("manifest.json"), &manifest)?;
    write_text(&args.out.join("rows.tsv"), &render_rows(&outcome.rows))?;

    if !outcome.rows.is_empty() {
        let table = aggregate_report(&outcome.rows, GroupKey::Docs, GroupKey::Words)?;
        write_text(&args.out.join("report_docs_words.txt"), &render_table_text(&table))?;
        write_text(&args.out.join("report_docs_words.tsv"), &render_table_tsv(&table))?;
    }

    if !outcome.failures.is_empty() {
        let records: Vec<FailureRecord> = outcome
            .failures
            .iter()
            .map(|f| FailureRecord {
                docs: f.cell.docs,
                words: f.cell.words,
                sparsity: f.cell.sparsity,
                misspec: f.cell.misspec,
                replicate: f.replicate,
                method: f.method.clone(),
                message: f.message.clone(),
            })
            .collect();
        write_json(&args.out.join("failures.json"), &records)?;
    }
    if outcome.rows.is_empty() {
        return Err(CliError::Numerical(format!(
            "every job failed; see {}",
            args.out.join("failures.json").display()
        )));
    }
    println!(
        "evaluated {} rows across {} cells ({} failures)",
        outcome.rows.len(),
        outcome.cells.len(),
        outcome.failures.len()
    );
    Ok(())
}
