//! `fit`: train one model family on a corpus and persist its artifacts.

use std::path::PathBuf;

use clap::Args;

use semipartm_core::baselines::{lda_fit, lsa_fit, plsa_fit, LdaOptions, PlsaOptions};
use semipartm_core::evaluate::{Method, XiChoice};
use semipartm_core::io::{read_aux_tsv, read_corpus_tsv};
use semipartm_core::nmf::{nmf_fit, NmfOptions};
use semipartm_core::scalar::Scalar;
use semipartm_core::seed::derive_seed;
use semipartm_core::splinereg::{fit_regressors, SplineBasisSpec};
use semipartm_core::tuning::{cross_validate_xi, CvOptions, DEFAULT_XI_GRID};
use semipartm_core::{Auxiliary64, Corpus64};

use crate::config_file::ConfigFile;
use crate::error::{usage, CliError};
use crate::model_store::{save_factors, save_regressor, CvSummary, ModelMetadata};

#[derive(Args, Debug)]
pub struct FitArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Auxiliary covariate table; required for the two-stage model.
    #[arg(long)]
    pub aux: Option<PathBuf>,
    /// lsa | plsa | lda | semipartm (with --xi) | semipartm1 | semipartmcv | ...
    #[arg(long)]
    pub method: String,
    #[arg(long)]
    pub topics: Option<usize>,
    /// Penalty for the two-stage model: a number, or `cv`.
    #[arg(long)]
    pub xi: Option<String>,
    /// Comma-separated candidate penalties for `--xi cv`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Round near-integer counts instead of rejecting them (LDA).
    #[arg(long)]
    pub round_counts: bool,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub interior_knots: Option<usize>,
    #[arg(long)]
    pub ridge: Option<f64>,
    /// Train cross-validation on one fold and test on the rest.
    #[arg(long)]
    pub paper_literal_folds: bool,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// `key = value` config file; explicit flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn parse_grid(raw: &str) -> Result<Vec<f64>, CliError> {
    let mut grid = Vec::new();
    for part in raw.split(',') {
        let value: f64 = part
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad grid value {part:?}")))?;
        if value < 0.0 {
            return Err(usage(format!("grid value {value} must be nonnegative")));
        }
        grid.push(value);
    }
    Ok(grid)
}

struct Resolved {
    method: Method,
    topics: usize,
    seed: u64,
    grid: Vec<f64>,
    folds: usize,
    nmf: NmfOptions,
    plsa: PlsaOptions,
    lda: LdaOptions,
    spline: SplineBasisSpec,
    ridge: f64,
    literal_folds: bool,
    jobs: usize,
}

fn resolve(args: &FitArgs) -> Result<Resolved, CliError> {
    let config = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::empty(),
    };
    let mut topics = args.topics;
    let mut xi = args.xi.clone();
    let mut grid = args.grid.clone();
    let mut folds = args.folds;
    let mut seed = args.seed;
    let mut max_iters = args.max_iters;
    let mut rel_tol = args.rel_tol;
    let mut alpha = args.alpha;
    let mut beta = args.beta;
    let mut sweeps = args.sweeps;
    let mut burn_in = args.burn_in;
    let mut degree = args.degree;
    let mut interior_knots = args.interior_knots;
    let mut ridge = args.ridge;
    let mut jobs = args.jobs;
    let mut literal_folds = args.paper_literal_folds;
    let mut round_counts = args.round_counts;
    config.fill(&mut topics, "topics")?;
    config.fill(&mut xi, "xi")?;
    config.fill(&mut grid, "grid")?;
    config.fill(&mut folds, "folds")?;
    config.fill(&mut seed, "seed")?;
    config.fill(&mut max_iters, "max-iters")?;
    config.fill(&mut rel_tol, "rel-tol")?;
    config.fill(&mut alpha, "alpha")?;
    config.fill(&mut beta, "beta")?;
    config.fill(&mut sweeps, "sweeps")?;
    config.fill(&mut burn_in, "burn-in")?;
    config.fill(&mut degree, "degree")?;
    config.fill(&mut interior_knots, "interior-knots")?;
    config.fill(&mut ridge, "ridge")?;
    config.fill(&mut jobs, "jobs")?;
    config.fill_flag(&mut literal_folds, "paper-literal-folds")?;
    config.fill_flag(&mut round_counts, "round-counts")?;

    let topics = topics.ok_or_else(|| usage("--topics is required"))?;
    let seed = seed.unwrap_or(0);

    let bare_semipartm = args.method.trim().eq_ignore_ascii_case("semipartm");
    let mut method = if bare_semipartm {
        // Placeholder penalty; the --xi check below makes it mandatory.
        Method::SemiparTm {
            xi: XiChoice::Fixed(1.0),
        }
    } else {
        Method::parse(&args.method)?
    };
    if let Some(xi_raw) = &xi {
        let choice = if xi_raw == "cv" {
            XiChoice::CrossValidated
        } else {
            let value: f64 = xi_raw
                .parse()
                .map_err(|_| usage(format!("--xi expects a number or `cv`, found {xi_raw:?}")))?;
            XiChoice::Fixed(value)
        };
        match &mut method {
            Method::SemiparTm { xi } => *xi = choice,
            _ => return Err(usage("--xi only applies to the semipartm method")),
        }
    }
    if bare_semipartm && xi.is_none() {
        return Err(usage("--method semipartm requires --xi <value|cv>"));
    }

    let nmf = NmfOptions {
        max_iters: max_iters.unwrap_or(500),
        rel_tol: rel_tol.unwrap_or(1e-6),
        seed: derive_seed(seed, "nmf", 0),
        ..NmfOptions::default()
    };
    let plsa = PlsaOptions {
        max_iters: max_iters.unwrap_or(500),
        rel_tol: rel_tol.unwrap_or(1e-6),
        seed: derive_seed(seed, "plsa", 0),
    };
    let lda = LdaOptions {
        alpha,
        beta: beta.unwrap_or(0.01),
        sweeps: sweeps.unwrap_or(1000),
        burn_in: burn_in.unwrap_or(500),
        sample_every: 10,
        seed: derive_seed(seed, "lda", 0),
        round_counts,
    };
    let spline = SplineBasisSpec {
        degree: degree.unwrap_or(3),
        interior_knots: interior_knots.unwrap_or(5),
    };
    Ok(Resolved {
        method,
        topics,
        seed,
        grid: match &grid {
            Some(raw) => parse_grid(raw)?,
            None => DEFAULT_XI_GRID.to_vec(),
        },
        folds: folds.unwrap_or(5),
        nmf,
        plsa,
        lda,
        spline,
        ridge: ridge.unwrap_or(1e-6),
        literal_folds,
        jobs: jobs.unwrap_or(1),
    })
}

pub fn run(args: &FitArgs) -> Result<(), CliError> {
    let resolved = resolve(args)?;
    let corpus: Corpus64 = read_corpus_tsv(&args.corpus)?;
    let words = corpus.word_count();
    let docs = corpus.doc_count();
    let y = &corpus.scores;

    match &resolved.method {
        Method::Lsa => {
            let model = lsa_fit(y, resolved.topics)?;
            let mut metadata =
                ModelMetadata::blank("lsa", resolved.topics, words, docs, resolved.seed);
            metadata.singular_values = Some(
                model
                    .singular_values
                    .iter()
                    .map(|s| s.to_f64_lossy())
                    .collect(),
            );
            save_factors(
                &args.out,
                &metadata,
                &model.x,
                &corpus.vocabulary,
                &model.b,
                &corpus.doc_ids,
            )?;
        }
        Method::Plsa => {
            let model = plsa_fit(y, resolved.topics, &resolved.plsa)?;
            let mut metadata =
                ModelMetadata::blank("plsa", resolved.topics, words, docs, resolved.seed);
            metadata.iterations = Some(model.log_likelihood_trace.len());
            metadata.final_objective = model.log_likelihood_trace.last().copied();
            save_factors(
                &args.out,
                &metadata,
                &model.p_w_given_t,
                &corpus.vocabulary,
                &model.p_t_given_d,
                &corpus.doc_ids,
            )?;
        }
        Method::Lda => {
            let model = lda_fit(y, resolved.topics, &resolved.lda)?;
            let mut metadata =
                ModelMetadata::blank("lda", resolved.topics, words, docs, resolved.seed);
            metadata.alpha = Some(model.alpha);
            metadata.beta = Some(model.beta);
            metadata.sweeps = Some(resolved.lda.sweeps);
            metadata.burn_in = Some(resolved.lda.burn_in);
            save_factors(
                &args.out,
                &metadata,
                &model.phi.transpose(),
                &corpus.vocabulary,
                &model.theta.transpose(),
                &corpus.doc_ids,
            )?;
        }
        Method::SemiparTm { xi } => {
            let aux_path = args
                .aux
                .as_ref()
                .ok_or_else(|| usage("--aux is required for the semipartm method"))?;
            let aux: Auxiliary64 = read_aux_tsv(aux_path)?;
            let (xi_value, cv_summary) = match xi {
                XiChoice::Fixed(v) => (*v, None),
                XiChoice::CrossValidated => {
                    let cv_options = CvOptions {
                        nmf: resolved.nmf.clone(),
                        spline: resolved.spline,
                        ridge: resolved.ridge,
                        literal_folds: resolved.literal_folds,
                        jobs: resolved.jobs,
                    };
                    let cv = cross_validate_xi(
                        y,
                        &aux.values,
                        resolved.topics,
                        &resolved.grid,
                        resolved.folds,
                        derive_seed(resolved.seed, "cv", 0),
                        &cv_options,
                    )?;
                    let summary = CvSummary {
                        grid: cv.grid.clone(),
                        folds: resolved.folds,
                        mean_errors: cv.mean_errors.clone(),
                        chosen_xi: cv.chosen_xi,
                        literal_folds: resolved.literal_folds,
                    };
                    (cv.chosen_xi, Some(summary))
                }
            };
            let fit = nmf_fit(y, resolved.topics, xi_value, &resolved.nmf)?;
            let regressor = fit_regressors(&fit.b, &aux.values, &resolved.spline, resolved.ridge)?;

            let mut metadata =
                ModelMetadata::blank("semipartm", resolved.topics, words, docs, resolved.seed);
            metadata.xi = Some(xi_value);
            metadata.iterations = Some(fit.iterations_run);
            metadata.final_objective = fit.objective_trace.last().copied();
            metadata.nmf_max_iters = Some(resolved.nmf.max_iters);
            metadata.nmf_rel_tol = Some(resolved.nmf.rel_tol);
            metadata.nmf_epsilon_floor = Some(resolved.nmf.epsilon_floor);
            metadata.spline_degree = Some(resolved.spline.degree);
            metadata.spline_interior_knots = Some(resolved.spline.interior_knots);
            metadata.ridge = Some(resolved.ridge);
            metadata.cv = cv_summary;
            metadata.aux_columns = Some(aux.columns.clone());
            save_factors(
                &args.out,
                &metadata,
                &fit.x,
                &corpus.vocabulary,
                &fit.b,
                &corpus.doc_ids,
            )?;
            save_regressor(&args.out, &regressor, &aux.columns)?;
        }
    }
    println!(
        "fitted {} with {} topics on {} documents",
        resolved.method.label(),
        resolved.topics,
        docs
    );
    Ok(())
}
