//! Simulation-study driver: enumerates grid cells, generates replicate
//! datasets, evaluates every requested method, and collects per-replicate
//! rows plus any per-method failures.
//!
//! (cell, replicate) jobs are independent and may run on several threads;
//! seeds derive from the cell/replicate indices, so scheduling never changes
//! the results.

use thiserror::Error;

use crate::evaluate::{evaluate_method, EvalOptions, EvalRow, Method};
use crate::exec::run_jobs;
use crate::scalar::Scalar;
use crate::seed::derive_seed;
use crate::simulate::{run_scenario, ScenarioConfig};

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("study needs at least one replicate")]
    NoReplicates,
    #[error("study needs at least one method")]
    NoMethods,
    #[error("study needs at least one grid cell")]
    EmptyGrid,
}

/// One grid cell of the study.
#[derive(Debug, Clone, PartialEq)]
pub struct CellDesc {
    pub docs: usize,
    pub words: usize,
    pub sparsity: f64,
    pub misspec: f64,
}

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub docs: Vec<usize>,
    pub words: Vec<usize>,
    pub sparsities: Vec<f64>,
    pub misspecs: Vec<f64>,
    pub replicates: usize,
    pub methods: Vec<Method>,
    pub holdout_fraction: f64,
    pub seed: u64,
    pub jobs: usize,
    pub eval: EvalOptions,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            docs: vec![150],
            words: vec![500],
            sparsities: vec![0.70],
            misspecs: vec![1.0],
            replicates: 1,
            methods: vec![Method::Lsa],
            holdout_fraction: 0.25,
            seed: 0,
            jobs: 1,
            eval: EvalOptions::default(),
        }
    }
}

impl StudyConfig {
    /// Full cartesian grid, enumerated docs-major.
    pub fn cells(&self) -> Vec<CellDesc> {
        let mut cells = Vec::new();
        for &docs in &self.docs {
            for &words in &self.words {
                for &sparsity in &self.sparsities {
                    for &misspec in &self.misspecs {
                        cells.push(CellDesc {
                            docs,
                            words,
                            sparsity,
                            misspec,
                        });
                    }
                }
            }
        }
        cells
    }
}

/// A method that failed on one (cell, replicate); the rest of the study
/// carries on.
#[derive(Debug, Clone)]
pub struct StudyFailure {
    pub cell: CellDesc,
    pub replicate: u64,
    pub method: String,
    pub message: String,
}

#[derive(Debug)]
pub struct StudyOutcome {
    pub cells: Vec<CellDesc>,
    pub rows: Vec<EvalRow>,
    pub failures: Vec<StudyFailure>,
}

pub fn run_study<T: Scalar>(config: &StudyConfig) -> Result<StudyOutcome, StudyError> {
    if config.replicates == 0 {
        return Err(StudyError::NoReplicates);
    }
    if config.methods.is_empty() {
        return Err(StudyError::NoMethods);
    }
    let cells = config.cells();
    if cells.is_empty() {
        return Err(StudyError::EmptyGrid);
    }

    let job_count = cells.len() * config.replicates;
    let job_results: Vec<(Vec<EvalRow>, Vec<StudyFailure>)> =
        run_jobs(config.jobs, job_count, |job| {
            let cell = &cells[job / config.replicates];
            let replicate = (job % config.replicates) as u64;
            run_cell_replicate::<T>(config, cell, replicate, job as u64)
        });

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (mut job_rows, mut job_failures) in job_results {
        rows.append(&mut job_rows);
        failures.append(&mut job_failures);
    }
    Ok(StudyOutcome {
        cells,
        rows,
        failures,
    })
}

fn run_cell_replicate<T: Scalar>(
    config: &StudyConfig,
    cell: &CellDesc,
    replicate: u64,
    job_index: u64,
) -> (Vec<EvalRow>, Vec<StudyFailure>) {
    let scenario = ScenarioConfig {
        docs: cell.docs,
        words: cell.words,
        sparsity: cell.sparsity,
        misspec: cell.misspec,
        holdout_fraction: config.holdout_fraction,
        seed: config.seed,
        replicate,
    };
    let dataset_seed = derive_seed(config.seed, "scenario", replicate);
    let dataset = match run_scenario::<T>(&scenario) {
        Ok(d) => d,
        Err(e) => {
            let failures = config
                .methods
                .iter()
                .map(|m| StudyFailure {
                    cell: cell.clone(),
                    replicate,
                    method: m.label(),
                    message: e.to_string(),
                })
                .collect();
            return (Vec::new(), failures);
        }
    };

    let mut eval_options = config.eval.clone();
    eval_options.seed = derive_seed(config.seed, "methods", job_index);

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for method in &config.methods {
        match evaluate_method(&dataset, method, &eval_options) {
            Ok(result) => rows.push(EvalRow {
                method: result.method,
                docs: cell.docs,
                words: cell.words,
                sparsity: cell.sparsity,
                misspec: cell.misspec,
                replicate,
                sim_b_train: result.sim_b_train,
                sim_b_holdout: result.sim_b_holdout,
                sim_x_train: result.sim_x_train,
                xi: result.xi_used,
                dataset_seed,
            }),
            Err(e) => failures.push(StudyFailure {
                cell: cell.clone(),
                replicate,
                method: method.label(),
                message: e.to_string(),
            }),
        }
    }
    (rows, failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::XiChoice;

    fn tiny_config() -> StudyConfig {
        let mut eval = EvalOptions::default();
        eval.nmf.max_iters = 60;
        eval.plsa.max_iters = 60;
        eval.lda.sweeps = 40;
        eval.lda.burn_in = 20;
        eval.lda.sample_every = 5;
        StudyConfig {
            docs: vec![24],
            words: vec![30],
            sparsities: vec![0.5],
            misspecs: vec![1.0],
            replicates: 2,
            methods: vec![
                Method::Lsa,
                Method::SemiparTm {
                    xi: XiChoice::Fixed(1.0),
                },
            ],
            holdout_fraction: 0.25,
            seed: 99,
            jobs: 1,
            eval,
        }
    }

    #[test]
    fn study_produces_one_row_per_cell_replicate_method() {
        let outcome = run_study::<f64>(&tiny_config()).unwrap();
        assert!(outcome.failures.is_empty(), "{:?}", outcome.failures);
        assert_eq!(outcome.rows.len(), 4);
        assert_eq!(outcome.cells.len(), 1);
        for row in &outcome.rows {
            assert!(row.sim_b_train.is_finite());
            assert!((-1.0..=1.0).contains(&row.sim_b_train));
        }
    }

    #[test]
    fn parallel_execution_matches_sequential() {
        let sequential = run_study::<f64>(&tiny_config()).unwrap();
        let parallel = run_study::<f64>(&StudyConfig {
            jobs: 4,
            ..tiny_config()
        })
        .unwrap();
        assert_eq!(sequential.rows.len(), parallel.rows.len());
        for (a, b) in sequential.rows.iter().zip(&parallel.rows) {
            assert_eq!(a.method, b.method);
            assert_eq!(a.replicate, b.replicate);
            assert_eq!(a.sim_b_train, b.sim_b_train);
            assert_eq!(a.sim_b_holdout, b.sim_b_holdout);
            assert_eq!(a.sim_x_train, b.sim_x_train);
        }
    }

    #[test]
    fn invalid_configs_error_out() {
        let mut config = tiny_config();
        config.replicates = 0;
        assert!(matches!(
            run_study::<f64>(&config),
            Err(StudyError::NoReplicates)
        ));
        let mut config = tiny_config();
        config.methods.clear();
        assert!(matches!(run_study::<f64>(&config), Err(StudyError::NoMethods)));
        let mut config = tiny_config();
        config.docs.clear();
        assert!(matches!(run_study::<f64>(&config), Err(StudyError::EmptyGrid)));
    }

    #[test]
    fn grid_enumerates_the_full_cartesian_product() {
        let config = StudyConfig {
            docs: vec![150, 1000, 3000],
            words: vec![500, 1500, 3500],
            sparsities: vec![0.70, 0.90, 0.99],
            misspecs: vec![1.0, 2.0],
            ..tiny_config()
        };
        assert_eq!(config.cells().len(), 54);
    }
}
