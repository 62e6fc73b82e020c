//! Scoring estimated structures against ground truth with the mean-cosine
//! protocol, plus report aggregation.
//!
//! Topic models recover topics in arbitrary order, so estimated topics are
//! matched to true ones first: by default a Hungarian assignment per
//! training structure (dictionary and expression matrix each against its
//! own truth), with plain index order available for comparison. Holdout
//! expression matrices reuse the training alignment, so the holdout score
//! measures whether a method's unseen-document path preserves the topic
//! identities it learned in training.

mod hungarian;

pub use hungarian::min_cost_assignment;

use thiserror::Error;

use crate::baselines::{
    lda_fit, lda_transform, lsa_fit, lsa_transform_pinv, plsa_fit, plsa_transform, BaselineError,
    LdaOptions, PlsaOptions,
};
use crate::nmf::{nmf_fit, NmfError, NmfOptions};
use crate::numerics::{Matrix, NumericsError};
use crate::scalar::Scalar;
use crate::seed::derive_seed;
use crate::simulate::SyntheticDataset;
use crate::splinereg::{fit_regressors, predict_topics, SplineBasisSpec, SplineError};
use crate::tuning::{cross_validate_xi, CvOptions, TuningError, DEFAULT_XI_GRID};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("matrix shapes differ: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("no rows to aggregate")]
    EmptyInput,
    #[error("unknown method name {0:?}")]
    UnknownMethod(String),
    #[error(transparent)]
    Nmf(#[from] NmfError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    Tuning(#[from] TuningError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Which direction holds one topic's vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Columns,
}

/// `u . v / (||u|| ||v||)`, defined as 0 when either norm is 0 so that
/// vanished topics contribute nothing instead of NaN.
pub fn cosine<T: Scalar>(u: &[T], v: &[T]) -> Result<T, EvalError> {
    if u.len() != v.len() {
        return Err(EvalError::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let mut dot = T::zero();
    let mut nu = T::zero();
    let mut nv = T::zero();
    for (&a, &b) in u.iter().zip(v) {
        dot = dot + a * b;
        nu = nu + a * a;
        nv = nv + b * b;
    }
    if nu == T::zero() || nv == T::zero() {
        return Ok(T::zero());
    }
    Ok(dot / (nu.sqrt() * nv.sqrt()))
}

fn topic_vector<T: Scalar>(m: &Matrix<T>, axis: Axis, k: usize) -> Vec<T> {
    match axis {
        Axis::Rows => m.row(k).to_vec(),
        Axis::Columns => m.col_vec(k),
    }
}

fn topic_count<T: Scalar>(m: &Matrix<T>, axis: Axis) -> usize {
    match axis {
        Axis::Rows => m.rows(),
        Axis::Columns => m.cols(),
    }
}

fn check_shapes<T: Scalar>(
    m_true: &Matrix<T>,
    m_est: &Matrix<T>,
) -> Result<(), EvalError> {
    if m_true.rows() != m_est.rows() || m_true.cols() != m_est.cols() {
        return Err(EvalError::ShapeMismatch {
            left_rows: m_true.rows(),
            left_cols: m_true.cols(),
            right_rows: m_est.rows(),
            right_cols: m_est.cols(),
        });
    }
    Ok(())
}

/// Mean per-topic cosine with topics paired by index.
pub fn matrix_similarity<T: Scalar>(
    m_true: &Matrix<T>,
    m_est: &Matrix<T>,
    axis: Axis,
) -> Result<T, EvalError> {
    let t = topic_count(m_true, axis);
    let identity: Vec<usize> = (0..t).collect();
    matrix_similarity_aligned(m_true, m_est, axis, &identity)
}

/// A topic vector counts as vanished when its largest entry is negligible
/// against the largest entry of its whole matrix; penalty floors leave
/// killed topics at ~1e-12, not exactly zero.
fn vanish_threshold<T: Scalar>(m: &Matrix<T>) -> T {
    let max_abs = m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    max_abs * crate::scalar::cast(1e-10)
}

fn is_vanished<T: Scalar>(v: &[T], threshold: T) -> bool {
    v.iter().all(|x| x.abs() <= threshold)
}

/// Mean per-topic cosine with estimated topic `perm[k]` paired to true
/// topic `k`.
///
/// Topics whose TRUE vector vanished (extreme sparsity wipes whole topics
/// out) are excluded from the mean: no method can say anything about a
/// topic the data never expressed, and an injected ground-truth estimate
/// must still score 1. An estimated topic that vanished against a surviving
/// true topic contributes 0, never NaN. When every true topic vanished the
/// similarity is 0 by convention.
pub fn matrix_similarity_aligned<T: Scalar>(
    m_true: &Matrix<T>,
    m_est: &Matrix<T>,
    axis: Axis,
    perm: &[usize],
) -> Result<T, EvalError> {
    check_shapes(m_true, m_est)?;
    let t = topic_count(m_true, axis);
    if perm.len() != t {
        return Err(EvalError::LengthMismatch {
            left: perm.len(),
            right: t,
        });
    }
    let true_threshold = vanish_threshold(m_true);
    let est_threshold = vanish_threshold(m_est);
    let mut total = T::zero();
    let mut surviving = 0usize;
    for (k, &j) in perm.iter().enumerate() {
        let a = topic_vector(m_true, axis, k);
        if is_vanished(&a, true_threshold) {
            continue;
        }
        surviving += 1;
        let b = topic_vector(m_est, axis, j);
        if !is_vanished(&b, est_threshold) {
            total = total + cosine(&a, &b)?;
        }
    }
    if surviving == 0 {
        return Ok(T::zero());
    }
    Ok(total / crate::scalar::cast(surviving as f64))
}

/// Permutation maximizing the total per-topic cosine (vanished vectors on
/// either side score 0, matching the similarity scoring), computed by
/// Hungarian assignment on the `T x T` score matrix. `perm[k]` is the
/// estimated topic matched to true topic `k`.
pub fn align_topics<T: Scalar>(
    m_true: &Matrix<T>,
    m_est: &Matrix<T>,
    axis: Axis,
) -> Result<Vec<usize>, EvalError> {
    check_shapes(m_true, m_est)?;
    let t = topic_count(m_true, axis);
    let true_threshold = vanish_threshold(m_true);
    let est_threshold = vanish_threshold(m_est);
    let mut cost = Matrix::<f64>::zeros(t, t);
    for i in 0..t {
        let a = topic_vector(m_true, axis, i);
        let a_gone = is_vanished(&a, true_threshold);
        for j in 0..t {
            let b = topic_vector(m_est, axis, j);
            let score = if a_gone || is_vanished(&b, est_threshold) {
                T::zero()
            } else {
                cosine(&a, &b)?
            };
            cost.set(i, j, -score.to_f64_lossy());
        }
    }
    Ok(min_cost_assignment(&cost))
}

/// The model families under comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Lsa,
    Plsa,
    Lda,
    SemiparTm { xi: XiChoice },
}

#[derive(Debug, Clone, PartialEq)]
pub enum XiChoice {
    Fixed(f64),
    CrossValidated,
}

impl Method {
    pub fn label(&self) -> String {
        match self {
            Method::Lsa => "LSA".to_string(),
            Method::Plsa => "PLSA".to_string(),
            Method::Lda => "LDA".to_string(),
            Method::SemiparTm { xi: XiChoice::CrossValidated } => "SemiparTM-cv".to_string(),
            Method::SemiparTm { xi: XiChoice::Fixed(v) } => format!("SemiparTM-{v}"),
        }
    }

    /// Parses CLI spellings: `lsa`, `plsa`, `lda`, `semipartm1`,
    /// `semipartm3`, `semipartmcv`, `semipartm:2.5`.
    pub fn parse(name: &str) -> Result<Method, EvalError> {
        let lower = name.trim().to_lowercase();
        match lower.as_str() {
            "lsa" => return Ok(Method::Lsa),
            "plsa" => return Ok(Method::Plsa),
            "lda" => return Ok(Method::Lda),
            "semipartmcv" | "semipartm-cv" => {
                return Ok(Method::SemiparTm {
                    xi: XiChoice::CrossValidated,
                })
            }
            _ => {}
        }
        if let Some(rest) = lower
            .strip_prefix("semipartm:")
            .or_else(|| lower.strip_prefix("semipartm-"))
            .or_else(|| lower.strip_prefix("semipartm"))
        {
            if let Ok(v) = rest.parse::<f64>() {
                if v >= 0.0 {
                    return Ok(Method::SemiparTm {
                        xi: XiChoice::Fixed(v),
                    });
                }
            }
        }
        Err(EvalError::UnknownMethod(name.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignMode {
    Hungarian,
    IndexOrder,
}

/// How the study obtains PLSA expressions for unseen documents. The aspect
/// model has no parameter for a new document index, so the default refits on
/// the holdout corpus; the refit topics carry no correspondence to the
/// training alignment, which is exactly the holdout collapse the comparison
/// tables show. Fold-in EM (frozen topic-word matrix) is available as the
/// alternative and is what `predict` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlsaHoldoutMode {
    Refit,
    FoldIn,
}

/// Per-method knobs used by the comparative study.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub nmf: NmfOptions,
    pub plsa: PlsaOptions,
    pub lda: LdaOptions,
    pub spline: SplineBasisSpec,
    pub ridge: f64,
    pub cv_grid: Vec<f64>,
    pub cv_folds: usize,
    pub literal_folds: bool,
    pub align: AlignMode,
    pub plsa_holdout: PlsaHoldoutMode,
    /// Base seed for every model-side random stream.
    pub seed: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            nmf: NmfOptions::default(),
            plsa: PlsaOptions::default(),
            lda: LdaOptions::default(),
            spline: SplineBasisSpec::default(),
            ridge: 1e-6,
            cv_grid: DEFAULT_XI_GRID.to_vec(),
            cv_folds: 5,
            literal_folds: false,
            align: AlignMode::Hungarian,
            plsa_holdout: PlsaHoldoutMode::Refit,
            seed: 0,
        }
    }
}

/// Similarities of one fitted method against a dataset's ground truth.
#[derive(Debug, Clone)]
pub struct MethodEvaluation {
    pub method: String,
    pub sim_b_train: f64,
    pub sim_b_holdout: Option<f64>,
    pub sim_x_train: f64,
    /// Training alignment of estimated dictionary columns to true topics.
    pub dictionary_permutation: Vec<usize>,
    /// Training alignment of estimated expression rows to true topics; the
    /// holdout score reuses this permutation.
    pub expression_permutation: Vec<usize>,
    pub xi_used: Option<f64>,
}

struct FittedStructures<T> {
    x_hat: Matrix<T>,
    b_hat: Matrix<T>,
    b_hat_holdout: Option<Matrix<T>>,
    xi_used: Option<f64>,
}

fn fit_structures<T: Scalar>(
    dataset: &SyntheticDataset<T>,
    method: &Method,
    options: &EvalOptions,
) -> Result<FittedStructures<T>, EvalError> {
    let y_train = &dataset.y_train.scores;
    let y_holdout = &dataset.y_holdout.scores;
    let topics = dataset.b_true_train.rows();
    let has_holdout = y_holdout.cols() > 0;
    match method {
        Method::Lsa => {
            let model = lsa_fit(y_train, topics)?;
            let holdout = if has_holdout {
                Some(lsa_transform_pinv(y_holdout, &model)?)
            } else {
                None
            };
            Ok(FittedStructures {
                x_hat: model.x,
                b_hat: model.b,
                b_hat_holdout: holdout,
                xi_used: None,
            })
        }
        Method::Plsa => {
            let mut fit_options = options.plsa.clone();
            fit_options.seed = derive_seed(options.seed, "plsa", 0);
            let model = plsa_fit(y_train, topics, &fit_options)?;
            let holdout = if has_holdout {
                let mut fold_options = options.plsa.clone();
                fold_options.seed = derive_seed(options.seed, "plsa-fold", 0);
                Some(match options.plsa_holdout {
                    PlsaHoldoutMode::FoldIn => plsa_transform(y_holdout, &model, &fold_options)?,
                    PlsaHoldoutMode::Refit => {
                        // A fresh aspect model over the unseen documents; its
                        // topic order owes nothing to the training fit.
                        if y_holdout.iter().all(|v| *v == T::zero()) {
                            Matrix::filled(
                                topics,
                                y_holdout.cols(),
                                T::one() / crate::scalar::cast(topics as f64),
                            )
                        } else {
                            plsa_fit(y_holdout, topics, &fold_options)?.p_t_given_d
                        }
                    }
                })
            } else {
                None
            };
            Ok(FittedStructures {
                x_hat: model.p_w_given_t,
                b_hat: model.p_t_given_d,
                b_hat_holdout: holdout,
                xi_used: None,
            })
        }
        Method::Lda => {
            let mut fit_options = options.lda.clone();
            fit_options.seed = derive_seed(options.seed, "lda", 0);
            let model = lda_fit(y_train, topics, &fit_options)?;
            let holdout = if has_holdout {
                let mut fold_options = options.lda.clone();
                fold_options.seed = derive_seed(options.seed, "lda-fold", 0);
                Some(lda_transform(y_holdout, &model, &fold_options)?.transpose())
            } else {
                None
            };
            Ok(FittedStructures {
                x_hat: model.phi.transpose(),
                b_hat: model.theta.transpose(),
                b_hat_holdout: holdout,
                xi_used: None,
            })
        }
        Method::SemiparTm { xi } => {
            let z_train = &dataset.z_train.values;
            let xi_value = match xi {
                XiChoice::Fixed(v) => *v,
                XiChoice::CrossValidated => {
                    let cv_options = CvOptions {
                        nmf: options.nmf.clone(),
                        spline: options.spline,
                        ridge: options.ridge,
                        literal_folds: options.literal_folds,
                        jobs: 1,
                    };
                    let cv = cross_validate_xi(
                        y_train,
                        z_train,
                        topics,
                        &options.cv_grid,
                        options.cv_folds,
                        derive_seed(options.seed, "cv", 0),
                        &cv_options,
                    )?;
                    cv.chosen_xi
                }
            };
            let mut fit_options = options.nmf.clone();
            fit_options.seed = derive_seed(options.seed, "nmf", 0);
            let fit = nmf_fit(y_train, topics, crate::scalar::cast(xi_value), &fit_options)?;
            let holdout = if has_holdout {
                let regressor = fit_regressors(&fit.b, z_train, &options.spline, options.ridge)?;
                Some(predict_topics(&regressor, &dataset.z_holdout.values)?)
            } else {
                None
            };
            Ok(FittedStructures {
                x_hat: fit.x,
                b_hat: fit.b,
                b_hat_holdout: holdout,
                xi_used: Some(xi_value),
            })
        }
    }
}

/// Fits `method` on the dataset's training split and scores the aligned
/// similarities of the dictionary (training) and topic-expression matrices
/// (training and holdout). Each training structure is aligned to its own
/// ground truth; the holdout expression matrix reuses the training-B
/// alignment rather than re-aligning, so holdout scores reflect whether a
/// method's unseen-document path preserves its training topic identities.
pub fn evaluate_method<T: Scalar>(
    dataset: &SyntheticDataset<T>,
    method: &Method,
    options: &EvalOptions,
) -> Result<MethodEvaluation, EvalError> {
    let fitted = fit_structures(dataset, method, options)?;
    let topics = dataset.b_true_train.rows();
    let (dictionary_permutation, expression_permutation) = match options.align {
        AlignMode::Hungarian => (
            align_topics(&dataset.x_true, &fitted.x_hat, Axis::Columns)?,
            align_topics(&dataset.b_true_train, &fitted.b_hat, Axis::Rows)?,
        ),
        AlignMode::IndexOrder => ((0..topics).collect(), (0..topics).collect()),
    };
    let sim_x_train = matrix_similarity_aligned(
        &dataset.x_true,
        &fitted.x_hat,
        Axis::Columns,
        &dictionary_permutation,
    )?
    .to_f64_lossy();
    let sim_b_train = matrix_similarity_aligned(
        &dataset.b_true_train,
        &fitted.b_hat,
        Axis::Rows,
        &expression_permutation,
    )?
    .to_f64_lossy();
    let sim_b_holdout = match &fitted.b_hat_holdout {
        Some(b_holdout) => Some(
            matrix_similarity_aligned(
                &dataset.b_true_holdout,
                b_holdout,
                Axis::Rows,
                &expression_permutation,
            )?
            .to_f64_lossy(),
        ),
        None => None,
    };
    Ok(MethodEvaluation {
        method: method.label(),
        sim_b_train,
        sim_b_holdout,
        sim_x_train,
        dictionary_permutation,
        expression_permutation,
        xi_used: fitted.xi_used,
    })
}

/// One replicate-level result line of the simulation study.
#[derive(Debug, Clone)]
pub struct EvalRow {
    pub method: String,
    pub docs: usize,
    pub words: usize,
    pub sparsity: f64,
    pub misspec: f64,
    pub replicate: u64,
    pub sim_b_train: f64,
    pub sim_b_holdout: Option<f64>,
    pub sim_x_train: f64,
    pub xi: Option<f64>,
    pub dataset_seed: u64,
}

/// Grouping keys for report tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKey {
    Docs,
    Words,
    Sparsity,
    Misspec,
}

impl GroupKey {
    pub fn label(&self) -> &'static str {
        match self {
            GroupKey::Docs => "# Docs",
            GroupKey::Words => "# Words",
            GroupKey::Sparsity => "Sparsity",
            GroupKey::Misspec => "Misspec m",
        }
    }

    fn value(&self, row: &EvalRow) -> f64 {
        match self {
            GroupKey::Docs => row.docs as f64,
            GroupKey::Words => row.words as f64,
            GroupKey::Sparsity => row.sparsity,
            GroupKey::Misspec => row.misspec,
        }
    }

    fn format(&self, value: f64) -> String {
        match self {
            GroupKey::Docs | GroupKey::Words => format!("{}", value as u64),
            GroupKey::Sparsity | GroupKey::Misspec => format!("{value}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportLine {
    pub method: String,
    pub row_level: String,
    pub train: Vec<Option<f64>>,
    pub holdout: Vec<Option<f64>>,
    pub dictionary: Vec<Option<f64>>,
}

/// Mean similarities per (method x row-level x column-level) cell, shaped
/// like the comparison tables: three sections (training and holdout topic
/// matrices, training dictionary) over the column levels.
#[derive(Debug, Clone)]
pub struct ReportTable {
    pub row_key: GroupKey,
    pub col_key: GroupKey,
    pub col_levels: Vec<String>,
    pub lines: Vec<ReportLine>,
}

pub fn aggregate_report(
    rows: &[EvalRow],
    row_key: GroupKey,
    col_key: GroupKey,
) -> Result<ReportTable, EvalError> {
    if rows.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let mut methods: Vec<String> = Vec::new();
    for row in rows {
        if !methods.contains(&row.method) {
            methods.push(row.method.clone());
        }
    }
    let mut row_levels: Vec<f64> = Vec::new();
    let mut col_levels: Vec<f64> = Vec::new();
    for row in rows {
        push_level(&mut row_levels, row_key.value(row));
        push_level(&mut col_levels, col_key.value(row));
    }
    row_levels.sort_by(|a, b| a.partial_cmp(b).expect("finite levels"));
    col_levels.sort_by(|a, b| a.partial_cmp(b).expect("finite levels"));

    let mut lines = Vec::new();
    for method in &methods {
        for &row_level in &row_levels {
            let mut train = Vec::new();
            let mut holdout = Vec::new();
            let mut dictionary = Vec::new();
            for &col_level in &col_levels {
                let cell: Vec<&EvalRow> = rows
                    .iter()
                    .filter(|r| {
                        r.method == *method
                            && row_key.value(r) == row_level
                            && col_key.value(r) == col_level
                    })
                    .collect();
                train.push(mean_of(cell.iter().map(|r| Some(r.sim_b_train))));
                holdout.push(mean_of(cell.iter().map(|r| r.sim_b_holdout)));
                dictionary.push(mean_of(cell.iter().map(|r| Some(r.sim_x_train))));
            }
            lines.push(ReportLine {
                method: method.clone(),
                row_level: row_key.format(row_level),
                train,
                holdout,
                dictionary,
            });
        }
    }
    Ok(ReportTable {
        row_key,
        col_key,
        col_levels: col_levels.iter().map(|&v| col_key.format(v)).collect(),
        lines,
    })
}

fn push_level(levels: &mut Vec<f64>, value: f64) {
    if !levels.iter().any(|&v| v == value) {
        levels.push(value);
    }
}

fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for value in values.flatten() {
        sum += value;
        count += 1;
    }
    if count == 0 {
        None
    } else {
        Some(sum / count as f64)
    }
}

/// Plain-text rendering in the three-section comparison layout.
pub fn render_table_text(table: &ReportTable) -> String {
    let mut out = String::new();
    // Wide enough that the section headers never collide.
    let columns = table.col_levels.len().max(1);
    let value_width = 8usize.max(("Dictionary Train".len() + 2).div_ceil(columns));
    let method_width = table
        .lines
        .iter()
        .map(|l| l.method.len())
        .chain(["Method".len()])
        .max()
        .unwrap_or(6)
        + 2;
    let level_width = table
        .lines
        .iter()
        .map(|l| l.row_level.len())
        .chain([table.row_key.label().len()])
        .max()
        .unwrap_or(6)
        + 2;
    let section_width = table.col_levels.len() * value_width;
    out.push_str(&format!(
        "{:<method_width$}{:<level_width$}{:^section_width$}{:^section_width$}{:^section_width$}\n",
        "", "", "Topic Train", "Topic Holdout", "Dictionary Train",
    ));
    out.push_str(&format!(
        "{:<method_width$}{:<level_width$}",
        "Method",
        table.row_key.label(),
    ));
    for _ in 0..3 {
        for level in &table.col_levels {
            out.push_str(&format!("{level:>value_width$}"));
        }
    }
    out.push('\n');
    for line in &table.lines {
        out.push_str(&format!(
            "{:<method_width$}{:<level_width$}",
            line.method, line.row_level
        ));
        for section in [&line.train, &line.holdout, &line.dictionary] {
            for value in section {
                match value {
                    Some(v) => out.push_str(&format!("{v:>value_width$.3}")),
                    None => out.push_str(&format!("{:>value_width$}", "-")),
                }
            }
        }
        out.push('\n');
    }
    out
}

/// TSV rendering: one line per (method, row level), sections flattened into
/// prefixed columns.
pub fn render_table_tsv(table: &ReportTable) -> String {
    let mut out = String::new();
    out.push_str("method\t");
    out.push_str(match table.row_key {
        GroupKey::Docs => "docs",
        GroupKey::Words => "words",
        GroupKey::Sparsity => "sparsity",
        GroupKey::Misspec => "misspec",
    });
    for section in ["train", "holdout", "dictionary"] {
        for level in &table.col_levels {
            out.push_str(&format!("\t{section}_{level}"));
        }
    }
    out.push('\n');
    for line in &table.lines {
        out.push_str(&line.method);
        out.push('\t');
        out.push_str(&line.row_level);
        for section in [&line.train, &line.holdout, &line.dictionary] {
            for value in section {
                match value {
                    Some(v) => out.push_str(&format!("\t{v}")),
                    None => out.push_str("\t"),
                }
            }
        }
        out.push('\n');
    }
    out
}
