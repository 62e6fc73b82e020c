//! Property tests over invariants that hold for arbitrary inputs.

use proptest::prelude::*;

use semipartm_core::corpus::{build_corpus, corpus_sparsity, tokenize, Document, TokenizeOptions};
use semipartm_core::evaluate::{align_topics, cosine, matrix_similarity, Axis};
use semipartm_core::numerics::Matrix;
use semipartm_core::splinereg::{build_basis, quantile_knots, SplineBasisSpec};
use semipartm_core::tuning::make_folds;

fn finite_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1e3..1e3f64, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cosine_self_is_one_and_scale_invariant(v in finite_vec(8), c in 0.1..50.0f64) {
        let norm_sq: f64 = v.iter().map(|x| x * x).sum();
        prop_assume!(norm_sq > 1e-6);
        let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
        let self_sim = cosine(&v, &v).unwrap();
        let scale_sim = cosine(&v, &scaled).unwrap();
        prop_assert!((self_sim - 1.0).abs() < 1e-10);
        prop_assert!((scale_sim - 1.0).abs() < 1e-10);
        let sym_ab = cosine(&v, &scaled).unwrap();
        let sym_ba = cosine(&scaled, &v).unwrap();
        prop_assert!((sym_ab - sym_ba).abs() < 1e-12);
    }

    #[test]
    fn basis_rows_are_partitions_of_unity(values in proptest::collection::vec(0.0..10.0f64, 20..60)) {
        let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - values.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assume!(spread > 1e-3);
        let spec = SplineBasisSpec::default();
        let knots = quantile_knots(&values, &spec);
        let basis = build_basis(&values, spec.degree, &knots).unwrap();
        for i in 0..basis.rows() {
            let sum: f64 = basis.row(i).iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12, "row {} sums to {}", i, sum);
        }
    }

    #[test]
    fn corpus_column_sums_equal_token_counts(texts in proptest::collection::vec("[a-e ]{1,40}", 1..8)) {
        let docs: Vec<Document> = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document::new(format!("d{i}"), t.clone()))
            .collect();
        let options = TokenizeOptions::default();
        let token_counts: Vec<usize> = texts.iter().map(|t| tokenize(t, &options).len()).collect();
        prop_assume!(token_counts.iter().any(|&c| c > 0));
        let corpus = build_corpus::<f64>(&docs, &options).unwrap();
        for (j, &count) in token_counts.iter().enumerate() {
            let sum: f64 = (0..corpus.word_count()).map(|i| corpus.scores.get(i, j)).sum();
            prop_assert_eq!(sum as usize, count);
        }
        let sparsity = corpus_sparsity(&corpus);
        prop_assert!((0.0..=1.0).contains(&sparsity));
    }

    #[test]
    fn folds_partition_documents(docs in 4_usize..60, k in 2_usize..8, seed in any::<u64>()) {
        prop_assume!(k <= docs);
        let folds = make_folds(docs, k, seed);
        let mut all: Vec<usize> = folds.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..docs).collect::<Vec<_>>());
        let max = folds.iter().map(Vec::len).max().unwrap();
        let min = folds.iter().map(Vec::len).min().unwrap();
        prop_assert!(max - min <= 1);
    }

    #[test]
    fn alignment_never_beats_brute_force_nor_loses_to_identity(
        data in proptest::collection::vec(0.0..5.0f64, 3 * 6 * 2),
    ) {
        let m_true = Matrix::from_vec(3, 6, data[..18].to_vec()).unwrap();
        let m_est = Matrix::from_vec(3, 6, data[18..].to_vec()).unwrap();
        let perm = align_topics(&m_true, &m_est, Axis::Rows).unwrap();
        let aligned = semipartm_core::evaluate::matrix_similarity_aligned(
            &m_true, &m_est, Axis::Rows, &perm).unwrap();
        let index = matrix_similarity(&m_true, &m_est, Axis::Rows).unwrap();
        prop_assert!(aligned >= index - 1e-12);
    }

    #[test]
    fn similarity_invariant_under_shared_topic_permutation(
        data in proptest::collection::vec(0.0..5.0f64, 4 * 5 * 2),
        shift in 1_usize..4,
    ) {
        let m_true = Matrix::from_vec(4, 5, data[..20].to_vec()).unwrap();
        let m_est = Matrix::from_vec(4, 5, data[20..].to_vec()).unwrap();
        let order: Vec<usize> = (0..4).map(|k| (k + shift) % 4).collect();
        let base = matrix_similarity(&m_true, &m_est, Axis::Rows).unwrap();
        let permuted = matrix_similarity(
            &m_true.select_rows(&order),
            &m_est.select_rows(&order),
            Axis::Rows,
        ).unwrap();
        prop_assert!((base - permuted).abs() < 1e-12);
    }
}

#[test]
fn tokenize_is_pure() {
    let options = TokenizeOptions::default().with_stemming().with_default_stop_words();
    let text = "Refunds were processed immediately; the manager apologized twice.";
    let a = tokenize(text, &options);
    let b = tokenize(text, &options);
    assert_eq!(a, b);
}
