//! Topic-modeling toolkit built around a two-stage method: sparse
//! nonnegative matrix factorization of the word-document matrix, followed by
//! additive B-spline regression of the per-topic expression scores on
//! document covariates. The regression stage gives the model a generative
//! path to unseen documents: predict topic expressions from covariates
//! alone.
//!
//! The crate also ships the three classic baselines (LSA, PLSA, LDA), a
//! synthetic-corpus generator for recovery experiments, and a
//! cosine-similarity evaluation protocol with Hungarian topic alignment.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below pin the double-precision instantiation the CLI uses.

pub mod baselines;
pub mod corpus;
pub mod evaluate;
mod exec;
pub mod io;
pub mod nmf;
pub mod numerics;
pub mod scalar;
pub mod seed;
pub mod simulate;
pub mod splinereg;
pub mod study;
pub mod tuning;

pub use numerics::Matrix;
pub use scalar::Scalar;

/// Double-precision aliases for the common instantiation.
pub type Matrix64 = numerics::Matrix<f64>;
pub type Corpus64 = corpus::CorpusMatrix<f64>;
pub type Auxiliary64 = corpus::AuxiliaryTable<f64>;
pub type Factorization64 = nmf::Factorization<f64>;
pub type TopicRegressor64 = splinereg::TopicRegressor<f64>;
pub type CvResult64 = tuning::CvResult<f64>;
pub type LsaModel64 = baselines::LsaModel<f64>;
pub type PlsaModel64 = baselines::PlsaModel<f64>;
pub type LdaModel64 = baselines::LdaModel<f64>;
pub type SyntheticDataset64 = simulate::SyntheticDataset<f64>;

/// Single-precision aliases.
pub type Matrix32 = numerics::Matrix<f32>;
pub type Corpus32 = corpus::CorpusMatrix<f32>;
pub type Factorization32 = nmf::Factorization<f32>;
