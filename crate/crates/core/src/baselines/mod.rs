//! Reference topic models for the comparative study: LSA (truncated SVD),
//! PLSA (aspect-model EM), and LDA (collapsed Gibbs).

mod lda;
mod lsa;
mod plsa;

pub use lda::{lda_fit, lda_transform, LdaModel, LdaOptions};
pub use lsa::{lsa_fit, lsa_transform, lsa_transform_pinv, LsaModel};
pub use plsa::{plsa_fit, plsa_transform, PlsaModel, PlsaOptions};

use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("corpus has no mass")]
    EmptyCorpus,
    #[error("singular value {index} is zero; latent space cannot be inverted")]
    SingularValueZero { index: usize },
    #[error("cell ({row}, {col}) = {value} is not a nonnegative integer count")]
    NonIntegerCounts { row: usize, col: usize, value: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
