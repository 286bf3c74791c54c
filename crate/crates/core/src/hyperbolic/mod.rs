//! The hyperbolic plane `SL₂(ℝ)/SO(2)`: shear factorizations into positive
//! definite matrices, the generator words `x₊(t)`, `x₋(t)`, the commutator
//! identity that makes the restricted transvection group perfect, and SPD
//! factorizations of arbitrary `SL₂` elements.
//!
//! Product identities between `A(t)`, `B(t)` and `C` are checked exactly in
//! `ℚ(√2)`. Anything involving their square roots runs in [`Real`](crate::numeric::Real).

mod factor;
mod generators;
mod lemma;

use thiserror::Error;

use crate::numeric::NumericError;

pub use factor::{
    factor_shear_spd, factor_sl2_spd_squares, shear_decomposition, shear_spd_factors, Shear, ShearSide, Sl2Factorization,
};
pub use generators::{
    build_generator, exact_generator, exact_minus_identity_word, minus_identity_word, signed_generator,
    verify_commutator_identity, verify_so2_residuals, verify_square_roots, CommutatorReport, GeneratorKind, GeneratorPoints,
    GeneratorWord, So2Report,
};
pub use lemma::{lemma_matrices, lemma_sweep, lower_shear, upper_shear, verify_matrix_lemma, LemmaMatrices, MatrixLemmaReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("parameter t must be nonzero")]
    ZeroParameter,
    #[error("{which} is not positive definite for t = {t}")]
    NotPositiveDefinite { which: String, t: String },
    #[error("matrix must have determinant 1, found {det}")]
    NotUnimodular { det: String },
    #[error("expected a 2 x 2 matrix, found {n} x {n}")]
    NotTwoByTwo { n: usize },
    #[error("word does not act by the expected matrix (residual {residual})")]
    ActionMismatch { residual: String },
    #[error("factorization failed: {}", trace.join("; "))]
    FactorizationFailed { trace: Vec<String> },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
