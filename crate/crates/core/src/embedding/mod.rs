//! Embedded subspaces and restricted transvection groups.
//!
//! An [`EmbeddedSubspace`] is a copy of the hyperbolic plane inside `SL_n/SO(n)`,
//! included through a simple-root block. Words over its points generate the
//! restricted transvection group, whose action on the ambient space can be
//! nontrivial even where the action on the subspace is trivial.

mod central;
mod cocone;
mod roots;

use rand::Rng;
use thiserror::Error;

use crate::gk::{induce_morphism, CartanSl, GkError, InducedMorphism};
use crate::hyperbolic::HyperbolicError;
use crate::numeric::{Residual, Scalar, SquareMatrix, TolerancePolicy};
use crate::par;
use crate::reflection::{
    word_act, words_equal_as_actions, CheckOutcome, Exponent, SpaceModel, SpdModel, SpdPoint, TransvectionWord,
};
use crate::sampling::{sample_rng, SampleRng};

pub use central::{check_perfectness, demo_sl3_central_extension, CentralExtensionDemo, PerfectnessCase, PerfectnessReport};
pub use cocone::{cocone_check, CoconeReport, DiagramSpec};
pub use roots::{
    point_factorization, root_shear_decomposition, PointFactorization, ReflExpr, RootFactor, RootShear,
};

/// Ambient points compared per generator when testing centrality.
pub const CENTRALITY_POINTS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbeddingError {
    #[error("unsupported diagram {0:?}; only \"A2\" is available")]
    DiagramUnsupported(String),
    #[error("matrix must have determinant 1, found {det}")]
    NotUnimodular { det: String },
    #[error("factorization failed: {}", trace.join("; "))]
    FactorizationFailed { trace: Vec<String> },
    #[error(transparent)]
    Gk(#[from] GkError),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
}

/// `SL₂ ↪ SL_n` placing the `2 × 2` block at rows and columns `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootEmbedding {
    pub n: usize,
    pub i: usize,
    pub j: usize,
}

impl RootEmbedding {
    pub fn new(n: usize, i: usize, j: usize) -> Self {
        assert!(i < j && j < n, "invalid root position ({i}, {j}) in dimension {n}");
        RootEmbedding { n, i, j }
    }

    /// The simple root `(k, k + 1)`.
    pub fn simple(n: usize, k: usize) -> Self {
        Self::new(n, k, k + 1)
    }

    pub fn embed<T: Scalar>(&self, g: &SquareMatrix<T>) -> SquareMatrix<T> {
        SquareMatrix::embed_block(g, self.n, self.i, self.j)
    }

    /// The induced morphism of symmetric spaces, preconditions sample-checked.
    pub fn morphism<T: Scalar>(&self, unit: &T, seed: u64, policy: &TolerancePolicy) -> Result<InducedMorphism<T>, GkError> {
        let this = *self;
        induce_morphism(
            &CartanSl::new(2, unit.clone()),
            &CartanSl::new(self.n, unit.clone()),
            move |g: &SquareMatrix<T>| this.embed(g),
            seed,
            policy,
        )
    }
}

/// A hyperbolic plane included into `SL_n/SO(n)` by a root embedding.
#[derive(Clone, Debug)]
pub struct EmbeddedSubspace<T: Scalar> {
    pub root: RootEmbedding,
    pub inclusion: InducedMorphism<T>,
}

impl<T: Scalar> EmbeddedSubspace<T> {
    pub fn new(root: RootEmbedding, unit: &T, seed: u64, policy: &TolerancePolicy) -> Result<Self, GkError> {
        Ok(EmbeddedSubspace {
            root,
            inclusion: root.morphism(unit, seed, policy)?,
        })
    }

    pub fn ambient(&self) -> &SpdModel<T> {
        self.inclusion.target()
    }

    pub fn subspace(&self) -> &SpdModel<T> {
        self.inclusion.source()
    }

    pub fn include(&self, y: &SpdPoint<T>) -> SpdPoint<T> {
        self.inclusion.apply(y)
    }

    pub fn include_word(&self, w: &TransvectionWord<SpdPoint<T>>) -> TransvectionWord<SpdPoint<T>> {
        self.inclusion.apply_transvection(w)
    }

    /// `ι(y)` for a sampled `y` in the subspace.
    pub fn sample_point(&self, rng: &mut SampleRng) -> SpdPoint<T> {
        self.include(&self.subspace().sample_point(rng))
    }
}

/// Random word `tr_{ι(y₁)}^{±1} ∘ … ∘ tr_{ι(y_length)}^{±1}` in the restricted group.
pub fn restricted_transvection_sampler<T: Scalar>(
    sub: &EmbeddedSubspace<T>,
    seed: u64,
    length: usize,
) -> TransvectionWord<SpdPoint<T>> {
    let o = sub.ambient().basepoint();
    let factors: Vec<_> = (0..length)
        .map(|i| {
            let mut rng = sample_rng(seed, "restricted-word", i as u64);
            let y = sub.sample_point(&mut rng);
            let e = if rng.gen_bool(0.5) { Exponent::Direct } else { Exponent::Inverse };
            (y, e)
        })
        .collect();
    TransvectionWord::from_elementary(&factors, &o)
}

/// Triviality on the subspace and, when trivial, centrality in the restricted group.
#[derive(Clone, Debug)]
pub struct CentralKernelReport {
    pub trivial_on_subspace: bool,
    pub triviality_residual: Residual,
    /// Generators tested; zero when the word is not in the kernel.
    pub generators: usize,
    /// `None` when centrality was not asserted.
    pub central: Option<bool>,
    pub centrality_residual: Option<Residual>,
}

impl CentralKernelReport {
    /// In the kernel and central.
    pub fn passed(&self) -> bool {
        self.trivial_on_subspace && self.central == Some(true)
    }
}

/// Checks `w` on `count` subspace samples; if trivial there, compares `w ∘ g` with
/// `g ∘ w` for `count` sampled generators `g = tr_{ι(y)}`.
pub fn check_central_kernel<T: Scalar>(
    sub: &EmbeddedSubspace<T>,
    w: &TransvectionWord<SpdPoint<T>>,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> CentralKernelReport {
    let ambient = sub.ambient();
    let triviality: Vec<Residual> = par::map_indexed(count, |i| {
        let y = sub.sample_point(&mut sample_rng(seed, "kernel-triviality", i as u64));
        let moved = word_act(ambient, w.reflections(), &y).expect("points of the ambient space");
        ambient.distance(&moved, &y, policy)
    });
    let triviality_residual = max_residual(triviality, policy);
    let trivial_on_subspace = triviality_residual.within(policy);
    if !trivial_on_subspace {
        return CentralKernelReport {
            trivial_on_subspace,
            triviality_residual,
            generators: 0,
            central: None,
            centrality_residual: None,
        };
    }
    let o = ambient.basepoint();
    let residuals: Vec<Residual> = par::map_indexed(count, |i| {
        let y = sub.sample_point(&mut sample_rng(seed, "kernel-generator", i as u64));
        let g = TransvectionWord::elementary(y, o.clone());
        let lhs = w.then(&g);
        let rhs = g.then(w);
        words_equal_as_actions(
            ambient,
            lhs.reflections(),
            rhs.reflections(),
            seed ^ i as u64,
            CENTRALITY_POINTS,
            policy,
        )
        .residual
    });
    let centrality_residual = max_residual(residuals, policy);
    CentralKernelReport {
        trivial_on_subspace,
        triviality_residual,
        generators: count,
        central: Some(centrality_residual.within(policy)),
        centrality_residual: Some(centrality_residual),
    }
}

fn max_residual(residuals: Vec<Residual>, policy: &TolerancePolicy) -> Residual {
    residuals
        .into_iter()
        .reduce(Residual::max)
        .unwrap_or_else(|| Residual::exact_zero(policy.precision_bits()))
}

fn outcome(residuals: Vec<Residual>, policy: &TolerancePolicy) -> CheckOutcome {
    let samples = residuals.len();
    let residual = max_residual(residuals, policy);
    CheckOutcome {
        passed: residual.within(policy),
        residual,
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{lemma_matrices, minus_identity_word};
    use crate::numeric::{int, Real};

    #[test]
    fn block_functoriality_is_exact() {
        let p = TolerancePolicy::default();
        for root in [RootEmbedding::new(3, 0, 1), RootEmbedding::new(3, 1, 2), RootEmbedding::new(3, 0, 2)] {
            let m = root.morphism(&int(1), 1, &p).unwrap();
            assert!(m.check_compatibility(2, 100, &p).residual.is_exact_zero());
        }
    }

    #[test]
    fn restricted_words_act_blockwise() {
        let p = TolerancePolicy::default();
        let sub = EmbeddedSubspace::new(RootEmbedding::simple(3, 0), &int(1), 0, &p).unwrap();
        let w = restricted_transvection_sampler(&sub, 5, 3);
        let m = sub.ambient().action_matrix(w.reflections()).unwrap();
        assert_eq!(m.get(2, 2), &int(1));
        assert_eq!(m.get(0, 2), &int(0));
        assert_eq!(m.get(2, 1), &int(0));
        assert_eq!(m.extract_block(0, 1).det(), int(1));
    }

    #[test]
    fn basepoint_transvection_is_identity() {
        let p = TolerancePolicy::default();
        let sub = EmbeddedSubspace::new(RootEmbedding::simple(3, 0), &int(1), 0, &p).unwrap();
        let o = sub.ambient().basepoint();
        let w = TransvectionWord::elementary(o.clone(), o.clone());
        let id = SquareMatrix::identity_like(3, &int(1));
        assert_eq!(sub.ambient().action_matrix(w.reflections()).unwrap(), id);
    }

    #[test]
    fn empty_word_is_central_and_shear_is_not_in_kernel() {
        let p = TolerancePolicy::default();
        let sub = EmbeddedSubspace::new(RootEmbedding::simple(3, 0), &Real::one(128), 0, &p).unwrap();
        let r = check_central_kernel(&sub, &TransvectionWord::identity(), 1, 5, &p);
        assert!(r.passed());
        let a = lemma_matrices(&int(1)).unwrap().a.to_real(128);
        let o = SpdPoint::identity(2, &Real::one(128));
        let w = sub.include_word(&TransvectionWord::elementary(SpdPoint::new_unchecked(a), o));
        let r = check_central_kernel(&sub, &w, 1, 5, &p);
        assert!(!r.trivial_on_subspace && r.central.is_none());
    }

    #[test]
    fn minus_identity_is_trivial_on_the_plane() {
        let p = TolerancePolicy::default();
        let sub = EmbeddedSubspace::new(RootEmbedding::simple(3, 0), &Real::one(128), 0, &p).unwrap();
        let w = sub.include_word(&minus_identity_word(&p).unwrap());
        let r = check_central_kernel(&sub, &w, 3, 4, &p);
        assert!(r.passed(), "{r:?}");
    }
}
