//! Reflection spaces, their axioms, and words in elementary reflections.
//!
//! A [`SpaceModel`] supplies the point set, the reflection map `x.y`, a seeded
//! sampler and a distance. Words are finite letter sequences `p₁ … p_k` standing
//! for `σ_{p₁} ∘ … ∘ σ_{p_k}`; two words are compared only through their action
//! on sampled points, never syntactically.

mod checks;
mod line;
mod spd;
mod word;

use std::fmt;

use thiserror::Error;

use crate::numeric::{Residual, TolerancePolicy};
use crate::sampling::{sample_rng, SampleRng};

pub use checks::{
    check_axioms, check_conjugation_formula, check_stabilizer_centralizer, word_act,
    words_equal_as_actions, AxiomReport, AxiomResult, CheckOutcome, Rs4Result, StabilizerReport,
};
pub use line::RealLine;
pub use spd::{act_by_matrix, check_matrix_action, BrokenSpdModel, SpdModel, SpdPoint};
pub use word::{Exponent, ReflectionWord, TransvectionWord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReflectionError {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("transvection words need an even number of letters, found {0}")]
    OddLength(usize),
}

/// A concrete reflection space with a chosen basepoint.
pub trait SpaceModel: Send + Sync {
    type Point: Clone + fmt::Debug + fmt::Display + Send + Sync;

    fn name(&self) -> String;

    fn basepoint(&self) -> Self::Point;

    /// Structural validity (dimension, kind). Points built by the model are always valid.
    fn validate(&self, p: &Self::Point) -> Result<(), ReflectionError>;

    /// The reflection map `x.y` on points already known to be valid.
    fn reflect_unchecked(&self, x: &Self::Point, y: &Self::Point) -> Self::Point;

    fn reflect(&self, x: &Self::Point, y: &Self::Point) -> Result<Self::Point, ReflectionError> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.reflect_unchecked(x, y))
    }

    fn sample_point(&self, rng: &mut SampleRng) -> Self::Point;

    /// `count` points, the `i`-th drawn from its own stream.
    fn sample(&self, seed: u64, count: usize) -> Vec<Self::Point> {
        crate::par::map_indexed(count, |i| {
            self.sample_point(&mut sample_rng(seed, "points", i as u64))
        })
    }

    fn distance(&self, x: &Self::Point, y: &Self::Point, policy: &TolerancePolicy) -> Residual;

    fn approx_equal(&self, x: &Self::Point, y: &Self::Point, policy: &TolerancePolicy) -> bool {
        self.distance(x, y, policy).within(policy)
    }
}
