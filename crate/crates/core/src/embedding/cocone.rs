use std::str::FromStr;

use super::roots::point_factorization;
use super::{outcome, EmbeddingError, RootEmbedding};
use crate::gk::InducedMorphism;
use crate::numeric::{int, Rational, Residual, TolerancePolicy};
use crate::par;
use crate::reflection::{CheckOutcome, SpaceModel};
use crate::sampling::{random_bounded_sl, sample_rng};

/// Spherical rank-two diagram. Only `A2`, i.e. `SL₃` with its two simple-root
/// copies of `SL₂`, is available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramSpec {
    pub name: String,
}

impl DiagramSpec {
    pub fn a2() -> Self {
        DiagramSpec { name: "A2".to_string() }
    }
}

impl FromStr for DiagramSpec {
    type Err = EmbeddingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("a2") || s.eq_ignore_ascii_case("a2-diagram") {
            Ok(DiagramSpec::a2())
        } else {
            Err(EmbeddingError::DiagramUnsupported(s.to_string()))
        }
    }
}

/// Commutativity of the rank-one to rank-two inclusions and generation by
/// rank-one subspaces.
#[derive(Clone, Debug)]
pub struct CoconeReport {
    pub diagram: String,
    pub basepoints_preserved: bool,
    /// Direct inclusion `H_i → X` against `H_i → G_{12}/K_{12} → X`, exact.
    pub commutes: CheckOutcome,
    /// `μ`-compatibility of every inclusion in the diagram, exact.
    pub morphisms: CheckOutcome,
    /// Round-trips of random `SL₃` coset points through nested reflection expressions.
    pub generation: CheckOutcome,
}

impl CoconeReport {
    pub fn passed(&self) -> bool {
        self.basepoints_preserved && self.commutes.passed && self.morphisms.passed && self.generation.passed
    }
}

pub fn cocone_check(
    diagram: &DiagramSpec,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> Result<CoconeReport, EmbeddingError> {
    if diagram.name != "A2" {
        return Err(EmbeddingError::DiagramUnsupported(diagram.name.clone()));
    }
    let unit = int(1);
    let n = 3;
    // For A2 the rank-two group G_{12} is SL₃ itself, and G_{12}/K_{12} → X is the identity.
    let rank_two = crate::gk::induce_morphism(
        &crate::gk::CartanSl::new(n, unit.clone()),
        &crate::gk::CartanSl::new(n, unit.clone()),
        |g: &crate::numeric::SquareMatrix<Rational>| g.clone(),
        seed,
        policy,
    )?;
    let mut rank_one: Vec<(InducedMorphism<Rational>, InducedMorphism<Rational>)> = Vec::new();
    for k in 0..n - 1 {
        let root = RootEmbedding::simple(n, k);
        // H_k → X directly, and H_k → G_{12}/K_{12}
        rank_one.push((root.morphism(&unit, seed, policy)?, root.morphism(&unit, seed ^ 1, policy)?));
    }

    let basepoints_preserved = rank_one.iter().all(|(direct, into_rank_two)| {
        let o = direct.source().basepoint();
        let target_o = direct.target().basepoint();
        direct.apply(&o) == target_o && rank_two.apply(&into_rank_two.apply(&o)) == target_o
    }) && rank_two.apply(&rank_two.source().basepoint()) == rank_two.target().basepoint();

    let commute_residuals: Vec<Residual> = par::map_indexed(count, |i| {
        let mut rng = sample_rng(seed, "cocone-commutes", i as u64);
        rank_one
            .iter()
            .map(|(direct, into_rank_two)| {
                let y = direct.source().sample_point(&mut rng);
                let a = direct.apply(&y);
                let b = rank_two.apply(&into_rank_two.apply(&y));
                direct.target().distance(&a, &b, policy)
            })
            .reduce(Residual::max)
            .expect("two simple roots")
    });
    let commutes = outcome(commute_residuals, policy);

    let mut morphism_residuals = vec![rank_two.check_compatibility(seed, count, policy).residual];
    for (direct, into_rank_two) in &rank_one {
        morphism_residuals.push(direct.check_compatibility(seed, count, policy).residual);
        morphism_residuals.push(into_rank_two.check_compatibility(seed ^ 1, count, policy).residual);
    }
    let mut morphisms = outcome(morphism_residuals, policy);
    morphisms.samples = count;

    let generation_residuals = par::map_indexed(count, |i| -> Result<Residual, EmbeddingError> {
        let g = random_bounded_sl(n, &mut sample_rng(seed, "cocone-generation", i as u64));
        Ok(point_factorization(&g, policy)?.residual)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    Ok(CoconeReport {
        diagram: diagram.name.clone(),
        basepoints_preserved,
        commutes,
        morphisms,
        generation: outcome(generation_residuals, policy),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_a2_is_supported() {
        assert!("A2".parse::<DiagramSpec>().is_ok());
        assert!(matches!("G2".parse::<DiagramSpec>(), Err(EmbeddingError::DiagramUnsupported(_))));
        let p = TolerancePolicy::default();
        let bad = DiagramSpec { name: "B2".to_string() };
        assert!(cocone_check(&bad, 0, 1, &p).is_err());
    }

    #[test]
    fn a2_cocone_commutes_exactly() {
        let p = TolerancePolicy::default();
        let report = cocone_check(&DiagramSpec::a2(), 0, 10, &p).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.commutes.residual.is_exact_zero());
    }
}
