use super::{ReflectionError, ReflectionWord, SpaceModel, TransvectionWord};
use crate::numeric::{Residual, TolerancePolicy};
use crate::par;
use crate::sampling::sample_rng;

/// Pass/fail together with the largest residual seen over `samples` points.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub passed: bool,
    pub residual: Residual,
    pub samples: usize,
}

impl CheckOutcome {
    fn from_residuals(residuals: Vec<Residual>, policy: &TolerancePolicy) -> Self {
        let samples = residuals.len();
        let residual = residuals
            .into_iter()
            .reduce(Residual::max)
            .unwrap_or_else(|| Residual::exact_zero(policy.precision_bits()));
        CheckOutcome {
            passed: residual.within(policy),
            residual,
            samples,
        }
    }
}

/// `σ_{p₁}(σ_{p₂}(… σ_{p_k}(y) …))`; the empty word is the identity.
pub fn word_act<M: SpaceModel>(
    model: &M,
    w: &ReflectionWord<M::Point>,
    y: &M::Point,
) -> Result<M::Point, ReflectionError> {
    model.validate(y)?;
    for p in w.letters() {
        model.validate(p)?;
    }
    Ok(act_unchecked(model, w, y))
}

fn act_unchecked<M: SpaceModel>(model: &M, w: &ReflectionWord<M::Point>, y: &M::Point) -> M::Point {
    w.letters()
        .iter()
        .rev()
        .fold(y.clone(), |acc, p| model.reflect_unchecked(p, &acc))
}

/// Compares two words through their action on `count` sampled points.
///
/// This is equality in the automorphism group of the model, not in any
/// abstract presentation.
pub fn words_equal_as_actions<M: SpaceModel>(
    model: &M,
    w1: &ReflectionWord<M::Point>,
    w2: &ReflectionWord<M::Point>,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> CheckOutcome {
    let residuals = par::map_indexed(count, |i| {
        let y = model.sample_point(&mut sample_rng(seed, "action-equality", i as u64));
        let a = act_unchecked(model, w1, &y);
        let b = act_unchecked(model, w2, &y);
        model.distance(&a, &b, policy)
    });
    CheckOutcome::from_residuals(residuals, policy)
}

/// Largest residual and number of samples exceeding tolerance for one axiom.
#[derive(Clone, Debug)]
pub struct AxiomResult {
    pub max_residual: Residual,
    pub violations: usize,
}

impl AxiomResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// RS4 is only falsifiable by sampling: pairs with `x ≠ y` and `x.y ≈ y` are violations.
#[derive(Clone, Debug)]
pub struct Rs4Result {
    pub checked_pairs: usize,
    pub equal_pairs: usize,
    pub violations: usize,
}

impl Rs4Result {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub model: String,
    pub samples: usize,
    /// `x.x = x`
    pub rs1: AxiomResult,
    /// `x.(x.y) = y`
    pub rs2: AxiomResult,
    /// `x.(y.z) = (x.y).(x.z)`
    pub rs3: AxiomResult,
    /// `x.y = y ⇒ x = y`, checked contrapositively
    pub rs4: Rs4Result,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.rs1.passed() && self.rs2.passed() && self.rs3.passed() && self.rs4.passed()
    }
}

struct TripleOutcome {
    rs1: Residual,
    rs2: Residual,
    rs3: Residual,
    distinct: bool,
    rs4_violation: bool,
}

/// Runs RS1–RS4 on `count` sampled triples.
pub fn check_axioms<M: SpaceModel>(
    model: &M,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> AxiomReport {
    let outcomes = par::map_indexed(count, |i| {
        let mut rng = sample_rng(seed, "axioms", i as u64);
        let x = model.sample_point(&mut rng);
        let y = model.sample_point(&mut rng);
        let z = model.sample_point(&mut rng);
        let r = |a: &M::Point, b: &M::Point| model.reflect_unchecked(a, b);

        let rs1 = model.distance(&r(&x, &x), &x, policy);
        let xy = r(&x, &y);
        let rs2 = model.distance(&r(&x, &xy), &y, policy);
        let lhs = r(&x, &r(&y, &z));
        let rhs = r(&xy, &r(&x, &z));
        let rs3 = model.distance(&lhs, &rhs, policy);
        let distinct = !model.approx_equal(&x, &y, policy);
        let rs4_violation = distinct && model.approx_equal(&xy, &y, policy);
        TripleOutcome {
            rs1,
            rs2,
            rs3,
            distinct,
            rs4_violation,
        }
    });

    let bits = policy.precision_bits();
    let fold = |pick: fn(&TripleOutcome) -> &Residual| {
        let mut max = Residual::exact_zero(bits);
        let mut violations = 0;
        for o in &outcomes {
            let r = pick(o);
            if !r.within(policy) {
                violations += 1;
            }
            max = max.max(r.clone());
        }
        AxiomResult {
            max_residual: max,
            violations,
        }
    };
    let checked_pairs = outcomes.iter().filter(|o| o.distinct).count();
    AxiomReport {
        model: model.name(),
        samples: count,
        rs1: fold(|o| &o.rs1),
        rs2: fold(|o| &o.rs2),
        rs3: fold(|o| &o.rs3),
        rs4: Rs4Result {
            checked_pairs,
            equal_pairs: count - checked_pairs,
            violations: outcomes.iter().filter(|o| o.rs4_violation).count(),
        },
    }
}

/// Checks `α ∘ σ_y ∘ α⁻¹ = σ_{α(y)}` as actions on fresh samples.
pub fn check_conjugation_formula<M: SpaceModel>(
    model: &M,
    alpha: &ReflectionWord<M::Point>,
    y: &M::Point,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> Result<CheckOutcome, ReflectionError> {
    let moved = word_act(model, alpha, y)?;
    let lhs = ReflectionWord::single(y.clone()).conjugated_by(alpha);
    let rhs = ReflectionWord::single(moved);
    Ok(words_equal_as_actions(model, &lhs, &rhs, seed, count, policy))
}

/// Both sides of `Stab(o) = C(σ_o)` evaluated on one word.
#[derive(Clone, Debug)]
pub struct StabilizerReport {
    pub fixes_basepoint: bool,
    pub basepoint_residual: Residual,
    pub centralizes: bool,
    pub centralizer_residual: Residual,
}

impl StabilizerReport {
    /// The two memberships agree.
    pub fn consistent(&self) -> bool {
        self.fixes_basepoint == self.centralizes
    }
}

pub fn check_stabilizer_centralizer<M: SpaceModel>(
    model: &M,
    w: &TransvectionWord<M::Point>,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> Result<StabilizerReport, ReflectionError> {
    let o = model.basepoint();
    let image = word_act(model, w.reflections(), &o)?;
    let basepoint_residual = model.distance(&image, &o, policy);
    let sigma_o = ReflectionWord::single(o);
    let left = w.reflections().then(&sigma_o);
    let right = sigma_o.then(w.reflections());
    let outcome = words_equal_as_actions(model, &left, &right, seed, count, policy);
    Ok(StabilizerReport {
        fixes_basepoint: basepoint_residual.within(policy),
        basepoint_residual,
        centralizes: outcome.passed,
        centralizer_residual: outcome.residual,
    })
}
