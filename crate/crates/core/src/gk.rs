//! The `G/K` construction for matrix groups with involution.
//!
//! A coset `gK` is stored with its representative `g` and its canonical
//! coordinate `τ(g) = g·θ(g)⁻¹`. Cosets are compared only through canonical
//! coordinates. For the Cartan involution `θ(g) = (gᵀ)⁻¹` the canonical
//! coordinate is `g·gᵀ` and the reflection map becomes `P·Q⁻¹·P`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::numeric::{is_special_orthogonal, Rational, Residual, Scalar, SquareMatrix, TolerancePolicy};
use crate::par;
use crate::reflection::{
    word_act, CheckOutcome, ReflectionWord, SpaceModel, SpdModel, SpdPoint, TransvectionWord,
};
use crate::sampling::{random_rotation, random_shear_product, sample_rng, SampleRng};

/// Samples used to test the homomorphism and equivariance preconditions of a morphism.
pub const PRECONDITION_SAMPLES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GkError {
    #[error("matrix is not in the group: {reason}")]
    NotInGroup { reason: String },
    #[error("map does not respect the involutions; witness {witness}")]
    InvolutionNotRespected { witness: String },
    #[error("map is not a group homomorphism; witness pair {left} and {right}")]
    NotHomomorphism { left: String, right: String },
    #[error("map does not land in the target group; witness {witness}")]
    LeavesTarget { witness: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// A matrix group `G` with an involutive automorphism `θ`.
pub trait InvolutiveGroup<T: Scalar>: Send + Sync {
    fn n(&self) -> usize;

    fn unit(&self) -> T;

    /// Membership residual; zero (exact or within tolerance) iff `g ∈ G`.
    fn membership_defect(&self, g: &SquareMatrix<T>, policy: &TolerancePolicy) -> Residual;

    fn involution(&self, g: &SquareMatrix<T>) -> SquareMatrix<T>;

    fn sample_element(&self, rng: &mut SampleRng) -> SquareMatrix<T>;

    /// Whether `K ∩ τ(G) = {e}` is known analytically for this group.
    fn twist_meets_k_trivially(&self) -> bool {
        false
    }

    fn identity(&self) -> SquareMatrix<T> {
        SquareMatrix::identity_like(self.n(), &self.unit())
    }

    fn check_member(&self, g: &SquareMatrix<T>, policy: &TolerancePolicy) -> Result<(), GkError> {
        if g.n() != self.n() {
            return Err(GkError::DimensionMismatch {
                expected: self.n(),
                found: g.n(),
            });
        }
        let defect = self.membership_defect(g, policy);
        if defect.within(policy) {
            Ok(())
        } else {
            Err(GkError::NotInGroup {
                reason: format!("membership defect {defect} for {g}"),
            })
        }
    }

    /// `g ∈ K` iff `θ(g) = g`.
    fn in_fixed_subgroup(&self, g: &SquareMatrix<T>, policy: &TolerancePolicy) -> bool {
        Residual::between(&self.involution(g), g, policy.precision_bits()).within(policy)
    }
}

/// `SL_n` with the Cartan involution `θ(g) = (gᵀ)⁻¹`; `K = SO(n)`.
#[derive(Clone, Debug)]
pub struct CartanSl<T> {
    n: usize,
    unit: T,
}

impl<T: Scalar> CartanSl<T> {
    pub fn new(n: usize, unit: T) -> Self {
        assert!(n >= 2, "SL_n needs n >= 2");
        CartanSl { n, unit }
    }

    /// The symmetric space `G/K` in canonical coordinates.
    pub fn space(&self) -> SpdModel<T> {
        SpdModel::new(self.n, self.unit.clone())
    }

    pub fn lift(&self, m: &SquareMatrix<Rational>) -> SquareMatrix<T> {
        m.map(|x| self.unit.from_rational_like(x))
    }
}

impl<T: Scalar> InvolutiveGroup<T> for CartanSl<T> {
    fn n(&self) -> usize {
        self.n
    }

    fn unit(&self) -> T {
        self.unit.clone()
    }

    fn membership_defect(&self, g: &SquareMatrix<T>, policy: &TolerancePolicy) -> Residual {
        Residual::between_scalars(&g.det(), &self.unit, policy.precision_bits())
    }

    fn involution(&self, g: &SquareMatrix<T>) -> SquareMatrix<T> {
        g.transpose().inverse().expect("group elements are invertible")
    }

    /// Shear product times a rational rotation, so samples leave `K` in both directions.
    fn sample_element(&self, rng: &mut SampleRng) -> SquareMatrix<T> {
        let g = random_shear_product(self.n, rng).mul(&random_rotation(self.n, rng));
        self.lift(&g)
    }

    /// A positive-definite orthogonal matrix has all eigenvalues equal to one.
    fn twist_meets_k_trivially(&self) -> bool {
        true
    }
}

/// `τ(g) = g·θ(g)⁻¹`.
pub fn twist<T: Scalar, G: InvolutiveGroup<T> + ?Sized>(
    group: &G,
    g: &SquareMatrix<T>,
    policy: &TolerancePolicy,
) -> Result<SquareMatrix<T>, GkError> {
    group.check_member(g, policy)?;
    Ok(twist_unchecked(group, g))
}

fn twist_unchecked<T: Scalar, G: InvolutiveGroup<T> + ?Sized>(group: &G, g: &SquareMatrix<T>) -> SquareMatrix<T> {
    let theta_inv = group
        .involution(g)
        .inverse()
        .expect("group elements are invertible");
    g.mul(&theta_inv)
}

/// A coset `gK` with its canonical coordinate.
#[derive(Clone, Debug)]
pub struct Coset<T> {
    representative: SquareMatrix<T>,
    canonical: SpdPoint<T>,
}

impl<T: Scalar> Coset<T> {
    pub fn new<G: InvolutiveGroup<T> + ?Sized>(
        group: &G,
        g: SquareMatrix<T>,
        policy: &TolerancePolicy,
    ) -> Result<Self, GkError> {
        let canonical = SpdPoint::new_unchecked(twist(group, &g, policy)?);
        Ok(Coset {
            representative: g,
            canonical,
        })
    }

    pub fn basepoint<G: InvolutiveGroup<T> + ?Sized>(group: &G) -> Self {
        let id = group.identity();
        Coset {
            canonical: SpdPoint::new_unchecked(id.clone()),
            representative: id,
        }
    }

    pub fn representative(&self) -> &SquareMatrix<T> {
        &self.representative
    }

    pub fn canonical(&self) -> &SpdPoint<T> {
        &self.canonical
    }

    pub fn distance(&self, other: &Self, policy: &TolerancePolicy) -> Residual {
        Residual::between(self.canonical.matrix(), other.canonical.matrix(), policy.precision_bits())
    }
}

impl<T: Scalar> fmt::Display for Coset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}K", self.representative)
    }
}

/// `μ(gK, hK) = τ(g)θ(h)K` together with the disagreement between its canonical
/// coordinate and `P·Q⁻¹·P`.
#[derive(Clone, Debug)]
pub struct GkReflection<T> {
    pub coset: Coset<T>,
    pub canonical_residual: Residual,
}

pub fn gk_reflect<T: Scalar, G: InvolutiveGroup<T> + ?Sized>(
    group: &G,
    x: &Coset<T>,
    y: &Coset<T>,
    policy: &TolerancePolicy,
) -> GkReflection<T> {
    let rep = x
        .canonical
        .matrix()
        .mul(&group.involution(&y.representative));
    let canonical = SpdPoint::new_unchecked(twist_unchecked(group, &rep));
    let q_inv = y.canonical.matrix().inverse().expect("SPD points are invertible");
    let p = x.canonical.matrix();
    let expected = p.mul(&q_inv).mul(p);
    let canonical_residual = Residual::between(canonical.matrix(), &expected, policy.precision_bits());
    GkReflection {
        coset: Coset {
            representative: rep,
            canonical,
        },
        canonical_residual,
    }
}

/// Largest disagreement between representative and canonical `μ` over sampled pairs.
pub fn check_reflection_coordinates<T: Scalar, G: InvolutiveGroup<T>>(
    group: &G,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> CheckOutcome {
    let residuals = par::map_indexed(count, |i| {
        let mut rng = sample_rng(seed, "gk-reflect", i as u64);
        let x = sample_coset(group, &mut rng);
        let y = sample_coset(group, &mut rng);
        gk_reflect(group, &x, &y, policy).canonical_residual
    });
    outcome(residuals, policy)
}

fn sample_coset<T: Scalar, G: InvolutiveGroup<T> + ?Sized>(group: &G, rng: &mut SampleRng) -> Coset<T> {
    let g = group.sample_element(rng);
    Coset {
        canonical: SpdPoint::new_unchecked(twist_unchecked(group, &g)),
        representative: g,
    }
}

fn outcome(residuals: Vec<Residual>, policy: &TolerancePolicy) -> CheckOutcome {
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

/// Sampled evidence for `K ∩ τ(G) = {e}`.
#[derive(Clone, Debug)]
pub struct Rs4CriterionReport {
    pub samples: usize,
    /// Samples whose twist landed in `K` (within tolerance).
    pub twists_in_k: usize,
    /// Twists in `K` that are not the identity.
    pub violations: usize,
    /// Set when the criterion holds by a spectral argument for this group.
    pub analytic_certificate: bool,
}

impl Rs4CriterionReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Sample `0` is always the identity.
pub fn check_rs4_criterion<G: InvolutiveGroup<crate::numeric::Real>>(
    group: &G,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> Rs4CriterionReport {
    let flags = par::map_indexed(count, |i| {
        let g = if i == 0 {
            group.identity()
        } else {
            group.sample_element(&mut sample_rng(seed, "rs4-criterion", i as u64))
        };
        let tau = twist_unchecked(group, &g);
        let in_k = is_special_orthogonal(&tau, policy).passed;
        let is_identity = Residual::between(&tau, &group.identity(), policy.precision_bits()).within(policy);
        (in_k, in_k && !is_identity)
    });
    Rs4CriterionReport {
        samples: count,
        twists_in_k: flags.iter().filter(|f| f.0).count(),
        violations: flags.iter().filter(|f| f.1).count(),
        analytic_certificate: group.twist_meets_k_trivially(),
    }
}

type MatrixMap<T> = Arc<dyn Fn(&SquareMatrix<T>) -> SquareMatrix<T> + Send + Sync>;

/// The coset map `gK ↦ φ(g)K` induced by a θ-equivariant homomorphism `φ`.
///
/// Because `φ` commutes with the involutions, `φ(τ(g)) = τ(φ(g))`, so the map acts
/// on canonical coordinates by `P ↦ φ(P)`.
#[derive(Clone)]
pub struct InducedMorphism<T> {
    source: SpdModel<T>,
    target: SpdModel<T>,
    map: MatrixMap<T>,
}

impl<T: Scalar> fmt::Debug for InducedMorphism<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InducedMorphism")
            .field("source", &self.source.name())
            .field("target", &self.target.name())
            .finish()
    }
}

/// Builds the induced map after sample-checking that `φ` is a homomorphism into
/// the target group commuting with the involutions.
pub fn induce_morphism<T, S, U, F>(
    source: &S,
    target: &U,
    phi: F,
    seed: u64,
    policy: &TolerancePolicy,
) -> Result<InducedMorphism<T>, GkError>
where
    T: Scalar,
    S: InvolutiveGroup<T>,
    U: InvolutiveGroup<T>,
    F: Fn(&SquareMatrix<T>) -> SquareMatrix<T> + Send + Sync + 'static,
{
    let bits = policy.precision_bits();
    for i in 0..PRECONDITION_SAMPLES {
        let mut rng = sample_rng(seed, "morphism-precondition", i as u64);
        let g = source.sample_element(&mut rng);
        let h = source.sample_element(&mut rng);
        let (pg, ph) = (phi(&g), phi(&h));
        if pg.n() != target.n() {
            return Err(GkError::DimensionMismatch {
                expected: target.n(),
                found: pg.n(),
            });
        }
        if !target.membership_defect(&pg, policy).within(policy) {
            return Err(GkError::LeavesTarget {
                witness: g.to_string(),
            });
        }
        if !Residual::between(&phi(&g.mul(&h)), &pg.mul(&ph), bits).within(policy) {
            return Err(GkError::NotHomomorphism {
                left: g.to_string(),
                right: h.to_string(),
            });
        }
        if !Residual::between(&phi(&source.involution(&g)), &target.involution(&pg), bits).within(policy) {
            return Err(GkError::InvolutionNotRespected {
                witness: g.to_string(),
            });
        }
    }
    Ok(InducedMorphism {
        source: SpdModel::new(source.n(), source.unit()),
        target: SpdModel::new(target.n(), target.unit()),
        map: Arc::new(phi),
    })
}

impl<T: Scalar> InducedMorphism<T> {
    pub fn source(&self) -> &SpdModel<T> {
        &self.source
    }

    pub fn target(&self) -> &SpdModel<T> {
        &self.target
    }

    pub fn apply_matrix(&self, g: &SquareMatrix<T>) -> SquareMatrix<T> {
        (self.map)(g)
    }

    /// Image of a canonical coordinate.
    pub fn apply(&self, p: &SpdPoint<T>) -> SpdPoint<T> {
        SpdPoint::new_unchecked((self.map)(p.matrix()))
    }

    pub fn apply_coset<G: InvolutiveGroup<T>>(&self, target: &G, x: &Coset<T>) -> Coset<T> {
        let g = (self.map)(&x.representative);
        Coset {
            canonical: SpdPoint::new_unchecked(twist_unchecked(target, &g)),
            representative: g,
        }
    }

    pub fn apply_word(&self, w: &ReflectionWord<SpdPoint<T>>) -> ReflectionWord<SpdPoint<T>> {
        w.map(|p| self.apply(p))
    }

    pub fn apply_transvection(&self, w: &TransvectionWord<SpdPoint<T>>) -> TransvectionWord<SpdPoint<T>> {
        w.map(|p| self.apply(p))
    }

    /// `map(x.y) = map(x).map(y)` on sampled pairs, plus `map(o) = o`.
    pub fn check_compatibility(&self, seed: u64, count: usize, policy: &TolerancePolicy) -> CheckOutcome {
        let base = self
            .target
            .distance(&self.apply(&self.source.basepoint()), &self.target.basepoint(), policy);
        let mut residuals = par::map_indexed(count, |i| {
            let mut rng = sample_rng(seed, "morphism-compatibility", i as u64);
            let x = self.source.sample_point(&mut rng);
            let y = self.source.sample_point(&mut rng);
            let lhs = self.apply(&self.source.reflect_unchecked(&x, &y));
            let rhs = self.target.reflect_unchecked(&self.apply(&x), &self.apply(&y));
            self.target.distance(&lhs, &rhs, policy)
        });
        residuals.push(base);
        let mut out = outcome(residuals, policy);
        out.samples = count;
        out
    }
}

/// `σ_o(gK) = θ(g)K`, i.e. `Q ↦ Q⁻¹` in canonical coordinates.
pub fn basepoint_symmetry_is_involution_map<T: Scalar, G: InvolutiveGroup<T>>(
    group: &G,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> CheckOutcome {
    let residuals = par::map_indexed(count, |i| {
        let x = sample_coset(group, &mut sample_rng(seed, "basepoint-symmetry", i as u64));
        let o = Coset::basepoint(group);
        let via_mu = gk_reflect(group, &o, &x, policy).coset;
        let via_theta = twist_unchecked(group, &group.involution(&x.representative));
        Residual::between(via_mu.canonical.matrix(), &via_theta, policy.precision_bits())
    });
    outcome(residuals, policy)
}

/// `tr_{gK}(hK) = τ(g)h·K`, evaluated through the reflection word `[τ(g), o]`.
pub fn check_transvection_action<T: Scalar>(
    group: &CartanSl<T>,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> CheckOutcome {
    let space = group.space();
    let residuals = par::map_indexed(count, |i| {
        let mut rng = sample_rng(seed, "transvection-action", i as u64);
        let g = sample_coset(group, &mut rng);
        let h = sample_coset(group, &mut rng);
        let word = TransvectionWord::elementary(g.canonical.clone(), space.basepoint());
        let acted = word_act(&space, word.reflections(), &h.canonical).expect("points of this space");
        let expected = twist_unchecked(group, &g.canonical.matrix().mul(&h.representative));
        Residual::between(acted.matrix(), &expected, policy.precision_bits())
    });
    outcome(residuals, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, Real};
    use crate::reflection::check_axioms;

    fn exact(n: usize) -> CartanSl<Rational> {
        CartanSl::new(n, int(1))
    }

    #[test]
    fn twist_of_shear() {
        let p = TolerancePolicy::default();
        let g = SquareMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        let t = twist(&exact(2), &g, &p).unwrap();
        assert_eq!(t, SquareMatrix::from_ints(&[&[2, 1], &[1, 1]]));
        let bad = SquareMatrix::from_ints(&[&[2, 0], &[0, 1]]);
        assert!(matches!(twist(&exact(2), &bad, &p), Err(GkError::NotInGroup { .. })));
    }

    #[test]
    fn symmetric_twist_is_square() {
        let p = TolerancePolicy::default();
        let g = SquareMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        assert_eq!(twist(&exact(2), &g, &p).unwrap(), g.mul(&g));
    }

    #[test]
    fn reflection_in_canonical_coordinates() {
        let p = TolerancePolicy::default();
        let group = exact(2);
        let x = Coset::new(&group, SquareMatrix::from_ratios(&[&[(2, 1), (0, 1)], &[(0, 1), (1, 2)]]), &p).unwrap();
        let y = Coset::new(&group, SquareMatrix::from_ints(&[&[1, 1], &[0, 1]]), &p).unwrap();
        let r = gk_reflect(&group, &x, &y, &p);
        assert!(r.canonical_residual.is_exact_zero());
        // P = diag(4, 1/4), Q⁻¹ = [[1, −1], [−1, 2]]
        let expected = SquareMatrix::from_ratios(&[&[(16, 1), (-1, 1)], &[(-1, 1), (1, 8)]]);
        assert_eq!(r.coset.canonical().matrix(), &expected);
        assert_eq!(expected.det(), int(1));
    }

    #[test]
    fn reflection_of_diagonal_point() {
        let p = TolerancePolicy::default();
        let space = exact(2).space();
        let x = SpdPoint::new(SquareMatrix::from_ratios(&[&[(2, 1), (0, 1)], &[(0, 1), (1, 2)]]), &p).unwrap();
        let y = SpdPoint::new(SquareMatrix::from_ints(&[&[2, 1], &[1, 1]]), &p).unwrap();
        let r = space.reflect(&x, &y).unwrap();
        let oracle = SquareMatrix::from_ratios(&[&[(4, 1), (-1, 1)], &[(-1, 1), (1, 2)]]);
        assert_eq!(r.matrix(), &oracle);
        assert_eq!(oracle.det(), int(1));
        let x_coset = Coset::new(&exact(2), SquareMatrix::identity_like(2, &int(1)), &p).unwrap();
        let rs1 = gk_reflect(&exact(2), &x_coset, &x_coset, &p);
        assert!(rs1.coset.distance(&x_coset, &p).is_exact_zero());
    }

    #[test]
    fn coordinates_agree_on_samples() {
        let p = TolerancePolicy::default();
        assert!(check_reflection_coordinates(&exact(2), 1, 100, &p).residual.is_exact_zero());
        assert!(check_reflection_coordinates(&exact(3), 1, 50, &p).residual.is_exact_zero());
    }

    #[test]
    fn rs4_criterion_holds_with_certificate() {
        let p = TolerancePolicy::default();
        let report = check_rs4_criterion(&CartanSl::new(2, Real::one(128)), 5, 100, &p);
        assert!(report.passed() && report.analytic_certificate);
        assert!(report.twists_in_k >= 1);
    }

    #[test]
    fn block_embedding_induces_morphism() {
        let p = TolerancePolicy::default();
        let m = induce_morphism(&exact(2), &exact(3), |g| SquareMatrix::embed_block(g, 3, 0, 1), 3, &p).unwrap();
        let out = m.check_compatibility(4, 100, &p);
        assert!(out.passed && out.residual.is_exact_zero());
        let id = induce_morphism(&exact(3), &exact(3), |g| g.clone(), 3, &p).unwrap();
        let q = exact(3).space().sample(1, 1).remove(0);
        assert_eq!(id.apply(&q), q);
    }

    #[test]
    fn non_orthogonal_conjugation_is_rejected() {
        let p = TolerancePolicy::default();
        let s = SquareMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        let s_inv = s.inverse().unwrap();
        let err = induce_morphism(&exact(2), &exact(2), move |g| s.mul(g).mul(&s_inv), 3, &p).unwrap_err();
        assert!(matches!(err, GkError::InvolutionNotRespected { .. }));
    }

    #[test]
    fn basepoint_symmetry_and_transvections() {
        let p = TolerancePolicy::default();
        assert!(basepoint_symmetry_is_involution_map(&exact(2), 2, 100, &p).residual.is_exact_zero());
        assert!(check_transvection_action(&exact(3), 2, 50, &p).residual.is_exact_zero());
    }

    #[test]
    fn spd_model_passes_axioms_exactly() {
        let p = TolerancePolicy::default();
        let report = check_axioms(&exact(2).space(), 9, 100, &p);
        assert!(report.passed());
        assert!(report.rs3.max_residual.is_exact_zero());
    }
}
