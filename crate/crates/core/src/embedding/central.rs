use super::roots::root_shear_decomposition;
use super::{check_central_kernel, outcome, CentralKernelReport, EmbeddedSubspace, EmbeddingError, RootEmbedding, CENTRALITY_POINTS};
use crate::hyperbolic::{minus_identity_word, shear_spd_factors, upper_shear, GeneratorKind, GeneratorPoints, GeneratorWord};
use crate::numeric::{int, Rational, Real, Residual, Scalar, SquareMatrix, TolerancePolicy};
use crate::par;
use crate::reflection::{
    check_matrix_action, word_act, words_equal_as_actions, CheckOutcome, ReflectionWord, SpaceModel, SpdPoint,
    TransvectionWord,
};
use crate::sampling::{random_shear_product, sample_rng};

/// Minimum Frobenius displacement that counts as a nontrivial action.
pub const NONTRIVIAL_DISPLACEMENT: f64 = 0.1;

/// The word `(x₊(1)·x₋(−1)·x₊(1))²` over the upper-left plane in `SL₃/SO(3)`.
#[derive(Clone, Debug)]
pub struct CentralExtensionDemo {
    pub word_length: usize,
    /// Ambient action matrix of the word.
    pub action_matrix: SquareMatrix<Real>,
    /// Distance from `diag(−1, −1, 1)`.
    pub action_residual: Residual,
    pub kernel: CentralKernelReport,
    /// `τ(I + E₁₃)`.
    pub witness_point: SpdPoint<Real>,
    pub witness_image: SpdPoint<Real>,
    /// `‖image − point‖`, expected `√8`.
    pub displacement: Real,
    /// `|displacement − √8|`
    pub displacement_error: Real,
    pub max_sampled_displacement: Real,
    /// Residual on `diag([[2, 1], [1, 1]], 1)`, which must stay fixed.
    pub embedded_point_residual: Residual,
}

impl CentralExtensionDemo {
    pub fn trivial_on_subspace(&self, policy: &TolerancePolicy) -> bool {
        self.kernel.trivial_on_subspace && self.embedded_point_residual.within(policy)
    }

    pub fn nontrivial_on_ambient(&self, policy: &TolerancePolicy) -> bool {
        self.displacement_error <= *policy.abs_tol()
            && self.max_sampled_displacement.to_f64() >= NONTRIVIAL_DISPLACEMENT
    }

    pub fn central(&self) -> bool {
        self.kernel.central == Some(true)
    }

    pub fn passed(&self, policy: &TolerancePolicy) -> bool {
        self.action_residual.within(policy)
            && self.trivial_on_subspace(policy)
            && self.nontrivial_on_ambient(policy)
            && self.central()
    }
}

/// Embedded-plane samples and restricted generators both number `count`.
pub fn demo_sl3_central_extension(
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> Result<CentralExtensionDemo, EmbeddingError> {
    let bits = policy.precision_bits();
    let one = Real::one(bits);
    let sub = EmbeddedSubspace::new(RootEmbedding::simple(3, 0), &one, seed, policy)?;
    let ambient = sub.ambient();
    let w = sub.include_word(&minus_identity_word(policy)?);

    let action_matrix = ambient.action_matrix(w.reflections()).expect("transvection words have even length");
    let expected = SquareMatrix::diagonal(vec![int(-1), int(-1), int(1)]).to_real(bits);
    let action_residual = Residual::between(&action_matrix, &expected, bits);

    let q = SquareMatrix::from_ints(&[&[2, 0, 1], &[0, 1, 0], &[1, 0, 1]]).to_real(bits);
    let witness_point = SpdPoint::new_unchecked(q);
    let witness_image = word_act(ambient, w.reflections(), &witness_point).expect("ambient point");
    let displacement = witness_image.matrix().sub(witness_point.matrix()).frobenius_norm(bits);
    let sqrt8 = Real::from_int(8, bits).sqrt().expect("positive");
    let displacement_error = displacement.sub(&sqrt8).abs();

    let sampled = par::map_indexed(count, |i| {
        let y = ambient.sample_point(&mut sample_rng(seed, "ambient-displacement", i as u64));
        let moved = word_act(ambient, w.reflections(), &y).expect("ambient point");
        moved.matrix().sub(y.matrix()).frobenius_norm(bits)
    });
    let max_sampled_displacement = sampled
        .into_iter()
        .fold(displacement.clone(), Real::max);

    let h_point = SpdPoint::new_unchecked(SquareMatrix::from_ints(&[&[2, 1, 0], &[1, 1, 0], &[0, 0, 1]]).to_real(bits));
    let h_image = word_act(ambient, w.reflections(), &h_point).expect("ambient point");
    let embedded_point_residual = ambient.distance(&h_image, &h_point, policy);

    Ok(CentralExtensionDemo {
        word_length: w.len(),
        action_matrix,
        action_residual,
        kernel: check_central_kernel(&sub, &w, seed, count, policy),
        witness_point,
        witness_image,
        displacement,
        displacement_error,
        max_sampled_displacement,
        embedded_point_residual,
    })
}

/// Commutator realizations of `x₊(t/2)·x₊(t)⁻¹` and `x₋(t)·x₋(t/2)⁻¹` in the ambient action.
#[derive(Clone, Debug)]
pub struct PerfectnessCase {
    pub t: Rational,
    /// `[tr_{[c]}, x₊(t)]` against `x₊(t/2)·x₊(t)⁻¹`
    pub bracket: CheckOutcome,
    /// `[x₋(t), tr_{[c]}⁻¹]` against `x₋(t)·x₋(t/2)⁻¹`
    pub mirrored: CheckOutcome,
    /// `[tr_{[c]}, x₊(t)]` against the embedded matrix `[[1, −t/2], [0, 1]]`
    pub block_action: CheckOutcome,
    /// `σ_o ∘ x_±(t)⁻¹ ∘ σ_o` against `x_∓(t)`
    pub sigma_closure: CheckOutcome,
}

impl PerfectnessCase {
    pub fn passed(&self) -> bool {
        self.bracket.passed && self.mirrored.passed && self.block_action.passed && self.sigma_closure.passed
    }

    pub fn max_residual(&self) -> Residual {
        self.bracket
            .residual
            .clone()
            .max(self.mirrored.residual.clone())
            .max(self.block_action.residual.clone())
            .max(self.sigma_closure.residual.clone())
    }
}

#[derive(Clone, Debug)]
pub struct PerfectnessReport {
    pub cases: Vec<PerfectnessCase>,
    /// Elementary transvections of the ambient space against products of transvections
    /// over simple-root planes; present for ambient dimension at least three.
    pub root_generation: Option<CheckOutcome>,
}

impl PerfectnessReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(PerfectnessCase::passed) && self.root_generation.as_ref().is_none_or(|c| c.passed)
    }
}

fn perfectness_case(
    sub: &EmbeddedSubspace<Real>,
    t: &Rational,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> Result<PerfectnessCase, EmbeddingError> {
    let half_t = t / int(2);
    let full = GeneratorPoints::real(t, policy)?;
    let half = GeneratorPoints::real(&half_t, policy)?;
    let o2 = sub.subspace().basepoint();
    let gen = |kind, t: &Rational, pts: &GeneratorPoints<Real>| {
        sub.include_word(&GeneratorWord::from_points(kind, t, pts, &o2).word)
    };
    let xp = gen(GeneratorKind::XPlus, t, &full);
    let xp_half = gen(GeneratorKind::XPlus, &half_t, &half);
    let xm = gen(GeneratorKind::XMinus, t, &full);
    let xm_half = gen(GeneratorKind::XMinus, &half_t, &half);
    let ambient = sub.ambient();
    let o = ambient.basepoint();
    let tr_c = TransvectionWord::elementary(sub.include(&full.c), o.clone());

    let eq = |a: &TransvectionWord<SpdPoint<Real>>, b: &TransvectionWord<SpdPoint<Real>>| {
        words_equal_as_actions(ambient, a.reflections(), b.reflections(), seed, count, policy)
    };
    let bracket_word = TransvectionWord::commutator(&tr_c, &xp);
    let sigma_o = ReflectionWord::single(o);
    let closure = |a: &TransvectionWord<SpdPoint<Real>>, b: &TransvectionWord<SpdPoint<Real>>| {
        let lhs = a.inverse().reflections().conjugated_by(&sigma_o);
        words_equal_as_actions(ambient, &lhs, b.reflections(), seed, count, policy)
    };
    let plus = closure(&xp, &xm);
    let minus = closure(&xm, &xp);
    let sigma_closure = if plus.residual.value() >= minus.residual.value() { plus } else { minus };
    let block = sub.root.embed(&upper_shear(&-half_t.clone(), ambient.unit()));

    Ok(PerfectnessCase {
        t: t.clone(),
        bracket: eq(&bracket_word, &xp_half.then(&xp.inverse())),
        mirrored: eq(&TransvectionWord::commutator(&xm, &tr_c.inverse()), &xm.then(&xm_half.inverse())),
        block_action: check_matrix_action(ambient, bracket_word.reflections(), &block, seed, count, policy),
        sigma_closure,
    })
}

/// For every `t`, realizes the second generating system as commutators in the
/// ambient action. In dimension `n ≥ 3`, also checks on `count` samples that an
/// elementary transvection `tr_y` equals a product of transvections over the
/// simple-root planes.
pub fn check_perfectness(
    sub: &EmbeddedSubspace<Real>,
    t_values: &[Rational],
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> Result<PerfectnessReport, EmbeddingError> {
    let cases = par::map_slice(t_values, |t| perfectness_case(sub, t, seed, count, policy))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let n = sub.ambient().n();
    let root_generation = if n >= 3 {
        Some(check_root_generation(sub, seed, count, policy)?)
    } else {
        None
    };
    Ok(PerfectnessReport { cases, root_generation })
}

fn check_root_generation(
    sub: &EmbeddedSubspace<Real>,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> Result<CheckOutcome, EmbeddingError> {
    let ambient = sub.ambient();
    let n = ambient.n();
    let bits = policy.precision_bits();
    let o = ambient.basepoint();
    let residuals = par::map_indexed(count, |i| -> Result<Residual, EmbeddingError> {
        let g = random_shear_product(n, &mut sample_rng(seed, "root-generation", i as u64));
        let y = g.mul(&g.transpose());
        let direct = TransvectionWord::elementary(SpdPoint::new_unchecked(y.to_real(bits)), o.clone());
        let mut product = TransvectionWord::identity();
        for rs in root_shear_decomposition(&y)? {
            for p in shear_spd_factors(&rs.shear)? {
                let p = SquareMatrix::embed_block(&p, n, rs.k, rs.k + 1).to_real(bits);
                product = product.then(&TransvectionWord::elementary(SpdPoint::new_unchecked(p), o.clone()));
            }
        }
        Ok(words_equal_as_actions(
            ambient,
            direct.reflections(),
            product.reflections(),
            seed ^ i as u64,
            CENTRALITY_POINTS,
            policy,
        )
        .residual)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok(outcome(residuals, policy))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_certifies_all_three_properties() {
        let p = TolerancePolicy::default();
        let demo = demo_sl3_central_extension(0, 4, &p).unwrap();
        assert!(demo.passed(&p), "{demo:?}");
        assert_eq!(demo.word_length, 36);
        let oracle = SquareMatrix::from_ints(&[&[2, 0, -1], &[0, 1, 0], &[-1, 0, 1]]).to_real(128);
        assert!(Residual::between(demo.witness_image.matrix(), &oracle, 128).within(&p));
    }

    #[test]
    fn perfectness_in_sl3() {
        let p = TolerancePolicy::default();
        let sub = EmbeddedSubspace::new(RootEmbedding::simple(3, 0), &Real::one(128), 0, &p).unwrap();
        let report = check_perfectness(&sub, &[int(1)], 1, 4, &p).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.root_generation.is_some());
    }
}
