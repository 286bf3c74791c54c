use super::lemma::{lemma_matrices, lower_shear, upper_shear};
use super::HyperbolicError;
use crate::numeric::{
    int, is_special_orthogonal, spd_sqrt, OrthogonalityCheck, QSqrt2, Rational, Real, Residual, Scalar,
    SquareMatrix, TolerancePolicy,
};
use crate::reflection::{
    check_matrix_action, words_equal_as_actions, CheckOutcome, ReflectionWord, SpaceModel, SpdModel, SpdPoint,
    TransvectionWord,
};

/// Samples used by [`build_generator`] to confirm the action of a new word.
const SELF_CHECK_SAMPLES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `x₊(t) = tr_{[a(t)]} ∘ tr_{[b(t)]} ∘ tr_{[c]}`, acting by `[[1, t], [0, 1]]`.
    XPlus,
    /// `x₋(t) = tr_{[c]} ∘ tr_{[b(t)]} ∘ tr_{[a(t)]}`, acting by `[[1, 0], [t, 1]]`.
    XMinus,
}

impl GeneratorKind {
    pub fn expected_matrix<T: Scalar>(self, t: &Rational, unit: &T) -> SquareMatrix<T> {
        match self {
            GeneratorKind::XPlus => upper_shear(t, unit),
            GeneratorKind::XMinus => lower_shear(t, unit),
        }
    }
}

/// Canonical coordinates of the cosets `[a(t)]`, `[b(t)]`, `[c]`.
#[derive(Clone, Debug)]
pub struct GeneratorPoints<T> {
    pub a: SpdPoint<T>,
    pub b: SpdPoint<T>,
    pub c: SpdPoint<T>,
}

fn require_positive(t: &Rational) -> Result<(), HyperbolicError> {
    if t == &int(0) {
        Err(HyperbolicError::ZeroParameter)
    } else if t < &int(0) {
        Err(HyperbolicError::NotPositiveDefinite {
            which: "A(t)".to_string(),
            t: t.to_string(),
        })
    } else {
        Ok(())
    }
}

impl GeneratorPoints<QSqrt2> {
    /// `τ(a(t)) = A(t)` etc., exactly.
    pub fn exact(t: &Rational) -> Result<Self, HyperbolicError> {
        require_positive(t)?;
        let m = lemma_matrices(t)?;
        Ok(GeneratorPoints {
            b: SpdPoint::new_unchecked(m.b_qsqrt2()),
            a: SpdPoint::new_unchecked(m.a),
            c: SpdPoint::new_unchecked(m.c),
        })
    }
}

impl GeneratorPoints<Real> {
    /// `τ(√X) = √X·√Xᵀ` for each of the three matrices.
    pub fn real(t: &Rational, policy: &TolerancePolicy) -> Result<Self, HyperbolicError> {
        require_positive(t)?;
        let m = lemma_matrices(t)?;
        let bits = policy.precision_bits();
        let point = |x: SquareMatrix<Real>| -> Result<SpdPoint<Real>, HyperbolicError> {
            let h = spd_sqrt(&x, policy)?;
            Ok(SpdPoint::new_unchecked(h.mul(&h.transpose())))
        };
        Ok(GeneratorPoints {
            a: point(m.a.to_real(bits))?,
            b: point(m.b.to_real(bits))?,
            c: point(m.c.to_real(bits))?,
        })
    }
}

/// A generator word together with its kind and parameter.
#[derive(Clone, Debug)]
pub struct GeneratorWord<T> {
    pub kind: GeneratorKind,
    pub t: Rational,
    pub word: TransvectionWord<SpdPoint<T>>,
}

impl<T: Scalar> GeneratorWord<T> {
    pub fn from_points(kind: GeneratorKind, t: &Rational, points: &GeneratorPoints<T>, o: &SpdPoint<T>) -> Self {
        let tr = |p: &SpdPoint<T>| TransvectionWord::elementary(p.clone(), o.clone());
        let (first, last) = match kind {
            GeneratorKind::XPlus => (&points.a, &points.c),
            GeneratorKind::XMinus => (&points.c, &points.a),
        };
        GeneratorWord {
            kind,
            t: t.clone(),
            word: tr(first).then(&tr(&points.b)).then(&tr(last)),
        }
    }
}

/// The generator word over square-root points, with its action confirmed on samples.
pub fn build_generator(
    kind: GeneratorKind,
    t: &Rational,
    policy: &TolerancePolicy,
) -> Result<GeneratorWord<Real>, HyperbolicError> {
    let points = GeneratorPoints::real(t, policy)?;
    let model = SpdModel::real(2, policy.precision_bits());
    let g = GeneratorWord::from_points(kind, t, &points, &model.basepoint());
    let expected = kind.expected_matrix(t, model.unit());
    let check = check_matrix_action(&model, g.word.reflections(), &expected, 0, SELF_CHECK_SAMPLES, policy);
    if check.passed {
        Ok(g)
    } else {
        Err(HyperbolicError::ActionMismatch {
            residual: check.residual.to_report_string(),
        })
    }
}

/// The generator word over the exact points `A(t)`, `B(t)`, `C`; its action matrix is
/// confirmed exactly.
pub fn exact_generator(kind: GeneratorKind, t: &Rational) -> Result<GeneratorWord<QSqrt2>, HyperbolicError> {
    let points = GeneratorPoints::exact(t)?;
    let model = SpdModel::new(2, QSqrt2::one());
    let g = GeneratorWord::from_points(kind, t, &points, &model.basepoint());
    let m = model.action_matrix(g.word.reflections()).expect("even length");
    if m == kind.expected_matrix(t, &QSqrt2::one()) {
        Ok(g)
    } else {
        Err(HyperbolicError::ActionMismatch {
            residual: format!("action matrix {m}"),
        })
    }
}

/// `x_±(t)` for any `t ≠ 0`; negative parameters use the inverse word of `x_±(−t)`.
pub fn signed_generator(
    kind: GeneratorKind,
    t: &Rational,
    policy: &TolerancePolicy,
) -> Result<TransvectionWord<SpdPoint<Real>>, HyperbolicError> {
    if t < &int(0) {
        Ok(build_generator(kind, &-t.clone(), policy)?.word.inverse())
    } else {
        Ok(build_generator(kind, t, policy)?.word)
    }
}

fn minus_identity_from<P: Clone>(xp: &TransvectionWord<P>, xm: &TransvectionWord<P>) -> TransvectionWord<P> {
    xp.then(&xm.inverse()).then(xp).power(2)
}

/// `(x₊(1) ∘ x₋(−1) ∘ x₊(1))²`, acting by `−I`.
///
/// `x₋(−1)` is the inverse word of `x₋(1)`, so every letter stays positive definite.
/// Length: 6 generator occurrences of 3 transvections each, 36 reflections.
pub fn minus_identity_word(policy: &TolerancePolicy) -> Result<TransvectionWord<SpdPoint<Real>>, HyperbolicError> {
    let xp = build_generator(GeneratorKind::XPlus, &int(1), policy)?;
    let xm = build_generator(GeneratorKind::XMinus, &int(1), policy)?;
    Ok(minus_identity_from(&xp.word, &xm.word))
}

pub fn exact_minus_identity_word() -> TransvectionWord<SpdPoint<QSqrt2>> {
    let xp = exact_generator(GeneratorKind::XPlus, &int(1)).expect("t = 1 is positive");
    let xm = exact_generator(GeneratorKind::XMinus, &int(1)).expect("t = 1 is positive");
    minus_identity_from(&xp.word, &xm.word)
}

/// Action checks around `[tr_{[c]}, x₊(t)] = x₊(t/2)·x₊(t)⁻¹`.
#[derive(Clone, Debug)]
pub struct CommutatorReport {
    pub t: Rational,
    /// `[tr_{[c]}, x₊(t)]` against `x₊(t/2)·x₊(t)⁻¹`
    pub bracket: CheckOutcome,
    /// `tr_{[c]} ∘ x₊(t) ∘ tr_{[c]}⁻¹` against `x₊(t/2)`
    pub reduced: CheckOutcome,
    /// `[x₋(t), tr_{[c]}⁻¹]` against `x₋(t)·x₋(t/2)⁻¹`
    pub mirrored: CheckOutcome,
    /// `x₊(t/2)·x₊(t)⁻¹` against the matrix `[[1, −t/2], [0, 1]]`
    pub half_shear: CheckOutcome,
    /// `σ_o ∘ x₊(t)⁻¹ ∘ σ_o` against `x₋(t)`
    pub sigma_conjugate: CheckOutcome,
    /// Exact action matrix of the bracket over `A(t)`, `B(t)`, `C` against `[[1, −t/2], [0, 1]]`.
    pub exact_bracket_matrix: Residual,
}

impl CommutatorReport {
    pub fn passed(&self) -> bool {
        [&self.bracket, &self.reduced, &self.mirrored, &self.half_shear, &self.sigma_conjugate]
            .iter()
            .all(|c| c.passed)
            && self.exact_bracket_matrix.is_exact_zero()
    }

    pub fn max_residual(&self) -> Residual {
        [&self.reduced, &self.mirrored, &self.half_shear, &self.sigma_conjugate]
            .iter()
            .fold(self.bracket.residual.clone(), |acc, c| acc.max(c.residual.clone()))
    }
}

/// Transvection words for the identity; the generators `x₊`, `x₋` and the
/// elementary transvection `tr_{[c]}` over a given point set.
struct Words<T> {
    tr_c: TransvectionWord<SpdPoint<T>>,
    xp: TransvectionWord<SpdPoint<T>>,
    xp_half: TransvectionWord<SpdPoint<T>>,
    xm: TransvectionWord<SpdPoint<T>>,
    xm_half: TransvectionWord<SpdPoint<T>>,
}

impl<T: Scalar> Words<T> {
    fn new(t: &Rational, full: &GeneratorPoints<T>, half: &GeneratorPoints<T>, o: &SpdPoint<T>) -> Self {
        let half_t = t / int(2);
        Words {
            tr_c: TransvectionWord::elementary(full.c.clone(), o.clone()),
            xp: GeneratorWord::from_points(GeneratorKind::XPlus, t, full, o).word,
            xp_half: GeneratorWord::from_points(GeneratorKind::XPlus, &half_t, half, o).word,
            xm: GeneratorWord::from_points(GeneratorKind::XMinus, t, full, o).word,
            xm_half: GeneratorWord::from_points(GeneratorKind::XMinus, &half_t, half, o).word,
        }
    }

    fn bracket(&self) -> TransvectionWord<SpdPoint<T>> {
        TransvectionWord::commutator(&self.tr_c, &self.xp)
    }
}

pub fn verify_commutator_identity(
    t: &Rational,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> Result<CommutatorReport, HyperbolicError> {
    let half_t = t / int(2);
    let model = SpdModel::real(2, policy.precision_bits());
    let o = model.basepoint();
    let w = Words::new(t, &GeneratorPoints::real(t, policy)?, &GeneratorPoints::real(&half_t, policy)?, &o);

    let eq = |lhs: &TransvectionWord<SpdPoint<Real>>, rhs: &TransvectionWord<SpdPoint<Real>>| {
        words_equal_as_actions(&model, lhs.reflections(), rhs.reflections(), seed, count, policy)
    };
    let half_shear_word = w.xp_half.then(&w.xp.inverse());
    let sigma_o = ReflectionWord::single(o.clone());
    let sigma_conjugate = words_equal_as_actions(
        &model,
        &w.xp.inverse().reflections().conjugated_by(&sigma_o),
        w.xm.reflections(),
        seed,
        count,
        policy,
    );
    let exact_model = SpdModel::new(2, QSqrt2::one());
    let exact = Words::new(
        t,
        &GeneratorPoints::exact(t)?,
        &GeneratorPoints::exact(&half_t)?,
        &exact_model.basepoint(),
    );
    let bracket_matrix = exact_model
        .action_matrix(exact.bracket().reflections())
        .expect("even length");
    let target = upper_shear(&-half_t.clone(), &QSqrt2::one());

    Ok(CommutatorReport {
        t: t.clone(),
        bracket: eq(&w.bracket(), &half_shear_word),
        reduced: eq(&w.xp.conjugated_by(&w.tr_c), &w.xp_half),
        mirrored: eq(
            &TransvectionWord::commutator(&w.xm, &w.tr_c.inverse()),
            &w.xm.then(&w.xm_half.inverse()),
        ),
        half_shear: check_matrix_action(
            &model,
            half_shear_word.reflections(),
            &upper_shear(&-half_t, model.unit()),
            seed,
            count,
            policy,
        ),
        sigma_conjugate,
        exact_bracket_matrix: Residual::between(&bracket_matrix, &target, policy.precision_bits()),
    })
}

/// Membership of `a(t/2)⁻¹·c²·a(t)` and `b(t/2)⁻¹·c⁻²·b(t)` in `SO(2)`.
#[derive(Clone, Debug)]
pub struct So2Report {
    pub t: Rational,
    pub first: OrthogonalityCheck,
    pub second: OrthogonalityCheck,
    /// `C·A(t)·C = A(t/2)` and `C⁻¹·B(t)·C⁻¹ = B(t/2)`, exactly.
    pub certificate_exact: bool,
    /// `a(t/2)⁻¹·A(t/2)·a(t/2)⁻¹ = I` and its `b` analogue, which finish the
    /// certificate `g·gᵀ = a(t/2)⁻¹·(C·A(t)·C)·a(t/2)⁻¹ = I`.
    pub certificate_residual: Residual,
}

impl So2Report {
    pub fn passed(&self, policy: &TolerancePolicy) -> bool {
        self.first.passed && self.second.passed && self.certificate_exact && self.certificate_residual.within(policy)
    }
}

pub fn verify_so2_residuals(t: &Rational, policy: &TolerancePolicy) -> Result<So2Report, HyperbolicError> {
    require_positive(t)?;
    let bits = policy.precision_bits();
    let half_t = t / int(2);
    let full = lemma_matrices(t)?;
    let half = lemma_matrices(&half_t)?;
    let root = |m: SquareMatrix<Real>| spd_sqrt(&m, policy);
    let a_t = root(full.a.to_real(bits))?;
    let a_half = root(half.a.to_real(bits))?;
    let b_t = root(full.b.to_real(bits))?;
    let b_half = root(half.b.to_real(bits))?;
    let c = root(full.c.to_real(bits))?;
    let c2 = c.mul(&c);
    let c2_inv = c2.inverse().expect("C is invertible");
    let a_half_inv = a_half.inverse().expect("SPD");
    let b_half_inv = b_half.inverse().expect("SPD");

    let g1 = a_half_inv.mul(&c2).mul(&a_t);
    let g2 = b_half_inv.mul(&c2_inv).mul(&b_t);

    let c_inv = full.c.inverse().expect("C is invertible");
    let certificate_exact = full.c.mul(&full.a).mul(&full.c) == half.a
        && c_inv.mul(&full.b_qsqrt2()).mul(&c_inv) == half.b_qsqrt2();
    let id = SquareMatrix::identity_like(2, &Real::one(bits));
    let cert_a = a_half_inv.mul(&half.a.to_real(bits)).mul(&a_half_inv);
    let cert_b = b_half_inv.mul(&half.b.to_real(bits)).mul(&b_half_inv);
    let certificate_residual = Residual::between(&cert_a, &id, bits).max(Residual::between(&cert_b, &id, bits));

    Ok(So2Report {
        t: t.clone(),
        first: is_special_orthogonal(&g1, policy),
        second: is_special_orthogonal(&g2, policy),
        certificate_exact,
        certificate_residual,
    })
}

/// `max(‖a(t)² − A(t)‖, ‖b(t)² − B(t)‖, ‖c² − C‖)` with `x = spd_sqrt(X)`.
pub fn verify_square_roots(t: &Rational, policy: &TolerancePolicy) -> Result<Residual, HyperbolicError> {
    require_positive(t)?;
    let bits = policy.precision_bits();
    let m = lemma_matrices(t)?;
    let mut worst = Residual::exact_zero(bits);
    for x in [m.a.to_real(bits), m.b.to_real(bits), m.c.to_real(bits)] {
        let h = spd_sqrt(&x, policy)?;
        worst = worst.max(Residual::between(&h.mul(&h), &x, bits));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;
    use crate::reflection::{act_by_matrix, word_act};

    fn policy() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn x_plus_moves_basepoint_to_twist_of_shear() {
        let p = policy();
        let model = SpdModel::real(2, 128);
        let g = build_generator(GeneratorKind::XPlus, &int(1), &p).unwrap();
        let image = word_act(&model, g.word.reflections(), &model.basepoint()).unwrap();
        let oracle = SquareMatrix::from_ints(&[&[2, 1], &[1, 1]]).to_real(128);
        assert!(Residual::between(image.matrix(), &oracle, 128).within(&p));
    }

    #[test]
    fn exact_generators_act_by_shears() {
        for t in [int(1), ratio(1, 2), ratio(5, 3)] {
            exact_generator(GeneratorKind::XPlus, &t).unwrap();
            exact_generator(GeneratorKind::XMinus, &t).unwrap();
        }
    }

    #[test]
    fn nonpositive_parameters_are_rejected() {
        let p = policy();
        assert_eq!(
            build_generator(GeneratorKind::XPlus, &int(0), &p).unwrap_err(),
            HyperbolicError::ZeroParameter
        );
        assert!(matches!(
            build_generator(GeneratorKind::XPlus, &int(-1), &p),
            Err(HyperbolicError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn commutator_at_one_sends_identity_to_oracle() {
        let p = policy();
        let report = verify_commutator_identity(&int(1), 3, 20, &p).unwrap();
        assert!(report.passed());
        // U(−1/2)·Uᵀ(−1/2) = [[5/4, −1/2], [−1/2, 1]]
        let u = upper_shear(&ratio(-1, 2), &int(1));
        let oracle = act_by_matrix(&u, &SpdPoint::identity(2, &int(1)));
        assert_eq!(oracle.matrix(), &SquareMatrix::from_ratios(&[&[(5, 4), (-1, 2)], &[(-1, 2), (1, 1)]]));
    }

    #[test]
    fn minus_identity_acts_by_minus_identity() {
        let w = exact_minus_identity_word();
        assert_eq!(w.len(), 36);
        let m = SpdModel::new(2, QSqrt2::one()).action_matrix(w.reflections()).unwrap();
        assert_eq!(m, SquareMatrix::identity_like(2, &QSqrt2::one()).neg());
        let oracle = SquareMatrix::from_ints(&[&[1, 1], &[0, 1]])
            .mul(&SquareMatrix::from_ints(&[&[1, 0], &[-1, 1]]))
            .mul(&SquareMatrix::from_ints(&[&[1, 1], &[0, 1]]));
        assert_eq!(oracle, SquareMatrix::from_ints(&[&[0, 1], &[-1, 0]]));
    }

    #[test]
    fn square_roots_reproduce_their_squares() {
        let p = policy();
        for t in [ratio(1, 8), int(1), int(8)] {
            assert!(verify_square_roots(&t, &p).unwrap().within(&p));
        }
    }

    #[test]
    fn so2_residuals_at_one() {
        let p = policy();
        let r = verify_so2_residuals(&int(1), &p).unwrap();
        assert!(r.passed(&p));
    }
}
