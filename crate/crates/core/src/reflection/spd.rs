use std::fmt;

use super::{CheckOutcome, ReflectionError, ReflectionWord, SpaceModel};
use crate::numeric::{Rational, Real, Residual, Scalar, SquareMatrix, TolerancePolicy};
use crate::sampling::{random_shear_product, sample_rng, SampleRng};

/// Symmetric positive-definite matrix of determinant one.
///
/// This is the canonical coordinate `g·gᵀ` of a coset `gK` in `SL_n/SO(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpdPoint<T> {
    matrix: SquareMatrix<T>,
}

impl<T: Scalar> SpdPoint<T> {
    /// Certifies symmetry, unit determinant and positive definiteness, exactly for
    /// exact scalars and within `policy` otherwise.
    pub fn new(matrix: SquareMatrix<T>, policy: &TolerancePolicy) -> Result<Self, ReflectionError> {
        let bits = policy.precision_bits();
        let asym = Residual::between(&matrix, &matrix.transpose(), bits);
        if !asym.within(policy) {
            return Err(ReflectionError::InvalidPoint(format!(
                "not symmetric (asymmetry {asym})"
            )));
        }
        let det_defect = Residual::between_scalars(&matrix.det(), &matrix.unit(), bits);
        if !det_defect.within(policy) {
            return Err(ReflectionError::InvalidPoint(format!(
                "determinant differs from 1 by {det_defect}"
            )));
        }
        if let Some((minor, value)) = matrix.first_nonpositive_minor() {
            return Err(ReflectionError::InvalidPoint(format!(
                "not positive definite: leading minor {minor} is {value}"
            )));
        }
        Ok(SpdPoint { matrix })
    }

    /// Wraps a matrix already known to be SPD with determinant one.
    pub fn new_unchecked(matrix: SquareMatrix<T>) -> Self {
        SpdPoint { matrix }
    }

    pub fn identity(n: usize, unit: &T) -> Self {
        SpdPoint {
            matrix: SquareMatrix::identity_like(n, unit),
        }
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> SquareMatrix<T> {
        self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn to_real(&self, precision_bits: usize) -> SpdPoint<Real> {
        SpdPoint {
            matrix: self.matrix.to_real(precision_bits),
        }
    }
}

impl<T: Scalar> fmt::Display for SpdPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

/// `Q ↦ M·Q·Mᵀ`, the action of left multiplication by `M` on canonical coordinates.
pub fn act_by_matrix<T: Scalar>(m: &SquareMatrix<T>, q: &SpdPoint<T>) -> SpdPoint<T> {
    SpdPoint::new_unchecked(m.mul(q.matrix()).mul(&m.transpose()))
}

/// Compares the action of `w` with `Q ↦ M·Q·Mᵀ` on `count` sampled points.
pub fn check_matrix_action<T: Scalar>(
    model: &SpdModel<T>,
    w: &ReflectionWord<SpdPoint<T>>,
    m: &SquareMatrix<T>,
    seed: u64,
    count: usize,
    policy: &TolerancePolicy,
) -> CheckOutcome {
    let residuals = crate::par::map_indexed(count, |i| {
        let q = model.sample_point(&mut sample_rng(seed, "matrix-action", i as u64));
        let acted = w
            .letters()
            .iter()
            .rev()
            .fold(q.clone(), |acc, p| model.reflect_unchecked(p, &acc));
        model.distance(&acted, &act_by_matrix(m, &q), policy)
    });
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

/// `SL_n/SO(n)` in canonical coordinates: `P.Q = P·Q⁻¹·P`, basepoint `I`.
///
/// Samples are `g·gᵀ` for `g` a product of one to six rational elementary shears,
/// so the same seed yields the same points for every scalar kind.
#[derive(Clone, Debug)]
pub struct SpdModel<T> {
    n: usize,
    unit: T,
}

impl<T: Scalar> SpdModel<T> {
    pub fn new(n: usize, unit: T) -> Self {
        assert!(n >= 1, "dimension must be positive");
        SpdModel { n, unit }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> &T {
        &self.unit
    }

    /// Lifts a rational matrix into this model's scalar kind.
    pub fn lift(&self, m: &SquareMatrix<Rational>) -> SquareMatrix<T> {
        m.map(|x| self.unit.from_rational_like(x))
    }

    /// Certified point from a matrix of this model's scalar kind.
    pub fn point(&self, m: SquareMatrix<T>, policy: &TolerancePolicy) -> Result<SpdPoint<T>, ReflectionError> {
        if m.n() != self.n {
            return Err(ReflectionError::InvalidPoint(format!(
                "expected dimension {}, found {}",
                self.n,
                m.n()
            )));
        }
        SpdPoint::new(m, policy)
    }

    /// Matrix `M` with `w(Q) = M·Q·Mᵀ` for an even-length word.
    ///
    /// Each letter pair `(P, Q)` acts by left multiplication with `P·Q⁻¹`, so the
    /// word acts by the ordered product of these. `None` for odd length.
    pub fn action_matrix(&self, word: &ReflectionWord<SpdPoint<T>>) -> Option<SquareMatrix<T>> {
        if word.len() % 2 != 0 {
            return None;
        }
        let id = SquareMatrix::identity_like(self.n, &self.unit);
        Some(word.letters().chunks(2).fold(id, |acc, pair| {
            let q_inv = pair[1].matrix().inverse().expect("SPD points are invertible");
            acc.mul(&pair[0].matrix().mul(&q_inv))
        }))
    }
}

impl SpdModel<Rational> {
    pub fn exact(n: usize) -> Self {
        Self::new(n, crate::numeric::int(1))
    }
}

impl SpdModel<Real> {
    pub fn real(n: usize, precision_bits: usize) -> Self {
        Self::new(n, Real::one(precision_bits))
    }
}

impl<T: Scalar> SpaceModel for SpdModel<T> {
    type Point = SpdPoint<T>;

    fn name(&self) -> String {
        format!("sl{}", self.n)
    }

    fn basepoint(&self) -> SpdPoint<T> {
        SpdPoint::identity(self.n, &self.unit)
    }

    fn validate(&self, p: &SpdPoint<T>) -> Result<(), ReflectionError> {
        if p.n() == self.n {
            Ok(())
        } else {
            Err(ReflectionError::InvalidPoint(format!(
                "expected dimension {}, found {}",
                self.n,
                p.n()
            )))
        }
    }

    fn reflect_unchecked(&self, x: &SpdPoint<T>, y: &SpdPoint<T>) -> SpdPoint<T> {
        let y_inv = y.matrix().inverse().expect("SPD points are invertible");
        SpdPoint::new_unchecked(x.matrix().mul(&y_inv).mul(x.matrix()))
    }

    fn sample_point(&self, rng: &mut SampleRng) -> SpdPoint<T> {
        let g = random_shear_product(self.n, rng);
        SpdPoint::new_unchecked(self.lift(&g.mul(&g.transpose())))
    }

    fn distance(&self, x: &SpdPoint<T>, y: &SpdPoint<T>, policy: &TolerancePolicy) -> Residual {
        Residual::between(x.matrix(), y.matrix(), policy.precision_bits())
    }
}

/// Negative control: `x.y = X·Y·X`, which breaks involutivity.
#[derive(Clone, Debug)]
pub struct BrokenSpdModel<T> {
    inner: SpdModel<T>,
}

impl<T: Scalar> BrokenSpdModel<T> {
    pub fn new(n: usize, unit: T) -> Self {
        BrokenSpdModel {
            inner: SpdModel::new(n, unit),
        }
    }
}

impl<T: Scalar> SpaceModel for BrokenSpdModel<T> {
    type Point = SpdPoint<T>;

    fn name(&self) -> String {
        format!("broken-sl{}", self.inner.n)
    }

    fn basepoint(&self) -> SpdPoint<T> {
        self.inner.basepoint()
    }

    fn validate(&self, p: &SpdPoint<T>) -> Result<(), ReflectionError> {
        self.inner.validate(p)
    }

    fn reflect_unchecked(&self, x: &SpdPoint<T>, y: &SpdPoint<T>) -> SpdPoint<T> {
        SpdPoint::new_unchecked(x.matrix().mul(y.matrix()).mul(x.matrix()))
    }

    fn sample_point(&self, rng: &mut SampleRng) -> SpdPoint<T> {
        self.inner.sample_point(rng)
    }

    fn distance(&self, x: &SpdPoint<T>, y: &SpdPoint<T>, policy: &TolerancePolicy) -> Residual {
        self.inner.distance(x, y, policy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    fn point(rows: &[&[(i64, i64)]]) -> SpdPoint<Rational> {
        SpdPoint::new(SquareMatrix::from_ratios(rows), &TolerancePolicy::default()).unwrap()
    }

    #[test]
    fn basepoint_reflection_is_inversion() {
        let model = SpdModel::exact(2);
        let q = point(&[&[(2, 1), (1, 1)], &[(1, 1), (1, 1)]]);
        let r = model.reflect(&model.basepoint(), &q).unwrap();
        assert_eq!(r.matrix(), &q.matrix().inverse().unwrap());
    }

    #[test]
    fn reflect_diagonal_through_identity() {
        let model = SpdModel::exact(2);
        let x = point(&[&[(2, 1), (0, 1)], &[(0, 1), (1, 2)]]);
        let r = model.reflect(&x, &model.basepoint()).unwrap();
        assert_eq!(r, point(&[&[(4, 1), (0, 1)], &[(0, 1), (1, 4)]]));
    }

    #[test]
    fn construction_certifies_points() {
        let p = TolerancePolicy::default();
        let not_sym = SquareMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert!(SpdPoint::new(not_sym, &p).is_err());
        let det_two = SquareMatrix::from_ints(&[&[2, 0], &[0, 1]]);
        assert!(SpdPoint::new(det_two, &p).is_err());
        let negative = SquareMatrix::from_ints(&[&[-1, 0], &[0, -1]]);
        assert!(SpdPoint::new(negative, &p).is_err());
        let model = SpdModel::exact(3);
        assert!(model.reflect(&model.basepoint(), &SpdPoint::identity(2, &int(1))).is_err());
    }

    #[test]
    fn samples_are_valid_points() {
        let p = TolerancePolicy::default();
        for q in SpdModel::exact(3).sample(11, 40) {
            SpdPoint::new(q.into_matrix(), &p).unwrap();
        }
    }

    #[test]
    fn action_matrix_of_pair() {
        let model = SpdModel::exact(2);
        let a = point(&[&[(2, 1), (1, 1)], &[(1, 1), (1, 1)]]);
        let w = ReflectionWord::new(vec![a.clone(), model.basepoint()]);
        assert_eq!(model.action_matrix(&w).unwrap(), a.matrix().clone());
        let odd = ReflectionWord::new(vec![a]);
        assert!(model.action_matrix(&odd).is_none());
    }
}
