use super::HyperbolicError;
use crate::numeric::{int, QSqrt2, Rational, Residual, Scalar, SquareMatrix};

/// `A(t)`, `B(t)` and `C` with exact entries.
///
/// `A(t) = (1/√2)·[[3t, −1], [−1, 1/t]]`, `B(t) = [[1/t, 1], [1, 2t]]`,
/// `C = diag(1/√2, √2)`.
#[derive(Clone, Debug)]
pub struct LemmaMatrices {
    pub t: Rational,
    pub a: SquareMatrix<QSqrt2>,
    pub b: SquareMatrix<Rational>,
    pub c: SquareMatrix<QSqrt2>,
}

fn half_root(r: Rational) -> QSqrt2 {
    // r/√2 = (r/2)·√2
    QSqrt2::new(int(0), r / int(2))
}

pub fn upper_shear<T: Scalar>(t: &Rational, unit: &T) -> SquareMatrix<T> {
    let mut m = SquareMatrix::identity_like(2, unit);
    m.set(0, 1, unit.from_rational_like(t));
    m
}

pub fn lower_shear<T: Scalar>(t: &Rational, unit: &T) -> SquareMatrix<T> {
    let mut m = SquareMatrix::identity_like(2, unit);
    m.set(1, 0, unit.from_rational_like(t));
    m
}

pub fn lemma_matrices(t: &Rational) -> Result<LemmaMatrices, HyperbolicError> {
    if t == &int(0) {
        return Err(HyperbolicError::ZeroParameter);
    }
    let inv = int(1) / t;
    let a = SquareMatrix::from_rows(vec![
        vec![half_root(int(3) * t), half_root(int(-1))],
        vec![half_root(int(-1)), half_root(inv.clone())],
    ])
    .expect("2 x 2");
    let b = SquareMatrix::from_rows(vec![vec![inv, int(1)], vec![int(1), int(2) * t]]).expect("2 x 2");
    let c = SquareMatrix::diagonal(vec![half_root(int(1)), QSqrt2::sqrt2()]);
    Ok(LemmaMatrices { t: t.clone(), a, b, c })
}

impl LemmaMatrices {
    pub fn b_qsqrt2(&self) -> SquareMatrix<QSqrt2> {
        self.b.map(|x| QSqrt2::from_rational(x.clone()))
    }

    /// Exact leading-minor test.
    pub fn a_positive_definite(&self) -> bool {
        self.a.first_nonpositive_minor().is_none()
    }

    pub fn b_positive_definite(&self) -> bool {
        self.b.first_nonpositive_minor().is_none()
    }

    /// Symmetric with determinant exactly one, for all three matrices.
    pub fn symmetric_unimodular(&self) -> bool {
        let one = QSqrt2::one();
        self.a == self.a.transpose()
            && self.b == self.b.transpose()
            && self.c == self.c.transpose()
            && self.a.det() == one
            && self.b.det() == int(1)
            && self.c.det() == one
    }
}

/// Exact residuals of the four product identities.
#[derive(Clone, Debug)]
pub struct MatrixLemmaReport {
    pub t: Rational,
    /// `A(t)·B(t)·C = [[1, t], [0, 1]]`
    pub upper: Residual,
    /// `C·B(t)·A(t) = [[1, 0], [t, 1]]`
    pub lower: Residual,
    /// `C·A(t)·C = A(t/2)`
    pub conjugate_a: Residual,
    /// `C⁻¹·B(t)·C⁻¹ = B(t/2)`
    pub conjugate_b: Residual,
    pub symmetric_unimodular: bool,
    pub a_positive_definite: bool,
    pub b_positive_definite: bool,
}

impl MatrixLemmaReport {
    /// The identities hold exactly; positivity is reported separately.
    pub fn identities_hold(&self) -> bool {
        self.symmetric_unimodular
            && [&self.upper, &self.lower, &self.conjugate_a, &self.conjugate_b]
                .iter()
                .all(|r| r.is_exact_zero())
    }

    pub fn max_residual(&self) -> Residual {
        self.upper
            .clone()
            .max(self.lower.clone())
            .max(self.conjugate_a.clone())
            .max(self.conjugate_b.clone())
    }
}

pub fn verify_matrix_lemma(t: &Rational, precision_bits: usize) -> Result<MatrixLemmaReport, HyperbolicError> {
    let m = lemma_matrices(t)?;
    let half = lemma_matrices(&(t / int(2)))?;
    let one = QSqrt2::one();
    let b = m.b_qsqrt2();
    let c_inv = m.c.inverse().expect("C is invertible");
    let r = |x: &SquareMatrix<QSqrt2>, y: &SquareMatrix<QSqrt2>| Residual::between(x, y, precision_bits);
    Ok(MatrixLemmaReport {
        t: t.clone(),
        upper: r(&m.a.mul(&b).mul(&m.c), &upper_shear(t, &one)),
        lower: r(&m.c.mul(&b).mul(&m.a), &lower_shear(t, &one)),
        conjugate_a: r(&m.c.mul(&m.a).mul(&m.c), &half.a),
        conjugate_b: r(&c_inv.mul(&b).mul(&c_inv), &half.b_qsqrt2()),
        symmetric_unimodular: m.symmetric_unimodular(),
        a_positive_definite: m.a_positive_definite(),
        b_positive_definite: m.b_positive_definite(),
    })
}

/// Distinct parameters `k/8` and `8/k` for `1 ≤ k ≤ 64`, in increasing order.
pub fn lemma_sweep() -> Vec<Rational> {
    let mut values: Vec<Rational> = (1..=64)
        .flat_map(|k| [crate::numeric::ratio(k, 8), crate::numeric::ratio(8, k)])
        .collect();
    values.sort();
    values.dedup();
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    #[test]
    fn definitions_at_one() {
        let m = lemma_matrices(&int(1)).unwrap();
        assert_eq!(m.b, SquareMatrix::from_ints(&[&[1, 1], &[1, 2]]));
        assert_eq!(m.b.det(), int(1));
        // (1/√2)·3 = (3/2)·√2
        assert_eq!(m.a.get(0, 0), &QSqrt2::new(int(0), ratio(3, 2)));
        assert!(m.a_positive_definite() && m.b_positive_definite());
    }

    #[test]
    fn negative_parameter_keeps_identities_but_not_positivity() {
        let m = lemma_matrices(&int(-1)).unwrap();
        assert_eq!(m.a.det(), QSqrt2::one());
        assert!(!m.a_positive_definite());
        assert!(!m.b_positive_definite());
        assert!(verify_matrix_lemma(&int(-1), 128).unwrap().identities_hold());
    }

    #[test]
    fn sweep_has_at_least_one_hundred_values() {
        let v = lemma_sweep();
        assert!(v.len() >= 100);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn zero_parameter_is_rejected() {
        assert_eq!(lemma_matrices(&int(0)).unwrap_err(), HyperbolicError::ZeroParameter);
    }

    #[test]
    fn identities_at_sample_parameters() {
        for t in [int(1), ratio(1, 3), ratio(7, 2)] {
            let report = verify_matrix_lemma(&t, 128).unwrap();
            assert!(report.identities_hold(), "t = {t}");
        }
    }

    #[test]
    fn b_conjugation_at_one() {
        let m = lemma_matrices(&int(1)).unwrap();
        let c_inv = m.c.inverse().unwrap();
        let got = c_inv.mul(&m.b_qsqrt2()).mul(&c_inv);
        let want = SquareMatrix::from_ints(&[&[2, 1], &[1, 1]]).map(|x| QSqrt2::from_rational(x.clone()));
        assert_eq!(got, want);
    }
}
