use std::fmt;

use super::lemma::{lemma_matrices, lower_shear, upper_shear};
use super::HyperbolicError;
use crate::numeric::{int, spd_sqrt, QSqrt2, Rational, Real, Residual, Scalar, SquareMatrix, TolerancePolicy};
use crate::reflection::SpdPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShearSide {
    Upper,
    Lower,
}

/// `[[1, t], [0, 1]]` or `[[1, 0], [t, 1]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Shear {
    pub side: ShearSide,
    pub t: Rational,
}

impl Shear {
    pub fn matrix<T: Scalar>(&self, unit: &T) -> SquareMatrix<T> {
        match self.side {
            ShearSide::Upper => upper_shear(&self.t, unit),
            ShearSide::Lower => lower_shear(&self.t, unit),
        }
    }
}

impl fmt::Display for Shear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            ShearSide::Upper => "upper",
            ShearSide::Lower => "lower",
        };
        write!(f, "{side}({})", self.t)
    }
}

/// `(A(t), B(t), C)` for an upper shear, `(C, B(t), A(t))` for a lower one; the
/// exact product is the shear.
pub fn factor_shear_spd(t: &Rational, side: ShearSide) -> Result<[SpdPoint<QSqrt2>; 3], HyperbolicError> {
    let m = lemma_matrices(t)?;
    if !m.a_positive_definite() {
        return Err(HyperbolicError::NotPositiveDefinite {
            which: "A(t)".to_string(),
            t: t.to_string(),
        });
    }
    let a = SpdPoint::new_unchecked(m.a.clone());
    let b = SpdPoint::new_unchecked(m.b_qsqrt2());
    let c = SpdPoint::new_unchecked(m.c.clone());
    Ok(match side {
        ShearSide::Upper => [a, b, c],
        ShearSide::Lower => [c, b, a],
    })
}

/// Three SPD factors for any nonzero shear.
///
/// With `D = diag(1, −1)`, `D·U(s)·D = U(−s)` and `D·X·D` is positive definite
/// whenever `X` is, so a negative shear is the `D`-conjugate of the positive one.
pub fn shear_spd_factors(shear: &Shear) -> Result<Vec<SquareMatrix<QSqrt2>>, HyperbolicError> {
    if shear.t >= int(0) {
        return Ok(factor_shear_spd(&shear.t, shear.side)?
            .into_iter()
            .map(SpdPoint::into_matrix)
            .collect());
    }
    let d = SquareMatrix::diagonal(vec![QSqrt2::one(), QSqrt2::one().neg()]);
    Ok(factor_shear_spd(&-shear.t.clone(), shear.side)?
        .into_iter()
        .map(|p| d.mul(p.matrix()).mul(&d))
        .collect())
}

fn check_sl2(g: &SquareMatrix<Rational>) -> Result<(), HyperbolicError> {
    if g.n() != 2 {
        return Err(HyperbolicError::NotTwoByTwo { n: g.n() });
    }
    let det = g.det();
    if det != int(1) {
        return Err(HyperbolicError::NotUnimodular { det: det.to_string() });
    }
    Ok(())
}

/// At most four shears with exact product `g`.
///
/// For `c ≠ 0`, `g = U((a−1)/c)·L(c)·U((d−1)/c)`; for `c = 0`, `g = L(−1)·(L(1)·g)`.
/// Zero-parameter shears are dropped.
pub fn shear_decomposition(g: &SquareMatrix<Rational>) -> Result<Vec<Shear>, HyperbolicError> {
    check_sl2(g)?;
    let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    let one = int(1);
    let zero = int(0);
    let shears = if c != &zero {
        vec![
            Shear { side: ShearSide::Upper, t: (a - &one) / c },
            Shear { side: ShearSide::Lower, t: c.clone() },
            Shear { side: ShearSide::Upper, t: (d - &one) / c },
        ]
    } else if a == &one {
        // d = 1 as well
        vec![Shear { side: ShearSide::Upper, t: b.clone() }]
    } else {
        let lifted = lower_shear(&one, &one).mul(g);
        let mut rest = shear_decomposition(&lifted)?;
        rest.insert(0, Shear { side: ShearSide::Lower, t: -one });
        rest
    };
    Ok(shears.into_iter().filter(|s| s.t != zero).collect())
}

/// `g = τ(h₁)⋯τ(h_m)` with every `h_i` symmetric positive definite.
#[derive(Clone, Debug)]
pub struct Sl2Factorization {
    pub shears: Vec<Shear>,
    /// `P_i = τ(h_i)`, exact.
    pub spd_factors: Vec<SquareMatrix<QSqrt2>>,
    /// `h_i = √P_i`.
    pub roots: Vec<SquareMatrix<Real>>,
    /// `τ(h₁)⋯τ(h_m) = sign·g`. Always `+1` here since negative shears have SPD factors.
    pub sign: i8,
    /// `‖P₁⋯P_m − g‖`, exact.
    pub exact_residual: Residual,
    /// `‖h₁²⋯h_m² − sign·g‖` in working precision.
    pub residual: Residual,
    pub trace: Vec<String>,
}

impl Sl2Factorization {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

pub fn factor_sl2_spd_squares(
    g: &SquareMatrix<Rational>,
    policy: &TolerancePolicy,
) -> Result<Sl2Factorization, HyperbolicError> {
    let bits = policy.precision_bits();
    let shears = shear_decomposition(g)?;
    let mut trace: Vec<String> = shears.iter().map(Shear::to_string).collect();

    let mut spd_factors = Vec::with_capacity(3 * shears.len());
    for s in &shears {
        spd_factors.extend(shear_spd_factors(s)?);
    }
    let id_q = SquareMatrix::identity_like(2, &QSqrt2::one());
    let product = spd_factors.iter().fold(id_q, |acc, p| acc.mul(p));
    let g_q = g.map(|x| QSqrt2::from_rational(x.clone()));
    let exact_residual = Residual::between(&product, &g_q, bits);
    if !exact_residual.is_exact_zero() {
        trace.push(format!("exact product {product} differs from {g}"));
        return Err(HyperbolicError::FactorizationFailed { trace });
    }

    let mut roots = Vec::with_capacity(spd_factors.len());
    for p in &spd_factors {
        match spd_sqrt(&p.to_real(bits), policy) {
            Ok(h) => roots.push(h),
            Err(e) => {
                trace.push(format!("square root of {p}: {e}"));
                return Err(HyperbolicError::FactorizationFailed { trace });
            }
        }
    }
    let id = SquareMatrix::identity_like(2, &Real::one(bits));
    let squares = roots.iter().fold(id, |acc, h| acc.mul(&h.mul(&h.transpose())));
    let residual = Residual::between(&squares, &g.to_real(bits), bits);
    if !residual.within(policy) {
        trace.push(format!("product of squares misses g by {residual}"));
        return Err(HyperbolicError::FactorizationFailed { trace });
    }
    Ok(Sl2Factorization {
        shears,
        spd_factors,
        roots,
        sign: 1,
        exact_residual,
        residual,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    fn policy() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn product(points: &[SpdPoint<QSqrt2>]) -> SquareMatrix<QSqrt2> {
        points
            .iter()
            .fold(SquareMatrix::identity_like(2, &QSqrt2::one()), |acc, p| acc.mul(p.matrix()))
    }

    #[test]
    fn shear_factors_multiply_exactly() {
        for (t, side) in [(int(1), ShearSide::Upper), (int(1), ShearSide::Lower), (ratio(3, 2), ShearSide::Upper)] {
            let f = factor_shear_spd(&t, side).unwrap();
            let want = Shear { side, t }.matrix(&QSqrt2::one());
            assert_eq!(product(&f), want);
        }
        assert!(factor_shear_spd(&int(-1), ShearSide::Upper).is_err());
    }

    #[test]
    fn identity_has_empty_factorization() {
        let f = factor_sl2_spd_squares(&SquareMatrix::from_ints(&[&[1, 0], &[0, 1]]), &policy()).unwrap();
        assert!(f.is_empty());
        assert_eq!(f.sign, 1);
    }

    #[test]
    fn unipotent_factors_into_three_roots() {
        let g = SquareMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        let f = factor_sl2_spd_squares(&g, &policy()).unwrap();
        assert_eq!(f.len(), 3);
        let m = lemma_matrices(&int(1)).unwrap();
        assert_eq!(f.spd_factors, vec![m.a.clone(), m.b_qsqrt2(), m.c.clone()]);
    }

    #[test]
    fn rotation_by_quarter_turn() {
        let g = SquareMatrix::from_ints(&[&[0, 1], &[-1, 0]]);
        let f = factor_sl2_spd_squares(&g, &policy()).unwrap();
        assert!(f.len() <= 12);
        assert!(f.residual.within(&policy()));
    }

    #[test]
    fn upper_triangular_diagonal_case() {
        let g = SquareMatrix::from_ratios(&[&[(2, 1), (3, 1)], &[(0, 1), (1, 2)]]);
        let f = factor_sl2_spd_squares(&g, &policy()).unwrap();
        assert_eq!(f.shears[0].side, ShearSide::Lower);
        assert!(f.len() <= 12);
    }

    #[test]
    fn non_unimodular_is_rejected() {
        let g = SquareMatrix::from_ints(&[&[2, 0], &[0, 1]]);
        assert!(matches!(
            factor_sl2_spd_squares(&g, &policy()),
            Err(HyperbolicError::NotUnimodular { .. })
        ));
    }
}
