use std::cmp::Ordering;
use std::fmt;

use dashu_ratio::RBig;

use super::real::Real;
use super::scalar::{Rational, Scalar};

/// Exact element `a + b·√2` of the quadratic field ℚ(√2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    a: Rational,
    b: Rational,
}

impl QSqrt2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt2 { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        QSqrt2 { a, b: RBig::ZERO }
    }

    pub fn sqrt2() -> Self {
        QSqrt2 {
            a: RBig::ZERO,
            b: RBig::ONE,
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(RBig::ZERO)
    }

    pub fn one() -> Self {
        Self::from_rational(RBig::ONE)
    }

    /// Rational part.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of √2.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conjugate(&self) -> Self {
        QSqrt2 {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − 2b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - RBig::from(2u8) * &self.b * &self.b
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSqrt2 {
            a: &self.a * r,
            b: &self.b * r,
        }
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == RBig::ZERO {
            write!(f, "{}", self.a)
        } else if self.a == RBig::ZERO {
            write!(f, "{}*sqrt2", self.b)
        } else {
            write!(f, "{} + {}*sqrt2", self.a, self.b)
        }
    }
}

impl Scalar for QSqrt2 {
    const EXACT: bool = true;

    fn zero_like(&self) -> Self {
        Self::zero()
    }

    fn one_like(&self) -> Self {
        Self::one()
    }

    fn from_rational_like(&self, r: &Rational) -> Self {
        Self::from_rational(r.clone())
    }

    fn add(&self, rhs: &Self) -> Self {
        QSqrt2 {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        QSqrt2 {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let two = RBig::from(2u8);
        QSqrt2 {
            a: &self.a * &rhs.a + two * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }

    fn neg(&self) -> Self {
        QSqrt2 {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    fn recip(&self) -> Option<Self> {
        let n = self.norm();
        if n == RBig::ZERO {
            // a² = 2b² has only the trivial rational solution
            return None;
        }
        let inv_n = RBig::ONE / n;
        Some(self.conjugate().scale(&inv_n))
    }

    fn cmp_zero(&self) -> Ordering {
        let sa = self.a.cmp(&RBig::ZERO);
        let sb = self.b.cmp(&RBig::ZERO);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: |a| vs |b|√2 decided by a² vs 2b²
            (Ordering::Greater, _) => self.norm().cmp(&RBig::ZERO),
            _ => self.norm().cmp(&RBig::ZERO).reverse(),
        }
    }

    fn to_real(&self, precision_bits: usize) -> Real {
        qsqrt2_to_real(self, precision_bits)
    }
}

/// Rounds `a + b·√2` to a [`Real`] of the requested precision.
///
/// Works with guard bits and evaluates through the conjugate when `a` and `b·√2`
/// have opposite signs, so cancellation never costs precision: the result is
/// within a couple of ulps of the exact value, hence within `2^(2 − bits)`
/// whenever `|x| ≤ 1`.
pub fn qsqrt2_to_real(x: &QSqrt2, precision_bits: usize) -> Real {
    let work = precision_bits + 64;
    let sqrt2 = Real::from_int(2, work).sqrt().expect("2 is positive");
    let a = Real::from_rational(&x.a, work);
    let b_sqrt2 = Real::from_rational(&x.b, work).mul(&sqrt2);
    let opposite = (x.a > RBig::ZERO && x.b < RBig::ZERO) || (x.a < RBig::ZERO && x.b > RBig::ZERO);
    let value = if !opposite {
        a.add(&b_sqrt2)
    } else {
        // a + b√2 = (a² − 2b²) / (a − b√2), and a − b√2 adds like-signed terms
        let numerator = Real::from_rational(&x.norm(), work);
        let denominator = a.sub(&b_sqrt2);
        numerator.div(&denominator).expect("nonzero: terms share a sign")
    };
    value.with_precision(precision_bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::scalar::{int, ratio};
    use dashu_int::IBig;

    fn q(a: Rational, b: Rational) -> QSqrt2 {
        QSqrt2::new(a, b)
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = QSqrt2::sqrt2();
        assert_eq!(s.mul(&s), QSqrt2::from_rational(int(2)));
    }

    #[test]
    fn sign_is_exact_under_cancellation() {
        // 3 − 2√2 ≈ 0.1716 > 0, −3 + 2√2 < 0, 1 − √2 < 0
        assert_eq!(q(int(3), int(-2)).cmp_zero(), Ordering::Greater);
        assert_eq!(q(int(-3), int(2)).cmp_zero(), Ordering::Less);
        assert_eq!(q(int(1), int(-1)).cmp_zero(), Ordering::Less);
        assert_eq!(QSqrt2::zero().cmp_zero(), Ordering::Equal);
        assert!(QSqrt2::zero().recip().is_none());
    }

    #[test]
    fn converts_unit_and_sqrt2() {
        assert_eq!(qsqrt2_to_real(&QSqrt2::one(), 128), Real::one(128));
        assert_eq!(
            qsqrt2_to_real(&QSqrt2::sqrt2(), 128).to_sci_string(20),
            "1.4142135623730950488e0"
        );
    }

    /// Rational bracket lo ≤ √2 ≤ hi of width 10^-digits, from integer square roots.
    fn sqrt2_bracket(digits: usize) -> (Rational, Rational) {
        let scale = IBig::from(10).pow(digits);
        let target = IBig::from(2) * &scale * &scale;
        // bisection for floor(sqrt(target))
        let (mut lo, mut hi) = (IBig::ZERO, IBig::from(2) * &scale);
        while &hi - &lo > IBig::ONE {
            let mid: IBig = (&lo + &hi) / IBig::from(2);
            if &mid * &mid <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let den = RBig::from(scale);
        (RBig::from(lo) / &den, RBig::from(hi) / &den)
    }

    #[test]
    fn conversion_matches_interval_oracle() {
        let (lo, hi) = sqrt2_bracket(45);
        let cases = [
            q(int(3), int(-2)),
            q(ratio(1, 3), ratio(-5, 7)),
            q(int(-17), int(12)),
            q(ratio(577, 408), int(-1)),
        ];
        for x in cases {
            let b = x.b().clone();
            let (v1, v2) = (x.a() + &b * &lo, x.a() + &b * &hi);
            let (vlo, vhi) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
            let got = qsqrt2_to_real(&x, 128);
            let slack = Real::parse_decimal("1e-38", 128).unwrap();
            assert!(got.add(&slack) >= Real::from_rational(&vlo, 256).with_precision(128), "{x}");
            assert!(got.sub(&slack) <= Real::from_rational(&vhi, 256).with_precision(128), "{x}");
        }
        // 3 − 2√2 = 0.17157287525381...
        assert_eq!(
            &qsqrt2_to_real(&q(int(3), int(-2)), 128).to_sci_string(12),
            "1.71572875254e-1"
        );
    }
}
