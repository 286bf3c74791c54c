use std::cmp::Ordering;
use std::fmt;

use dashu_int::IBig;
use dashu_ratio::RBig;

use super::real::Real;

/// Exact rational number. Always stored in lowest terms with a positive denominator.
pub type Rational = RBig;

/// Field operations shared by every entry type a [`SquareMatrix`](super::SquareMatrix) can hold.
///
/// Constructors take a template value (`*_like`) so that precision-carrying
/// scalars produce results in the same precision context as their inputs.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True when arithmetic is exact and comparisons never consult a tolerance.
    const EXACT: bool;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, r: &Rational) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn recip(&self) -> Option<Self>;

    /// Sign relative to zero.
    fn cmp_zero(&self) -> Ordering;

    /// Approximation at the given binary precision.
    fn to_real(&self, precision_bits: usize) -> Real;

    fn is_zero(&self) -> bool {
        self.cmp_zero() == Ordering::Equal
    }

    fn abs(&self) -> Self {
        if self.cmp_zero() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Compares `|self|` with `|other|`.
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.abs().sub(&other.abs()).cmp_zero()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self.mul(&r))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero_like(&self) -> Self {
        RBig::ZERO
    }

    fn one_like(&self) -> Self {
        RBig::ONE
    }

    fn from_rational_like(&self, r: &Rational) -> Self {
        r.clone()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self.clone()
    }

    fn recip(&self) -> Option<Self> {
        if *self == RBig::ZERO {
            None
        } else {
            Some(RBig::ONE / self)
        }
    }

    fn cmp_zero(&self) -> Ordering {
        self.cmp(&RBig::ZERO)
    }

    fn to_real(&self, precision_bits: usize) -> Real {
        Real::from_rational(self, precision_bits)
    }
}

/// Builds `numerator / denominator`; panics on a zero denominator.
pub fn ratio(numerator: i64, denominator: i64) -> Rational {
    assert!(denominator != 0, "zero denominator");
    RBig::from(IBig::from(numerator)) / RBig::from(IBig::from(denominator))
}

pub fn int(value: i64) -> Rational {
    RBig::from(IBig::from(value))
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"-0.125"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty rational".to_string());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: IBig = num
            .trim()
            .parse()
            .map_err(|_| format!("invalid numerator in {s:?}"))?;
        let den: IBig = den
            .trim()
            .parse()
            .map_err(|_| format!("invalid denominator in {s:?}"))?;
        if den == IBig::ZERO {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(RBig::from(num) / RBig::from(den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("invalid decimal {s:?}"));
        }
        let mantissa: IBig = digits.parse().map_err(|_| format!("invalid decimal {s:?}"))?;
        let scale = IBig::from(10).pow(frac.len());
        let value = RBig::from(mantissa) / RBig::from(scale);
        return Ok(if negative { -value } else { value });
    }
    let value: IBig = s.parse().map_err(|_| format!("invalid rational {s:?}"))?;
    Ok(RBig::from(value))
}

/// Canonical `p/q` (or `p`) rendering used in reports and case names.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse_rational("2.5").unwrap(), ratio(5, 2));
    }

    #[test]
    fn rejects_zero_denominator() {
        let err = parse_rational("1/0").unwrap_err();
        assert!(err.contains("zero denominator"));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn rationals_are_reduced() {
        let r = parse_rational("10/-4").unwrap_or_else(|_| ratio(-5, 2));
        assert_eq!(r, ratio(-5, 2));
        assert_eq!(format_rational(&ratio(6, 8)), "3/4");
        assert_eq!(format_rational(&int(3)), "3");
    }
}
