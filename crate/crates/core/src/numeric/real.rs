use std::cmp::Ordering;
use std::fmt;

use dashu_float::round::mode::HalfAway;
use dashu_float::{DBig, FBig};
use dashu_int::ops::UnsignedAbs;
use dashu_int::IBig;

use super::scalar::{Rational, Scalar};

type Float = FBig<HalfAway, 2>;

/// Binary floating-point number with an explicit working precision.
///
/// Every value created through the public constructors carries the requested
/// precision; binary operations run at the larger of the two operand precisions,
/// so a computation seeded at one precision stays at that precision.
#[derive(Clone)]
pub struct Real {
    value: Float,
}

impl Real {
    pub const DEFAULT_PRECISION: usize = 128;

    fn wrap(value: Float) -> Self {
        Real { value }
    }

    pub fn from_int(v: i64, precision_bits: usize) -> Self {
        Self::wrap(Float::from(IBig::from(v)).with_precision(precision_bits).value())
    }

    pub fn zero(precision_bits: usize) -> Self {
        Self::from_int(0, precision_bits)
    }

    pub fn one(precision_bits: usize) -> Self {
        Self::from_int(1, precision_bits)
    }

    pub fn from_rational(r: &Rational, precision_bits: usize) -> Self {
        Self::wrap(r.to_float::<HalfAway, 2>(precision_bits).value())
    }

    /// Parses a decimal literal such as `"1e-9"` or `"0.001"`.
    pub fn parse_decimal(text: &str, precision_bits: usize) -> Result<Self, String> {
        let parsed: DBig = text
            .trim()
            .parse()
            .map_err(|_| format!("invalid decimal {text:?}"))?;
        Ok(Self::wrap(
            parsed.with_base_and_precision::<2>(precision_bits).value(),
        ))
    }

    pub fn precision(&self) -> usize {
        self.value.precision()
    }

    pub fn sqrt(&self) -> Option<Self> {
        match self.value.sign() {
            dashu_int::Sign::Negative if self.value != Float::ZERO => None,
            _ => Some(Self::wrap(self.value.sqrt())),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().value()
    }

    pub fn with_precision(&self, precision_bits: usize) -> Self {
        Self::wrap(self.value.clone().with_precision(precision_bits).value())
    }

    pub fn half(&self) -> Self {
        Self::wrap(&self.value / Float::from(2u8))
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Scientific-notation rendering with the given number of significant decimal digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.value == Float::ZERO {
            return format!("0.{}e0", "0".repeat(digits - 1));
        }
        let decimal: DBig = self.value.clone().with_base_and_precision::<10>(digits).value();
        let repr = decimal.repr();
        let significand = repr.significand();
        let sign = if *significand < IBig::ZERO { "-" } else { "" };
        let mut mantissa = significand.unsigned_abs().to_string();
        let exponent = repr.exponent() + mantissa.len() as isize - 1;
        mantissa.truncate(digits);
        while mantissa.len() < digits {
            mantissa.push('0');
        }
        let (lead, rest) = mantissa.split_at(1);
        if rest.is_empty() {
            format!("{sign}{lead}e{exponent}")
        } else {
            format!("{sign}{lead}.{rest}e{exponent}")
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.value.cmp(&other.value))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_sci_string(20))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string(20))
    }
}

impl Scalar for Real {
    const EXACT: bool = false;

    fn zero_like(&self) -> Self {
        Self::zero(self.precision())
    }

    fn one_like(&self) -> Self {
        Self::one(self.precision())
    }

    fn from_rational_like(&self, r: &Rational) -> Self {
        Self::from_rational(r, self.precision())
    }

    fn add(&self, rhs: &Self) -> Self {
        Self::wrap(&self.value + &rhs.value)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Self::wrap(&self.value - &rhs.value)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Self::wrap(&self.value * &rhs.value)
    }

    fn neg(&self) -> Self {
        Self::wrap(-self.value.clone())
    }

    fn recip(&self) -> Option<Self> {
        if self.value == Float::ZERO {
            None
        } else {
            Some(Self::wrap(Self::one(self.precision()).value / &self.value))
        }
    }

    fn cmp_zero(&self) -> Ordering {
        self.value.cmp(&Float::ZERO)
    }

    fn to_real(&self, precision_bits: usize) -> Real {
        if precision_bits == self.precision() {
            self.clone()
        } else {
            self.with_precision(precision_bits)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::scalar::ratio;

    #[test]
    fn arithmetic_keeps_precision() {
        let a = Real::from_rational(&ratio(1, 3), 128);
        let b = Real::from_int(3, 128);
        let p = a.mul(&b);
        assert_eq!(p.precision(), 128);
        let err = p.sub(&Real::one(128)).abs();
        assert!(err < Real::parse_decimal("1e-37", 128).unwrap());
    }

    #[test]
    fn sqrt_of_two_to_twenty_digits() {
        let s = Real::from_int(2, 128).sqrt().unwrap();
        assert_eq!(s.to_sci_string(20), "1.4142135623730950488e0");
        assert!(Real::from_int(-1, 128).sqrt().is_none());
    }

    #[test]
    fn parses_tolerance_literals() {
        let t = Real::parse_decimal("1e-9", 128).unwrap();
        assert!((t.to_f64() - 1e-9).abs() < 1e-24);
        assert!(Real::parse_decimal("nope", 128).is_err());
    }

    #[test]
    fn renderings_keep_every_digit() {
        assert_eq!(Real::zero(128).to_sci_string(20), "0.0000000000000000000e0");
        assert_eq!(Real::from_int(-8, 128).to_sci_string(3), "-8.00e0");
        assert_eq!(Real::parse_decimal("0.1", 128).unwrap().to_sci_string(20), "1.0000000000000000000e-1");
        assert_eq!(Real::from_int(1000, 128).to_sci_string(1), "1e3");
        assert!(Real::zero(128).is_zero());
        assert!(Real::zero(128).recip().is_none());
    }
}
