//! Scalar towers, dense matrices and the SPD-specific factorizations.
//!
//! Three scalar kinds share the [`Scalar`] trait: exact [`Rational`], exact
//! [`QSqrt2`] and fixed-precision [`Real`]. Exact kinds never consult a
//! tolerance; `Real` comparisons always go through a [`TolerancePolicy`].

mod matrix;
mod qsqrt2;
mod real;
mod scalar;
mod spd;

use thiserror::Error;

pub use matrix::SquareMatrix;
pub use qsqrt2::{qsqrt2_to_real, QSqrt2};
pub use real::Real;
pub use scalar::{format_rational, int, parse_rational, ratio, Rational, Scalar};
pub use spd::{is_special_orthogonal, polar_decompose, spd_sqrt, OrthogonalityCheck, Polar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("matrix is not symmetric (asymmetry {residual})")]
    NotSymmetric { residual: String },
    #[error("matrix is not positive definite: leading minor of size {minor} is {value}")]
    NotPositiveDefinite { minor: usize, value: String },
    #[error("square-root iteration did not converge after {iterations} steps (last step {last_step})")]
    NoConvergence { iterations: usize, last_step: String },
    #[error("matrix is singular")]
    SingularInput,
    #[error("determinant must be positive, found {det}")]
    NegativeDeterminant { det: String },
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Absolute tolerance and working precision for approximate comparisons.
///
/// The norm is always Frobenius.
#[derive(Clone, Debug)]
pub struct TolerancePolicy {
    abs_tol: Real,
    precision_bits: usize,
}

impl TolerancePolicy {
    pub const DEFAULT_ABS_TOL: &'static str = "1e-9";

    pub fn new(abs_tol: &str, precision_bits: usize) -> Result<Self, String> {
        if precision_bits < 16 {
            return Err(format!("precision_bits must be at least 16, got {precision_bits}"));
        }
        let abs_tol = Real::parse_decimal(abs_tol, precision_bits)?;
        if abs_tol.cmp_zero() != std::cmp::Ordering::Greater {
            return Err("abs_tol must be positive".to_string());
        }
        Ok(TolerancePolicy {
            abs_tol,
            precision_bits,
        })
    }

    pub fn abs_tol(&self) -> &Real {
        &self.abs_tol
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    pub fn real(&self, v: i64) -> Real {
        Real::from_int(v, self.precision_bits)
    }

    pub fn real_from(&self, r: &Rational) -> Real {
        Real::from_rational(r, self.precision_bits)
    }
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy::new(Self::DEFAULT_ABS_TOL, Real::DEFAULT_PRECISION)
            .expect("default policy is valid")
    }
}

/// Size of a discrepancy, tagged with how it was computed.
///
/// An exact residual passes only when it is zero; an approximate one passes when
/// it is at most the policy's `abs_tol`.
#[derive(Clone, Debug, PartialEq)]
pub enum Residual {
    Exact(Real),
    Approx(Real),
}

impl Residual {
    pub fn exact_zero(precision_bits: usize) -> Self {
        Residual::Exact(Real::zero(precision_bits))
    }

    /// Frobenius distance between two matrices, exact when the scalar kind is exact.
    pub fn between<T: Scalar>(a: &SquareMatrix<T>, b: &SquareMatrix<T>, precision_bits: usize) -> Self {
        let diff = a.sub(b);
        if T::EXACT {
            if diff.is_zero() {
                Residual::exact_zero(precision_bits)
            } else {
                Residual::Exact(diff.frobenius_norm(precision_bits))
            }
        } else {
            Residual::Approx(diff.frobenius_norm(precision_bits))
        }
    }

    /// Absolute difference of two scalars.
    pub fn between_scalars<T: Scalar>(a: &T, b: &T, precision_bits: usize) -> Self {
        let d = a.sub(b);
        let magnitude = d.abs().to_real(precision_bits);
        if T::EXACT {
            Residual::Exact(magnitude)
        } else {
            Residual::Approx(magnitude)
        }
    }

    pub fn value(&self) -> &Real {
        match self {
            Residual::Exact(v) | Residual::Approx(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Residual::Exact(_))
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Residual::Exact(v) if v.is_zero())
    }

    pub fn within(&self, policy: &TolerancePolicy) -> bool {
        match self {
            Residual::Exact(v) => v.is_zero(),
            Residual::Approx(v) => v <= policy.abs_tol(),
        }
    }

    /// Larger of the two; exact only when both are.
    pub fn max(self, other: Residual) -> Residual {
        let exact = self.is_exact() && other.is_exact();
        let (a, b) = (self.value().clone(), other.value().clone());
        let v = a.max(b);
        if exact {
            Residual::Exact(v)
        } else {
            Residual::Approx(v)
        }
    }

    /// `"exact-zero"` for exact passes, otherwise 20 significant digits.
    pub fn to_report_string(&self) -> String {
        if self.is_exact_zero() {
            "exact-zero".to_string()
        } else {
            self.value().to_sci_string(20)
        }
    }
}

impl std::fmt::Display for Residual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_report_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_residuals_ignore_tolerance() {
        let policy = TolerancePolicy::default();
        let a = SquareMatrix::from_ints(&[&[1, 0], &[0, 1]]);
        let b = SquareMatrix::from_ratios(&[&[(1, 1), (1, 10_000_000_000)], &[(0, 1), (1, 1)]]);
        let r = Residual::between(&a, &b, 128);
        assert!(r.is_exact());
        assert!(!r.within(&policy));
        assert!(Residual::between(&a, &a, 128).within(&policy));
        assert_eq!(Residual::between(&a, &a, 128).to_report_string(), "exact-zero");
    }

    #[test]
    fn approx_residuals_use_abs_tol() {
        let policy = TolerancePolicy::default();
        let small = Residual::Approx(Real::parse_decimal("1e-12", 128).unwrap());
        let big = Residual::Approx(Real::parse_decimal("1e-6", 128).unwrap());
        assert!(small.within(&policy));
        assert!(!big.within(&policy));
        let m = small.max(Residual::exact_zero(128));
        assert!(!m.is_exact());
    }

    #[test]
    fn policy_rejects_nonpositive_tolerance() {
        assert!(TolerancePolicy::new("0", 128).is_err());
        assert!(TolerancePolicy::new("-1e-9", 128).is_err());
        assert!(TolerancePolicy::new("1e-9", 8).is_err());
    }
}
