use std::cmp::Ordering;

use super::matrix::SquareMatrix;
use super::real::Real;
use super::scalar::Scalar;
use super::{NumericError, Residual, TolerancePolicy};

const MAX_ITERATIONS: usize = 200;

fn check_symmetric(m: &SquareMatrix<Real>, policy: &TolerancePolicy) -> Result<(), NumericError> {
    let r = Residual::between(m, &m.transpose(), policy.precision_bits());
    if r.within(policy) {
        Ok(())
    } else {
        Err(NumericError::NotSymmetric {
            residual: r.to_report_string(),
        })
    }
}

fn check_positive_definite(m: &SquareMatrix<Real>) -> Result<(), NumericError> {
    match m.first_nonpositive_minor() {
        Some((minor, value)) => Err(NumericError::NotPositiveDefinite {
            minor,
            value: value.to_sci_string(20),
        }),
        None => Ok(()),
    }
}

/// Symmetric positive-definite square root.
///
/// `1 × 1` and `2 × 2` inputs use closed forms; for `2 × 2` the root is
/// `(M + √det·I) / √(tr M + 2√det)`, which is `(M + I)/√(tr M + 2)` on
/// determinant one. Larger inputs run the Denman–Beavers iteration until
/// successive iterates differ by at most `abs_tol / 10`.
pub fn spd_sqrt(
    m: &SquareMatrix<Real>,
    policy: &TolerancePolicy,
) -> Result<SquareMatrix<Real>, NumericError> {
    check_symmetric(m, policy)?;
    check_positive_definite(m)?;
    let root = match m.n() {
        1 => SquareMatrix::diagonal(vec![m.get(0, 0).sqrt().expect("positive")]),
        2 => {
            let s = m.det().sqrt().expect("positive determinant");
            let denom = m.trace().add(&s).add(&s).sqrt().expect("positive trace");
            let shifted = m.add(&m.identity().scale(&s));
            shifted.scale(&denom.recip().expect("nonzero"))
        }
        _ => denman_beavers(m, policy)?,
    };
    // symmetrize away rounding asymmetry
    let half = Real::one(policy.precision_bits()).half();
    Ok(root.add(&root.transpose()).scale(&half))
}

fn denman_beavers(
    m: &SquareMatrix<Real>,
    policy: &TolerancePolicy,
) -> Result<SquareMatrix<Real>, NumericError> {
    let bits = policy.precision_bits();
    let threshold = policy.abs_tol().mul(&Real::from_rational(&super::ratio(1, 10), bits));
    let half = Real::one(bits).half();
    let mut y = m.clone();
    let mut z = m.identity();
    let mut last_step = Real::zero(bits);
    for _ in 0..MAX_ITERATIONS {
        let y_inv = y.inverse().ok_or(NumericError::SingularInput)?;
        let z_inv = z.inverse().ok_or(NumericError::SingularInput)?;
        let y_next = y.add(&z_inv).scale(&half);
        let z_next = z.add(&y_inv).scale(&half);
        last_step = y_next.sub(&y).frobenius_norm(bits);
        y = y_next;
        z = z_next;
        if last_step <= threshold {
            return Ok(y);
        }
    }
    Err(NumericError::NoConvergence {
        iterations: MAX_ITERATIONS,
        last_step: last_step.to_sci_string(20),
    })
}

/// Outcome of an `SO(n)` membership test; residuals are always reported.
#[derive(Clone, Debug)]
pub struct OrthogonalityCheck {
    pub passed: bool,
    /// `‖g·gᵀ − I‖`
    pub orthogonality_defect: Real,
    /// `|det g − 1|`
    pub determinant_defect: Real,
}

pub fn is_special_orthogonal(g: &SquareMatrix<Real>, policy: &TolerancePolicy) -> OrthogonalityCheck {
    let bits = policy.precision_bits();
    let gram = g.mul(&g.transpose());
    let orthogonality_defect = gram.sub(&g.identity()).frobenius_norm(bits);
    let determinant_defect = g.det().sub(&Real::one(bits)).abs();
    let passed = orthogonality_defect <= *policy.abs_tol() && determinant_defect <= *policy.abs_tol();
    OrthogonalityCheck {
        passed,
        orthogonality_defect,
        determinant_defect,
    }
}

/// `g = spd · orth` with `spd = √(g·gᵀ)`.
#[derive(Clone, Debug)]
pub struct Polar {
    pub spd: SquareMatrix<Real>,
    pub orth: SquareMatrix<Real>,
}

pub fn polar_decompose(g: &SquareMatrix<Real>, policy: &TolerancePolicy) -> Result<Polar, NumericError> {
    let det = g.det();
    if det.abs() <= *policy.abs_tol() {
        return Err(NumericError::SingularInput);
    }
    if det.cmp_zero() == Ordering::Less {
        return Err(NumericError::NegativeDeterminant {
            det: det.to_sci_string(20),
        });
    }
    let spd = spd_sqrt(&g.mul(&g.transpose()), policy)?;
    let orth = spd.inverse().ok_or(NumericError::SingularInput)?.mul(g);
    Ok(Polar { spd, orth })
}
