use std::fmt;

use super::EmbeddingError;
use crate::hyperbolic::{factor_sl2_spd_squares, shear_decomposition, shear_spd_factors, Shear, ShearSide};
use crate::numeric::{int, spd_sqrt, QSqrt2, Rational, Real, Residual, Scalar, SquareMatrix, TolerancePolicy};
use crate::reflection::{SpaceModel, SpdModel, SpdPoint};
use crate::sampling::elementary;

/// A shear in the simple-root block `(k, k + 1)` of `SL_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootShear {
    pub k: usize,
    pub shear: Shear,
}

impl RootShear {
    pub fn matrix<T: Scalar>(&self, n: usize, unit: &T) -> SquareMatrix<T> {
        SquareMatrix::embed_block(&self.shear.matrix(unit), n, self.k, self.k + 1)
    }
}

impl fmt::Display for RootShear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.shear, self.k)
    }
}

/// `I + t·E_ij` as a product of simple-root shears.
///
/// Adjacent positions are a single shear. Otherwise, with `k` the neighbour of `i`
/// towards `j`, `E_ij(t) = [E_ik(t), E_kj(1)]`.
fn elementary_as_root_shears(i: usize, j: usize, t: &Rational) -> Vec<RootShear> {
    if t == &int(0) {
        return Vec::new();
    }
    if j == i + 1 {
        return vec![RootShear { k: i, shear: Shear { side: ShearSide::Upper, t: t.clone() } }];
    }
    if i == j + 1 {
        return vec![RootShear { k: j, shear: Shear { side: ShearSide::Lower, t: t.clone() } }];
    }
    let k = if i < j { i + 1 } else { i - 1 };
    let a = elementary_as_root_shears(i, k, t);
    let b = elementary_as_root_shears(k, j, &int(1));
    let a_inv = elementary_as_root_shears(i, k, &-t.clone());
    let b_inv = elementary_as_root_shears(k, j, &int(-1));
    [a, b, a_inv, b_inv].concat()
}

/// Simple-root shears with exact product `g ∈ SL_n(ℚ)`.
///
/// Row reduction writes `g = E₁⋯E_m·D`. Non-adjacent elementary matrices are
/// rewritten as commutators; `D` is the product of the blocks
/// `diag(p_k, 1/p_k)` at `(k, k + 1)` with `p_k = d₁⋯d_k`, each decomposed in `SL₂`.
pub fn root_shear_decomposition(g: &SquareMatrix<Rational>) -> Result<Vec<RootShear>, EmbeddingError> {
    let n = g.n();
    if g.det() != int(1) {
        return Err(EmbeddingError::NotUnimodular { det: g.det().to_string() });
    }
    let zero = int(0);
    let mut m = g.clone();
    // Row operations applied on the left, in order.
    let mut ops: Vec<(usize, usize, Rational)> = Vec::new();
    let mut apply = |m: &mut SquareMatrix<Rational>, i: usize, j: usize, t: Rational| {
        *m = elementary(n, i, j, t.clone()).mul(m);
        ops.push((i, j, t));
    };
    for k in 0..n {
        if m.get(k, k) == &zero {
            let r = (k + 1..n)
                .find(|&r| m.get(r, k) != &zero)
                .expect("trailing block of an invertible matrix has a pivot");
            apply(&mut m, k, r, int(1));
        }
        for r in k + 1..n {
            if m.get(r, k) != &zero {
                let t = -(m.get(r, k) / m.get(k, k));
                apply(&mut m, r, k, t);
            }
        }
    }
    for k in (0..n).rev() {
        for r in 0..k {
            if m.get(r, k) != &zero {
                let t = -(m.get(r, k) / m.get(k, k));
                apply(&mut m, r, k, t);
            }
        }
    }
    // g = E(ops₁)⁻¹ ⋯ E(ops_m)⁻¹ · D
    let mut shears: Vec<RootShear> = ops
        .iter()
        .flat_map(|(i, j, t)| elementary_as_root_shears(*i, *j, &-t.clone()))
        .collect();
    let mut p = int(1);
    for k in 0..n - 1 {
        p = p * m.get(k, k);
        let block = SquareMatrix::diagonal(vec![p.clone(), int(1) / &p]);
        for shear in shear_decomposition(&block)? {
            shears.push(RootShear { k, shear });
        }
    }
    let one = int(1);
    let product = shears
        .iter()
        .fold(SquareMatrix::identity_like(n, &one), |acc, s| acc.mul(&s.matrix(n, &one)));
    if &product != g {
        return Err(EmbeddingError::FactorizationFailed {
            trace: vec![format!("root shear product {product} differs from {g}")],
        });
    }
    Ok(shears)
}

/// Symmetric positive-definite factor `h` supported on one simple-root block.
#[derive(Clone, Debug)]
pub struct RootFactor {
    pub k: usize,
    /// `P = τ(h)`, exact, embedded.
    pub exact: SquareMatrix<QSqrt2>,
    /// `h = √P`, embedded.
    pub root: SquareMatrix<Real>,
}

impl RootFactor {
    /// Canonical coordinate of the coset `hK`.
    pub fn point(&self) -> SpdPoint<Real> {
        SpdPoint::new_unchecked(self.root.mul(&self.root.transpose()))
    }
}

/// Letters of a nested reflection expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReflExpr {
    /// The basepoint `o`.
    Base,
    /// `h_i.(arg)` for `i ≥ 1`, or `o.(arg)` when `letter` is `None`.
    Apply { letter: Option<usize>, arg: Box<ReflExpr> },
}

impl ReflExpr {
    /// `h₁.(o.(h₂.(o.(… (h_m.o)))))`.
    pub fn nested(m: usize) -> Self {
        let mut expr = ReflExpr::Base;
        for i in (1..=m).rev() {
            expr = ReflExpr::Apply { letter: Some(i), arg: Box::new(expr) };
            if i > 1 {
                expr = ReflExpr::Apply { letter: None, arg: Box::new(expr) };
            }
        }
        expr
    }

    /// Evaluates with `h_i ↦ points[i − 1]` through the model's reflection map.
    pub fn evaluate<M: SpaceModel>(&self, model: &M, points: &[M::Point]) -> M::Point {
        match self {
            ReflExpr::Base => model.basepoint(),
            ReflExpr::Apply { letter, arg } => {
                let x = match letter {
                    Some(i) => points[i - 1].clone(),
                    None => model.basepoint(),
                };
                model.reflect_unchecked(&x, &arg.evaluate(model, points))
            }
        }
    }
}

impl fmt::Display for ReflExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReflExpr::Base => write!(f, "o"),
            ReflExpr::Apply { letter, arg } => {
                match letter {
                    Some(i) => write!(f, "h{i}.")?,
                    None => write!(f, "o.")?,
                }
                if matches!(**arg, ReflExpr::Base) {
                    write!(f, "{arg}")
                } else {
                    write!(f, "({arg})")
                }
            }
        }
    }
}

/// `xK` written as a nested reflection expression in points of root subspaces.
#[derive(Clone, Debug)]
pub struct PointFactorization {
    pub factors: Vec<RootFactor>,
    pub expression: ReflExpr,
    /// Central sign with `τ(h₁)⋯τ(h_m) = sign·x`; it fixes the coset point either way.
    pub sign: i8,
    pub value: SpdPoint<Real>,
    pub target: SpdPoint<Real>,
    pub residual: Residual,
}

pub fn point_factorization(
    x: &SquareMatrix<Rational>,
    policy: &TolerancePolicy,
) -> Result<PointFactorization, EmbeddingError> {
    let n = x.n();
    let bits = policy.precision_bits();
    let (factors, sign) = if n == 2 {
        let f = factor_sl2_spd_squares(x, policy)?;
        let factors = f
            .spd_factors
            .into_iter()
            .zip(f.roots)
            .map(|(exact, root)| RootFactor { k: 0, exact, root })
            .collect();
        (factors, f.sign)
    } else {
        let mut factors = Vec::new();
        for rs in root_shear_decomposition(x)? {
            for p in shear_spd_factors(&rs.shear)? {
                let h = spd_sqrt(&p.to_real(bits), policy).map_err(|e| EmbeddingError::FactorizationFailed {
                    trace: vec![format!("square root of {p} for {rs}: {e}")],
                })?;
                factors.push(RootFactor {
                    k: rs.k,
                    exact: SquareMatrix::embed_block(&p, n, rs.k, rs.k + 1),
                    root: SquareMatrix::embed_block(&h, n, rs.k, rs.k + 1),
                });
            }
        }
        (factors, 1)
    };
    let model = SpdModel::real(n, bits);
    let points: Vec<_> = factors.iter().map(RootFactor::point).collect();
    let expression = ReflExpr::nested(factors.len());
    let value = expression.evaluate(&model, &points);
    let xr = x.to_real(bits);
    let target = SpdPoint::new_unchecked(xr.mul(&xr.transpose()));
    let residual = model.distance(&value, &target, policy);
    Ok(PointFactorization {
        factors,
        expression,
        sign,
        value,
        target,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;
    use crate::sampling::{random_bounded_sl, sample_rng};

    #[test]
    fn expression_rendering() {
        assert_eq!(ReflExpr::nested(0).to_string(), "o");
        assert_eq!(ReflExpr::nested(1).to_string(), "h1.o");
        assert_eq!(ReflExpr::nested(3).to_string(), "h1.(o.(h2.(o.(h3.o))))");
    }

    #[test]
    fn corner_elementaries_use_commutators() {
        let shears = elementary_as_root_shears(0, 2, &ratio(3, 2));
        assert_eq!(shears.len(), 4);
        let one = int(1);
        let product = shears
            .iter()
            .fold(SquareMatrix::identity_like(3, &one), |acc, s| acc.mul(&s.matrix(3, &one)));
        assert_eq!(product, elementary(3, 0, 2, ratio(3, 2)));
        let lower = elementary_as_root_shears(2, 0, &int(-2));
        let product = lower
            .iter()
            .fold(SquareMatrix::identity_like(3, &one), |acc, s| acc.mul(&s.matrix(3, &one)));
        assert_eq!(product, elementary(3, 2, 0, int(-2)));
    }

    #[test]
    fn decomposes_random_sl3() {
        for i in 0..20 {
            let g = random_bounded_sl(3, &mut sample_rng(4, "test", i));
            root_shear_decomposition(&g).unwrap();
        }
        let perm = SquareMatrix::from_ints(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        root_shear_decomposition(&perm).unwrap();
    }

    #[test]
    fn identity_is_basepoint() {
        let p = TolerancePolicy::default();
        let f = point_factorization(&SquareMatrix::from_ints(&[&[1, 0], &[0, 1]]), &p).unwrap();
        assert_eq!(f.expression.to_string(), "o");
        assert!(f.residual.within(&p));
    }

    #[test]
    fn unipotent_round_trip() {
        let p = TolerancePolicy::default();
        let f = point_factorization(&SquareMatrix::from_ints(&[&[1, 1], &[0, 1]]), &p).unwrap();
        assert_eq!(f.factors.len(), 3);
        let oracle = SquareMatrix::from_ints(&[&[2, 1], &[1, 1]]).to_real(128);
        assert!(Residual::between(f.value.matrix(), &oracle, 128).within(&p));
    }

    #[test]
    fn sl3_round_trip() {
        let p = TolerancePolicy::default();
        let g = random_bounded_sl(3, &mut sample_rng(2, "test", 0));
        let f = point_factorization(&g, &p).unwrap();
        assert!(f.residual.within(&p), "{}", f.residual);
    }
}
