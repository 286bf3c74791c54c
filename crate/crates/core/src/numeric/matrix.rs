use std::cmp::Ordering;
use std::fmt;

use super::real::Real;
use super::scalar::{Rational, Scalar};
use super::NumericError;

/// Dense `n × n` matrix, row-major, over a single scalar kind.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Scalar> SquareMatrix<T> {
    pub fn new(n: usize, entries: Vec<T>) -> Result<Self, NumericError> {
        if n == 0 || entries.len() != n * n {
            return Err(NumericError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(SquareMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, NumericError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(NumericError::DimensionMismatch {
                expected: n,
                found: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
            });
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        SquareMatrix { n, entries }
    }

    pub fn identity_like(n: usize, unit: &T) -> Self {
        let (zero, one) = (unit.zero_like(), unit.one_like());
        Self::from_fn(n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn diagonal(values: Vec<T>) -> Self {
        let n = values.len();
        let zero = values[0].zero_like();
        Self::from_fn(n, |i, j| {
            if i == j {
                values[i].clone()
            } else {
                zero.clone()
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.entries[i * self.n + j] = value;
    }

    /// A scalar of the matrix's kind; used as a precision template.
    pub fn unit(&self) -> T {
        self.entries[0].one_like()
    }

    pub fn identity(&self) -> Self {
        Self::identity_like(self.n, &self.entries[0])
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn to_real(&self, precision_bits: usize) -> SquareMatrix<Real> {
        self.map(|x| x.to_real(precision_bits))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        SquareMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        Self::from_fn(n, |i, j| {
            let mut acc = self.get(i, 0).mul(rhs.get(0, j));
            for k in 1..n {
                acc = acc.add(&self.get(i, k).mul(rhs.get(k, j)));
            }
            acc
        })
    }

    /// Left-to-right product of a non-empty list.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a Self>) -> Option<Self> {
        let mut it = factors.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.mul(m)))
    }

    pub fn trace(&self) -> T {
        (1..self.n).fold(self.get(0, 0).clone(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Gaussian elimination with largest-magnitude pivoting.
    pub fn det(&self) -> T {
        let n = self.n;
        let mut m = self.entries.clone();
        let mut det = self.unit();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| m[a * n + col].abs_cmp(&m[b * n + col]))
                .expect("non-empty range");
            if m[pivot * n + col].is_zero() {
                return det.zero_like();
            }
            if pivot != col {
                for k in 0..n {
                    m.swap(pivot * n + k, col * n + k);
                }
                det = det.neg();
            }
            let p = m[col * n + col].clone();
            det = det.mul(&p);
            let p_inv = p.recip().expect("nonzero pivot");
            for row in col + 1..n {
                let factor = m[row * n + col].mul(&p_inv);
                if factor.is_zero() {
                    continue;
                }
                for k in col..n {
                    let v = m[row * n + k].sub(&factor.mul(&m[col * n + k]));
                    m[row * n + k] = v;
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = self.identity().entries;
        for col in 0..n {
            let pivot = (col..n).max_by(|&x, &y| a[x * n + col].abs_cmp(&a[y * n + col]))?;
            if a[pivot * n + col].is_zero() {
                return None;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                    inv.swap(pivot * n + k, col * n + k);
                }
            }
            let p_inv = a[col * n + col].recip()?;
            for k in 0..n {
                a[col * n + k] = a[col * n + k].mul(&p_inv);
                inv[col * n + k] = inv[col * n + k].mul(&p_inv);
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a[row * n + col].clone();
                if factor.is_zero() {
                    continue;
                }
                for k in 0..n {
                    a[row * n + k] = a[row * n + k].sub(&factor.mul(&a[col * n + k]));
                    inv[row * n + k] = inv[row * n + k].sub(&factor.mul(&inv[col * n + k]));
                }
            }
        }
        Some(SquareMatrix { n, entries: inv })
    }

    /// Top-left `k × k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Self::from_fn(k, |i, j| self.get(i, j).clone())
    }

    /// Determinants of the leading principal blocks, sizes `1..=n`.
    pub fn leading_minors(&self) -> Vec<T> {
        (1..=self.n).map(|k| self.leading_block(k).det()).collect()
    }

    /// Index (1-based size) and value of the first leading minor that is not positive.
    pub fn first_nonpositive_minor(&self) -> Option<(usize, T)> {
        self.leading_minors()
            .into_iter()
            .enumerate()
            .find(|(_, m)| m.cmp_zero() != Ordering::Greater)
            .map(|(k, m)| (k + 1, m))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Frobenius norm, evaluated at the given precision.
    pub fn frobenius_norm(&self, precision_bits: usize) -> Real {
        let sum = self
            .entries
            .iter()
            .map(|x| {
                let r = x.to_real(precision_bits);
                r.mul(&r)
            })
            .fold(Real::zero(precision_bits), |acc, v| acc.add(&v));
        sum.sqrt().expect("sum of squares is non-negative")
    }

    /// Copy with the `2 × 2` block `block` placed at rows/columns `(i, j)` of an identity.
    pub fn embed_block(block: &Self, n: usize, i: usize, j: usize) -> Self {
        assert_eq!(block.n, 2, "root blocks are 2 x 2");
        assert!(i < j && j < n, "invalid root position ({i}, {j}) in dimension {n}");
        let mut m = Self::identity_like(n, &block.unit());
        m.set(i, i, block.get(0, 0).clone());
        m.set(i, j, block.get(0, 1).clone());
        m.set(j, i, block.get(1, 0).clone());
        m.set(j, j, block.get(1, 1).clone());
        m
    }

    /// Extracts the `2 × 2` block at rows/columns `(i, j)`.
    pub fn extract_block(&self, i: usize, j: usize) -> Self {
        let idx = [i, j];
        Self::from_fn(2, |a, b| self.get(idx[a], idx[b]).clone())
    }
}

impl SquareMatrix<Rational> {
    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_ratios(rows: &[&[(i64, i64)]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(p, q)| super::scalar::ratio(p, q))
                    .collect()
            })
            .collect();
        Self::from_rows(rows).expect("square input")
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| super::scalar::int(v)).collect())
            .collect();
        Self::from_rows(rows).expect("square input")
    }
}

impl<T: Scalar> fmt::Display for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.n {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::scalar::{int, ratio};

    #[test]
    fn determinant_and_inverse_exact() {
        let m = SquareMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), int(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), m.identity());
        assert_eq!(inv.get(0, 0), &ratio(11, 18));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = SquareMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.det(), int(0));
        assert!(m.inverse().is_none());
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let m = SquareMatrix::from_ints(&[&[0, 1], &[-1, 0]]);
        assert_eq!(m.det(), int(1));
        assert_eq!(m.inverse().unwrap(), SquareMatrix::from_ints(&[&[0, -1], &[1, 0]]));
    }

    #[test]
    fn leading_minors_detect_indefinite() {
        let m = SquareMatrix::from_ints(&[&[1, 2], &[2, 1]]);
        let (k, v) = m.first_nonpositive_minor().unwrap();
        assert_eq!((k, v), (2, int(-3)));
        assert!(SquareMatrix::from_ints(&[&[2, 1], &[1, 1]])
            .first_nonpositive_minor()
            .is_none());
    }

    #[test]
    fn block_embedding_round_trips() {
        let b = SquareMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let e = SquareMatrix::embed_block(&b, 3, 0, 2);
        assert_eq!(e, SquareMatrix::from_ints(&[&[2, 0, 1], &[0, 1, 0], &[1, 0, 1]]));
        assert_eq!(e.extract_block(0, 2), b);
    }

    #[test]
    fn display_is_nested_rows() {
        let m = SquareMatrix::from_ratios(&[&[(1, 2), (0, 1)], &[(0, 1), (2, 1)]]);
        assert_eq!(m.to_string(), "[[1/2, 0], [0, 2]]");
    }
}
