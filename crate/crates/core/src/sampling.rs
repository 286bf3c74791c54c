//! Seeded samplers for group elements and points.
//!
//! Every sample is drawn from its own ChaCha stream keyed by `(seed, tag, index)`,
//! so batches can be evaluated in any order, or in parallel, with identical results.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numeric::{int, ratio, Rational, SquareMatrix};

pub type SampleRng = ChaCha8Rng;

fn tag_hash(tag: &str) -> u64 {
    // FNV-1a
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Independent generator for sample `index` of the batch named `tag`.
pub fn sample_rng(seed: u64, tag: &str, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag_hash(tag));
    rng.set_stream(index);
    rng
}

/// Shear parameter `k/8` with `1 ≤ |k| ≤ 16`.
pub fn shear_parameter(rng: &mut SampleRng) -> Rational {
    let k = rng.gen_range(1..=16_i64);
    let k = if rng.gen_bool(0.5) { k } else { -k };
    ratio(k, 8)
}

/// Elementary matrix `I + t·E_ij`.
pub fn elementary(n: usize, i: usize, j: usize, t: Rational) -> SquareMatrix<Rational> {
    let mut m = SquareMatrix::identity_like(n, &int(1));
    m.set(i, j, t);
    m
}

/// Product of one to six random elementary shears in `SL_n(ℚ)`.
pub fn random_shear_product(n: usize, rng: &mut SampleRng) -> SquareMatrix<Rational> {
    let id = SquareMatrix::identity_like(n, &int(1));
    if n == 1 {
        return id;
    }
    let count = rng.gen_range(1..=6);
    (0..count).fold(id, |acc, _| {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        acc.mul(&elementary(n, i, j, shear_parameter(rng)))
    })
}

/// Rational rotation in the `(i, j)` plane built from a Pythagorean triple.
pub fn random_rotation(n: usize, rng: &mut SampleRng) -> SquareMatrix<Rational> {
    const TRIPLES: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];
    let (a, b, c) = TRIPLES[rng.gen_range(0..TRIPLES.len())];
    let i = rng.gen_range(0..n - 1);
    let j = rng.gen_range(i + 1..n);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let block = SquareMatrix::from_ratios(&[&[(a, c), (-sign * b, c)], &[(sign * b, c), (a, c)]]);
    SquareMatrix::embed_block(&block, n, i, j)
}

/// Random `g ∈ SL_n(ℚ)` with entries in `[-4, 4]`.
///
/// Draws entries `k/8`, rejects determinants below one in magnitude, then scales the
/// last row by `1/det` (negating it for negative determinants).
pub fn random_bounded_sl(n: usize, rng: &mut SampleRng) -> SquareMatrix<Rational> {
    loop {
        let mut g = SquareMatrix::from_fn(n, |_, _| ratio(rng.gen_range(-32..=32), 8));
        let det = g.det();
        if det.clone() * det.clone() < int(1) {
            continue;
        }
        let scale = int(1) / det;
        for j in 0..n {
            let v = g.get(n - 1, j) * &scale;
            g.set(n - 1, j, v);
        }
        return g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = sample_rng(7, "x", 3).gen();
        let b: u64 = sample_rng(7, "x", 3).gen();
        let c: u64 = sample_rng(7, "x", 4).gen();
        let d: u64 = sample_rng(7, "y", 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn samplers_land_in_sl_n() {
        for i in 0..50 {
            let mut rng = sample_rng(1, "sl", i);
            for n in 2..=3 {
                assert_eq!(random_shear_product(n, &mut rng).det(), int(1));
                let r = random_rotation(n, &mut rng);
                assert_eq!(r.mul(&r.transpose()), r.identity());
                let g = random_bounded_sl(n, &mut rng);
                assert_eq!(g.det(), int(1));
                assert!(g.entries().iter().all(|x| x.clone() * x.clone() <= int(16)));
            }
        }
    }
}
