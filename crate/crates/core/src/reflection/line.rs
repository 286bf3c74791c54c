use rand::Rng;

use super::{ReflectionError, SpaceModel};
use crate::numeric::{int, ratio, Rational, Residual, TolerancePolicy};
use crate::sampling::SampleRng;

/// The geodesic model `(ℚ, x.y = 2x − y)` with basepoint `0`, evaluated exactly.
#[derive(Clone, Copy, Debug, Default)]
pub struct RealLine;

impl SpaceModel for RealLine {
    type Point = Rational;

    fn name(&self) -> String {
        "geodesic".to_string()
    }

    fn basepoint(&self) -> Rational {
        int(0)
    }

    fn validate(&self, _p: &Rational) -> Result<(), ReflectionError> {
        Ok(())
    }

    fn reflect_unchecked(&self, x: &Rational, y: &Rational) -> Rational {
        int(2) * x - y
    }

    fn sample_point(&self, rng: &mut SampleRng) -> Rational {
        ratio(rng.gen_range(-64..=64), rng.gen_range(1..=16))
    }

    fn distance(&self, x: &Rational, y: &Rational, policy: &TolerancePolicy) -> Residual {
        Residual::between_scalars(x, y, policy.precision_bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_is_point_symmetry() {
        assert_eq!(RealLine.reflect(&int(1), &int(3)).unwrap(), int(-1));
        assert_eq!(RealLine.reflect(&ratio(1, 2), &int(0)).unwrap(), int(1));
    }
}
