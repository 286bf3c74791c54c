use super::ReflectionError;

/// Finite product `σ_{p₁} ∘ … ∘ σ_{p_k}` of elementary reflections.
///
/// Every generator is an involution, so the inverse is the reversed word.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionWord<P> {
    letters: Vec<P>,
}

impl<P: Clone> ReflectionWord<P> {
    pub fn new(letters: Vec<P>) -> Self {
        ReflectionWord { letters }
    }

    pub fn empty() -> Self {
        ReflectionWord { letters: Vec::new() }
    }

    pub fn single(p: P) -> Self {
        ReflectionWord { letters: vec![p] }
    }

    pub fn letters(&self) -> &[P] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `self ∘ other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        ReflectionWord { letters }
    }

    pub fn inverse(&self) -> Self {
        ReflectionWord {
            letters: self.letters.iter().rev().cloned().collect(),
        }
    }

    /// `by ∘ self ∘ by⁻¹`.
    pub fn conjugated_by(&self, by: &Self) -> Self {
        by.then(self).then(&by.inverse())
    }

    pub fn map<Q: Clone>(&self, f: impl Fn(&P) -> Q) -> ReflectionWord<Q> {
        ReflectionWord {
            letters: self.letters.iter().map(f).collect(),
        }
    }
}

/// Sign of an elementary transvection factor `tr_x^{±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    Direct,
    Inverse,
}

/// Even-length reflection word, i.e. an element of the transvection group.
///
/// With basepoint `o`, `tr_x = σ_x ∘ σ_o` and `tr_x⁻¹ = σ_o ∘ σ_x`; a letter pair
/// `(a, b)` factors as `tr_a ∘ tr_b⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransvectionWord<P> {
    word: ReflectionWord<P>,
}

impl<P: Clone> TransvectionWord<P> {
    pub fn identity() -> Self {
        TransvectionWord {
            word: ReflectionWord::empty(),
        }
    }

    pub fn from_reflections(word: ReflectionWord<P>) -> Result<Self, ReflectionError> {
        if word.len() % 2 == 0 {
            Ok(TransvectionWord { word })
        } else {
            Err(ReflectionError::OddLength(word.len()))
        }
    }

    /// `tr_x = σ_x ∘ σ_o`.
    pub fn elementary(x: P, basepoint: P) -> Self {
        TransvectionWord {
            word: ReflectionWord::new(vec![x, basepoint]),
        }
    }

    /// `tr_{x₁}^{e₁} ∘ … ∘ tr_{x_m}^{e_m}`.
    pub fn from_elementary(factors: &[(P, Exponent)], basepoint: &P) -> Self {
        let mut letters = Vec::with_capacity(2 * factors.len());
        for (x, e) in factors {
            match e {
                Exponent::Direct => letters.extend([x.clone(), basepoint.clone()]),
                Exponent::Inverse => letters.extend([basepoint.clone(), x.clone()]),
            }
        }
        TransvectionWord {
            word: ReflectionWord::new(letters),
        }
    }

    /// Factored view: pair `(a, b)` becomes `tr_a ∘ tr_b⁻¹`.
    pub fn elementary_factors(&self) -> Vec<(P, Exponent)> {
        self.word
            .letters()
            .chunks(2)
            .flat_map(|pair| {
                [
                    (pair[0].clone(), Exponent::Direct),
                    (pair[1].clone(), Exponent::Inverse),
                ]
            })
            .collect()
    }

    pub fn reflections(&self) -> &ReflectionWord<P> {
        &self.word
    }

    pub fn into_reflections(self) -> ReflectionWord<P> {
        self.word
    }

    /// Number of elementary reflections.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `self ∘ other`.
    pub fn then(&self, other: &Self) -> Self {
        TransvectionWord {
            word: self.word.then(&other.word),
        }
    }

    pub fn inverse(&self) -> Self {
        TransvectionWord {
            word: self.word.inverse(),
        }
    }

    /// `by ∘ self ∘ by⁻¹`.
    pub fn conjugated_by(&self, by: &Self) -> Self {
        TransvectionWord {
            word: self.word.conjugated_by(&by.word),
        }
    }

    /// `σ_p ∘ self ∘ σ_p`, again a transvection.
    pub fn conjugated_by_reflection(&self, p: &P) -> Self {
        TransvectionWord {
            word: self.word.conjugated_by(&ReflectionWord::single(p.clone())),
        }
    }

    /// Group commutator `[a, b] = a ∘ b ∘ a⁻¹ ∘ b⁻¹`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.then(b).then(&a.inverse()).then(&b.inverse())
    }

    /// `self` composed with itself `k` times.
    pub fn power(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.then(self))
    }

    pub fn map<Q: Clone>(&self, f: impl Fn(&P) -> Q) -> TransvectionWord<Q> {
        TransvectionWord {
            word: self.word.map(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_reverses_letters() {
        let w = ReflectionWord::new(vec![1, 2, 3]);
        assert_eq!(w.inverse().letters(), &[3, 2, 1]);
        assert_eq!(w.then(&w.inverse()).len(), 6);
    }

    #[test]
    fn elementary_round_trip() {
        let factors = [(5, Exponent::Direct), (7, Exponent::Inverse)];
        let w = TransvectionWord::from_elementary(&factors, &0);
        assert_eq!(w.reflections().letters(), &[5, 0, 0, 7]);
        let pairs = w.elementary_factors();
        assert_eq!(pairs[0], (5, Exponent::Direct));
        assert_eq!(pairs[3], (7, Exponent::Inverse));
    }

    #[test]
    fn odd_words_are_not_transvections() {
        assert_eq!(
            TransvectionWord::from_reflections(ReflectionWord::new(vec![1, 2, 3])),
            Err(ReflectionError::OddLength(3))
        );
    }

    #[test]
    fn commutator_length() {
        let a = TransvectionWord::elementary(1, 0);
        let b = TransvectionWord::elementary(2, 0);
        assert_eq!(TransvectionWord::commutator(&a, &b).len(), 8);
        assert_eq!(a.power(3).len(), 6);
    }
}
