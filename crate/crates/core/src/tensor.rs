//! Sparse elements of the tensor algebra `T = ⊕ H^{⊗m}`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::Scalar;
use crate::word::{check_genus, Genus, Letter, Word};

/// A finite exact linear combination of words over `2g` letters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor {
    g: Genus,
    terms: LinComb<Word>,
}

impl Tensor {
    pub fn zero(g: Genus) -> Self {
        Tensor {
            g,
            terms: LinComb::new(),
        }
    }

    pub fn unit(g: Genus) -> Self {
        Self::word(g, Word::empty())
    }

    pub fn word(g: Genus, w: Word) -> Self {
        Tensor {
            g,
            terms: LinComb::single(w, Scalar::one()),
        }
    }

    pub fn letter(g: Genus, l: Letter) -> Self {
        Self::word(g, Word::from_letters(&[l]))
    }

    /// Builds a tensor after checking every letter against the genus.
    pub fn from_terms(g: Genus, terms: LinComb<Word>) -> Result<Self> {
        check_genus(g)?;
        for w in terms.keys() {
            w.check(g)?;
        }
        Ok(Tensor { g, terms })
    }

    pub(crate) fn from_terms_unchecked(g: Genus, terms: LinComb<Word>) -> Self {
        Tensor { g, terms }
    }

    pub fn genus(&self) -> Genus {
        self.g
    }

    pub fn terms(&self) -> &LinComb<Word> {
        &self.terms
    }

    pub fn into_terms(self) -> LinComb<Word> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w)
    }

    /// The set of word lengths carrying a nonzero coefficient.
    pub fn weight_support(&self) -> BTreeSet<usize> {
        self.terms.keys().map(Word::weight).collect()
    }

    pub fn homogeneous(&self, m: usize) -> Tensor {
        Tensor {
            g: self.g,
            terms: self.terms.filter(|w| w.weight() == m),
        }
    }

    pub fn truncate(&self, max_weight: usize) -> Tensor {
        Tensor {
            g: self.g,
            terms: self.terms.filter(|w| w.weight() <= max_weight),
        }
    }

    fn same_genus(&self, other: &Tensor) -> Result<()> {
        if self.g != other.g {
            Err(Error::GenusMismatch(self.g, other.g))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.same_genus(other)?;
        Ok(Tensor {
            g: self.g,
            terms: self.terms.sum(&other.terms),
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.same_genus(other)?;
        Ok(Tensor {
            g: self.g,
            terms: self.terms.diff(&other.terms),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        Tensor {
            g: self.g,
            terms: self.terms.scaled(c),
        }
    }

    pub fn neg(&self) -> Tensor {
        Tensor {
            g: self.g,
            terms: self.terms.neg(),
        }
    }

    /// Bilinear extension of word concatenation.
    pub fn concat_mul(&self, other: &Tensor) -> Result<Tensor> {
        self.same_genus(other)?;
        Ok(Tensor {
            g: self.g,
            terms: mul_terms(&self.terms, &other.terms, None),
        })
    }

    /// Linear extension of the rotation sum `N`; kills the weight-0 part.
    pub fn cyclicize(&self) -> Tensor {
        Tensor {
            g: self.g,
            terms: cyclicize_terms(&self.terms),
        }
    }
}

/// Product of two word combinations, dropping words longer than `cutoff`.
pub(crate) fn mul_terms(
    x: &LinComb<Word>,
    y: &LinComb<Word>,
    cutoff: Option<usize>,
) -> LinComb<Word> {
    let mut out = LinComb::new();
    for (a, ca) in x {
        for (b, cb) in y {
            if cutoff.is_some_and(|d| a.weight() + b.weight() > d) {
                continue;
            }
            out.add_term(a.concat(b), ca * cb);
        }
    }
    out
}

pub(crate) fn cyclicize_terms(t: &LinComb<Word>) -> LinComb<Word> {
    let mut out = LinComb::new();
    for (w, c) in t {
        for i in 0..w.weight() {
            out.add_term(w.rotate(i), c.clone());
        }
    }
    out
}

/// `ω = Σ A_i B_i − B_i A_i`.
pub fn omega(g: Genus) -> Tensor {
    let mut t = LinComb::new();
    for i in 1..=g {
        let (a, b) = (Letter::a(i), Letter::b(i));
        t.add_int(Word::from_letters(&[a, b]), 1);
        t.add_int(Word::from_letters(&[b, a]), -1);
    }
    Tensor { g, terms: t }
}

/// A combination of ordered pairs of words, the codomain of the coproduct.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairTensor {
    pub g: Genus,
    pub terms: LinComb<(Word, Word)>,
}

impl PairTensor {
    /// `x ⊗ y`, keeping only total weight `≤ cutoff`.
    pub fn outer(x: &Tensor, y: &Tensor, cutoff: usize) -> PairTensor {
        let mut terms = LinComb::new();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                if a.weight() + b.weight() <= cutoff {
                    terms.add_term((a.clone(), b.clone()), ca * cb);
                }
            }
        }
        PairTensor { g: x.genus(), terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(g: Genus, s: &[(&str, i64)]) -> Tensor {
        let terms = s
            .iter()
            .map(|(w, c)| (w.parse::<Word>().unwrap(), Scalar::from_int(*c)))
            .collect();
        Tensor::from_terms(g, terms).unwrap()
    }

    #[test]
    fn product_examples() {
        let a = t(1, &[("a1", 1)]);
        let b = t(1, &[("b1", 1)]);
        assert_eq!(a.concat_mul(&b).unwrap(), t(1, &[("a1 b1", 1)]));
        assert_eq!(Tensor::unit(1).concat_mul(&a).unwrap(), a);
        let s = t(1, &[("a1", 1), ("b1", 1)]);
        let d = t(1, &[("a1", 1), ("b1", -1)]);
        assert_eq!(
            s.concat_mul(&d).unwrap(),
            t(1, &[("a1 a1", 1), ("a1 b1", -1), ("b1 a1", 1), ("b1 b1", -1)])
        );
        assert!(a.concat_mul(&Tensor::unit(2)).is_err());
    }

    #[test]
    fn omega_values() {
        assert_eq!(omega(1), t(1, &[("a1 b1", 1), ("b1 a1", -1)]));
        assert_eq!(
            omega(2),
            t(2, &[("a1 b1", 1), ("b1 a1", -1), ("a2 b2", 1), ("b2 a2", -1)])
        );
        assert_eq!(omega(3).weight_support(), [2].into_iter().collect());
    }

    #[test]
    fn cyclicize_examples() {
        assert_eq!(
            t(1, &[("a1 b1", 1)]).cyclicize(),
            t(1, &[("a1 b1", 1), ("b1 a1", 1)])
        );
        assert!(Tensor::unit(1).cyclicize().is_zero());
        assert_eq!(t(1, &[("a1 a1", 1)]).cyclicize(), t(1, &[("a1 a1", 2)]));
    }

    fn arb_tensor(g: Genus, max_len: usize) -> impl Strategy<Value = Tensor> {
        let letter = (0..2 * g).prop_map(Letter::from_code);
        let word = proptest::collection::vec(letter, 0..=max_len).prop_map(|v| Word::from_letters(&v));
        proptest::collection::vec((word, -3i64..=3), 0..5).prop_map(move |terms| {
            let lc = terms.into_iter().map(|(w, c)| (w, Scalar::from_int(c))).collect();
            Tensor::from_terms(g, lc).unwrap()
        })
    }

    proptest! {
        #[test]
        fn product_is_associative_and_unital(x in arb_tensor(2, 3), y in arb_tensor(2, 3), z in arb_tensor(2, 3)) {
            let l = x.concat_mul(&y).unwrap().concat_mul(&z).unwrap();
            let r = x.concat_mul(&y.concat_mul(&z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
            prop_assert_eq!(x.concat_mul(&Tensor::unit(2)).unwrap(), x.clone());
        }

        #[test]
        fn double_cyclicize_scales_by_weight(x in arb_tensor(2, 5), m in 1usize..6) {
            let h = x.homogeneous(m);
            prop_assert_eq!(h.cyclicize().cyclicize(), h.cyclicize().scale(&Scalar::from_int(m as i64)));
        }
    }
}
