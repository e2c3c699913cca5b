//! Elements of the truncated completed tensor algebra `T̂ / T̂_{D+1}`.

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::Scalar;
use crate::tensor::{mul_terms, PairTensor, Tensor};
use crate::word::{Genus, Word};

/// A tensor known modulo words of weight greater than `cutoff`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    tensor: Tensor,
    cutoff: usize,
}

impl TruncatedSeries {
    /// Drops every word longer than `cutoff`.
    pub fn new(tensor: Tensor, cutoff: usize) -> Self {
        TruncatedSeries {
            tensor: tensor.truncate(cutoff),
            cutoff,
        }
    }

    pub fn one(g: Genus, cutoff: usize) -> Self {
        Self::new(Tensor::unit(g), cutoff)
    }

    pub fn zero(g: Genus, cutoff: usize) -> Self {
        Self::new(Tensor::zero(g), cutoff)
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> Tensor {
        self.tensor
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn genus(&self) -> Genus {
        self.tensor.genus()
    }

    pub fn constant(&self) -> Scalar {
        self.tensor.coeff(&Word::empty())
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        Self::new(self.tensor.clone(), cutoff.min(self.cutoff))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.cutoff.min(other.cutoff);
        Ok(Self::new(self.tensor.add(&other.tensor)?, d))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let d = self.cutoff.min(other.cutoff);
        Ok(Self::new(self.tensor.sub(&other.tensor)?, d))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries {
            tensor: self.tensor.scale(c),
            cutoff: self.cutoff,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.genus() != other.genus() {
            return Err(Error::GenusMismatch(self.genus(), other.genus()));
        }
        let d = self.cutoff.min(other.cutoff);
        let terms = mul_terms(self.tensor.terms(), other.tensor.terms(), Some(d));
        Ok(TruncatedSeries {
            tensor: Tensor::from_terms_unchecked(self.genus(), terms),
            cutoff: d,
        })
    }

    /// `Σ_k s^k / k!`; needs a vanishing constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant().is_zero() {
            return Err(Error::SeriesDomain("exp needs a zero constant term"));
        }
        Ok(self.power_sum(|k| Scalar::inv_factorial(k as u32)))
    }

    /// `Σ_{k≥1} (−1)^{k+1} (s−1)^k / k`; needs constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant().is_one() {
            return Err(Error::SeriesDomain("log needs constant term 1"));
        }
        let n = self.sub(&Self::one(self.genus(), self.cutoff))?;
        Ok(n.power_sum(|k| {
            if k == 0 {
                Scalar::zero()
            } else {
                Scalar::sign(k + 1) * Scalar::new(1, k as i64)
            }
        }))
    }

    /// Multiplicative inverse via the geometric series; needs an invertible constant.
    pub fn inverse(&self) -> Result<Self> {
        let c = self
            .constant()
            .recip()
            .ok_or(Error::SeriesDomain("inverse needs a nonzero constant term"))?;
        // s = c0 (1 + n) with n = s/c0 − 1, so s^{-1} = c0^{-1} Σ (−n)^k.
        let n = self.scale(&c).sub(&Self::one(self.genus(), self.cutoff))?;
        Ok(n.power_sum(|k| Scalar::sign(k)).scale(&c))
    }

    /// `Σ_{k=0}^{cutoff} coeff(k) s^k`, for `s` without constant term.
    fn power_sum(&self, coeff: impl Fn(usize) -> Scalar) -> Self {
        let g = self.genus();
        let mut acc = Self::zero(g, self.cutoff);
        let mut pow = Self::one(g, self.cutoff);
        for k in 0..=self.cutoff {
            let c = coeff(k);
            if !c.is_zero() {
                acc = acc.add(&pow.scale(&c)).expect("same genus");
            }
            pow = pow.mul(self).expect("same genus");
            if pow.tensor.is_zero() {
                break;
            }
        }
        acc
    }

    /// The algebra map extending `Δ(X) = X⊗1 + 1⊗X`, i.e. the unshuffle coproduct.
    pub fn coproduct(&self) -> PairTensor {
        let mut terms = LinComb::new();
        for (w, c) in self.tensor.terms() {
            let m = w.weight();
            for mask in 0u32..(1u32 << m) {
                let mut left = Word::empty();
                let mut right = Word::empty();
                for (k, l) in w.letters().iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        left.0.push(*l);
                    } else {
                        right.0.push(*l);
                    }
                }
                terms.add_term((left, right), c.clone());
            }
        }
        PairTensor {
            g: self.genus(),
            terms,
        }
    }

    /// `Δs = s ⊗ s` modulo total weight above the cutoff.
    pub fn is_grouplike(&self) -> bool {
        self.coproduct() == PairTensor::outer(&self.tensor, &self.tensor, self.cutoff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::omega;
    use crate::word::Letter;
    use proptest::prelude::*;

    fn series(g: Genus, s: &[(&str, Scalar)], d: usize) -> TruncatedSeries {
        let terms = s.iter().map(|(w, c)| (w.parse::<Word>().unwrap(), c.clone())).collect();
        TruncatedSeries::new(Tensor::from_terms(g, terms).unwrap(), d)
    }

    #[test]
    fn exp_of_zero_is_one() {
        let z = TruncatedSeries::zero(1, 4);
        assert_eq!(z.exp().unwrap(), TruncatedSeries::one(1, 4));
    }

    #[test]
    fn exp_omega_genus_one() {
        let w = TruncatedSeries::new(omega(1), 4);
        let e = w.exp().unwrap();
        let sq = w.mul(&w).unwrap().scale(&Scalar::new(1, 2));
        let expected = TruncatedSeries::one(1, 4).add(&w).unwrap().add(&sq).unwrap();
        assert_eq!(e, expected);
        assert_eq!(e.log().unwrap(), w);
    }

    #[test]
    fn coproduct_examples() {
        let a = series(1, &[("a1", Scalar::one())], 3);
        let mut expected = LinComb::new();
        expected.add_int(("a1".parse().unwrap(), Word::empty()), 1);
        expected.add_int((Word::empty(), "a1".parse().unwrap()), 1);
        assert_eq!(a.coproduct().terms, expected);

        let one = TruncatedSeries::one(1, 3);
        assert_eq!(one.coproduct().terms.len(), 1);

        let ab = series(1, &[("a1 b1", Scalar::one())], 3);
        let cp = ab.coproduct().terms;
        assert_eq!(cp.len(), 4);
        assert_eq!(cp.get(&("a1".parse().unwrap(), "b1".parse().unwrap())), Scalar::one());
        assert_eq!(cp.get(&("b1".parse().unwrap(), "a1".parse().unwrap())), Scalar::one());
    }

    #[test]
    fn grouplike_examples() {
        let a = TruncatedSeries::new(Tensor::letter(1, Letter::a(1)), 5);
        assert!(a.exp().unwrap().is_grouplike());
        let x = series(1, &[("", Scalar::one()), ("a1 b1", Scalar::one())], 3);
        assert!(!x.is_grouplike());
        assert!(TruncatedSeries::one(2, 3).is_grouplike());
    }

    #[test]
    fn domain_errors() {
        let one = TruncatedSeries::one(1, 3);
        assert!(one.exp().is_err());
        assert!(TruncatedSeries::zero(1, 3).log().is_err());
        assert!(TruncatedSeries::zero(1, 3).inverse().is_err());
    }

    fn arb_primitive(g: Genus) -> impl Strategy<Value = Tensor> {
        proptest::collection::vec(-4i64..=4, 2 * g as usize).prop_map(move |cs| {
            let terms = cs
                .iter()
                .enumerate()
                .map(|(k, c)| (Word::from_letters(&[Letter::from_code(k as u8)]), Scalar::from_int(*c)))
                .collect();
            Tensor::from_terms(g, terms).unwrap()
        })
    }

    fn arb_series(g: Genus, d: usize) -> impl Strategy<Value = TruncatedSeries> {
        let letter = (0..2 * g).prop_map(Letter::from_code);
        let word = proptest::collection::vec(letter, 1..=d).prop_map(|v| Word::from_letters(&v));
        proptest::collection::vec((word, -3i64..=3, 1i64..=3), 0..5).prop_map(move |terms| {
            let lc = terms
                .into_iter()
                .map(|(w, p, q)| (w, Scalar::new(p, q)))
                .collect();
            TruncatedSeries::new(Tensor::from_terms(g, lc).unwrap(), d)
        })
    }

    proptest! {
        #[test]
        fn exp_of_primitive_is_grouplike(p in arb_primitive(2), d in 0usize..=6) {
            let s = TruncatedSeries::new(p, d);
            prop_assert!(s.exp().unwrap().is_grouplike());
        }

        #[test]
        fn exp_and_log_are_inverse(s in arb_series(2, 4)) {
            let e = s.exp().unwrap();
            prop_assert_eq!(e.log().unwrap(), s.clone());
            let one = TruncatedSeries::one(2, 4);
            let u = one.add(&s).unwrap();
            prop_assert_eq!(u.log().unwrap().exp().unwrap(), u.clone());
            prop_assert_eq!(u.mul(&u.inverse().unwrap()).unwrap(), one);
        }
    }
}
