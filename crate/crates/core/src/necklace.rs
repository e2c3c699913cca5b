//! Necklaces (cyclic words) and the derivation elements they span.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use crate::word::{check_genus, Genus, Letter, Word};

/// A nonempty word up to rotation, stored as its lexicographically least
/// rotation. Necklaces are ordered by weight first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Necklace(Word);

impl Necklace {
    /// The necklace of `w`, or `None` for the empty word.
    pub fn of(w: &Word) -> Option<Necklace> {
        let n = w.weight();
        if n == 0 {
            return None;
        }
        let s = w.letters();
        let best = (1..n).fold(0, |best, i| {
            let less = (0..n)
                .map(|k| s[(i + k) % n].cmp(&s[(best + k) % n]))
                .find(|o| *o != Ordering::Equal)
                == Some(Ordering::Less);
            if less {
                i
            } else {
                best
            }
        });
        Some(Necklace(w.rotate(best)))
    }

    pub fn of_letters(letters: &[Letter]) -> Option<Necklace> {
        Self::of(&Word::from_letters(letters))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn letters(&self) -> &[Letter] {
        self.0.letters()
    }

    pub fn weight(&self) -> usize {
        self.0.weight()
    }

    /// How many of the `m` rotations coincide with the canonical word.
    pub fn multiplicity(&self) -> usize {
        self.weight() / self.0.period()
    }

    /// `N(w) = Σ_i rotate(w, i)`, counting periodic rotations repeatedly.
    pub fn to_tensor_terms(&self) -> LinComb<Word> {
        let mut t = LinComb::new();
        for i in 0..self.weight() {
            t.add_int(self.0.rotate(i), 1);
        }
        t
    }

    pub fn charge(&self, g: Genus) -> Vec<i32> {
        self.0.charge(g)
    }
}

impl Ord for Necklace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Necklace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N({})", self.0)
    }
}

impl fmt::Debug for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All necklaces of weight `m` over `2g` letters in lexicographic order,
/// generated by the Fredricksen–Kessler–Maiorana algorithm.
pub fn necklace_basis(g: Genus, m: usize) -> Vec<Necklace> {
    let k = 2 * g;
    if m == 0 || k == 0 {
        return Vec::new();
    }
    let mut a = vec![0u8; m + 1];
    let mut out = Vec::new();
    let emit = |a: &[u8], out: &mut Vec<Necklace>| {
        out.push(Necklace(a[1..].iter().map(|&c| Letter::from_code(c)).collect()));
    };
    emit(&a, &mut out);
    loop {
        let Some(i) = (1..=m).rev().find(|&i| a[i] < k - 1) else {
            break;
        };
        a[i] += 1;
        for j in i + 1..=m {
            a[j] = a[j - i];
        }
        if m % i == 0 {
            emit(&a, &mut out);
        }
    }
    out
}

/// `(1/m) Σ_{d|m} φ(d) k^{m/d}`, the number of `k`-ary necklaces of length `m`.
pub fn necklace_count(g: Genus, m: usize) -> u128 {
    fn phi(mut n: usize) -> u128 {
        let mut r = n as u128;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                while n % p == 0 {
                    n /= p;
                }
                r -= r / p as u128;
            }
            p += 1;
        }
        if n > 1 {
            r -= r / n as u128;
        }
        r
    }
    if m == 0 {
        return 0;
    }
    let k = 2 * g as u128;
    let total: u128 = (1..=m)
        .filter(|d| m % d == 0)
        .map(|d| phi(d) * k.pow((m / d) as u32))
        .sum();
    total / m as u128
}

/// An element of `a_g⁻`: a finite combination of necklace basis vectors `N(w)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivationElem {
    g: Genus,
    terms: LinComb<Necklace>,
}

impl DerivationElem {
    pub fn zero(g: Genus) -> Self {
        DerivationElem {
            g,
            terms: LinComb::new(),
        }
    }

    pub fn necklace(g: Genus, n: Necklace) -> Self {
        DerivationElem {
            g,
            terms: LinComb::single(n, Scalar::one()),
        }
    }

    pub fn from_terms(g: Genus, terms: LinComb<Necklace>) -> Result<Self> {
        check_genus(g)?;
        for n in terms.keys() {
            n.word().check(g)?;
        }
        Ok(DerivationElem { g, terms })
    }

    pub(crate) fn from_terms_unchecked(g: Genus, terms: LinComb<Necklace>) -> Self {
        DerivationElem { g, terms }
    }

    pub fn genus(&self) -> Genus {
        self.g
    }

    pub fn terms(&self) -> &LinComb<Necklace> {
        &self.terms
    }

    pub fn into_terms(self) -> LinComb<Necklace> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.terms.keys().map(Necklace::weight).min()
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().map(Necklace::weight).max()
    }

    pub fn homogeneous(&self, m: usize) -> Self {
        DerivationElem {
            g: self.g,
            terms: self.terms.filter(|n| n.weight() == m),
        }
    }

    pub fn truncate(&self, max_weight: usize) -> Self {
        DerivationElem {
            g: self.g,
            terms: self.terms.filter(|n| n.weight() <= max_weight),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.g != other.g {
            return Err(Error::GenusMismatch(self.g, other.g));
        }
        Ok(DerivationElem {
            g: self.g,
            terms: self.terms.sum(&other.terms),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        DerivationElem {
            g: self.g,
            terms: self.terms.scaled(c),
        }
    }

    pub fn neg(&self) -> Self {
        DerivationElem {
            g: self.g,
            terms: self.terms.neg(),
        }
    }

    /// The rotation-invariant tensor `Σ c_w N(w)`.
    pub fn to_tensor(&self) -> Tensor {
        Tensor::from_terms_unchecked(self.g, self.terms.map_linear(Necklace::to_tensor_terms))
    }
}

/// Writes a rotation-invariant tensor in the basis `{N(w)}`.
///
/// The coefficient of `N(c)` is the coefficient of the canonical word `c`
/// divided by its rotation multiplicity.
pub fn necklace_normal_form(t: &Tensor) -> Result<DerivationElem> {
    let mut terms = LinComb::new();
    for (w, c) in t.terms() {
        let Some(n) = Necklace::of(w) else {
            return Err(Error::NotCyclic { weight: 0 });
        };
        if n.word() == w {
            let mult = Scalar::from_int(n.multiplicity() as i64);
            terms.add_term(n, c / &mult);
        }
    }
    let d = DerivationElem {
        g: t.genus(),
        terms,
    };
    let back = d.to_tensor();
    if &back != t {
        let diff = back.sub(t)?;
        let weight = diff.weight_support().into_iter().next().unwrap_or(0);
        return Err(Error::NotCyclic { weight });
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nk(s: &str) -> Necklace {
        Necklace::of(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn canonical_rotation() {
        assert_eq!(nk("b1 a1").word().to_string(), "a1 b1");
        assert_eq!(nk("b1 a1 a1").word().to_string(), "a1 a1 b1");
        assert_eq!(nk("a1 b1 a1 b1").multiplicity(), 2);
        assert!(Necklace::of(&Word::empty()).is_none());
    }

    #[test]
    fn basis_small_cases() {
        let b = necklace_basis(1, 2);
        let s: Vec<String> = b.iter().map(|n| n.word().to_string()).collect();
        assert_eq!(s, ["a1 a1", "a1 b1", "b1 b1"]);
        assert_eq!(necklace_basis(2, 2).len(), 10);
        assert_eq!(necklace_basis(1, 6).len(), 14);
    }

    #[test]
    fn basis_matches_burnside_count_and_brute_force() {
        for g in 1..=2u8 {
            for m in 1..=7 {
                let b = necklace_basis(g, m);
                assert_eq!(b.len() as u128, necklace_count(g, m));
                let mut brute: Vec<Necklace> = Word::all(g, m).iter().filter_map(Necklace::of).collect();
                brute.sort();
                brute.dedup();
                assert_eq!(b, brute);
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let ab = Tensor::word(1, "a1 b1".parse().unwrap());
        let d = necklace_normal_form(&ab.cyclicize()).unwrap();
        assert_eq!(d, DerivationElem::necklace(1, nk("a1 b1")));
        let aa = Tensor::word(1, "a1 a1".parse().unwrap());
        let d = necklace_normal_form(&aa.cyclicize()).unwrap();
        assert_eq!(d, DerivationElem::necklace(1, nk("a1 a1")));
        assert!(matches!(necklace_normal_form(&ab), Err(Error::NotCyclic { weight: 2 })));
    }

    #[test]
    fn normal_form_round_trip_on_basis() {
        for m in 1..=6 {
            for n in necklace_basis(2, m) {
                let d = DerivationElem::necklace(2, n);
                assert_eq!(necklace_normal_form(&d.to_tensor()).unwrap(), d);
            }
        }
    }
}
