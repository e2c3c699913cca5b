//! Exterior powers of `a_g⁻` and of `T ⊗ Λ a_g⁻` in the necklace basis.

use std::fmt;

use smallvec::SmallVec;

use crate::lincomb::LinComb;
use crate::necklace::{necklace_basis, Necklace};
use crate::scalar::Scalar;
use crate::word::{Genus, Word};

pub type Factors = SmallVec<[Necklace; 4]>;

/// A wedge monomial `X_1∧⋯∧X_p` with strictly increasing factors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Wedge(Factors);

impl Wedge {
    pub fn empty() -> Self {
        Wedge(SmallVec::new())
    }

    pub fn single(x: Necklace) -> Self {
        Wedge(smallvec::smallvec![x])
    }

    /// Sorts the factors, returning the permutation sign, or `None` when a
    /// factor repeats.
    pub fn normalize(mut fs: Factors) -> Option<(i64, Wedge)> {
        let mut sign = 1;
        // Insertion sort keeps the sign bookkeeping simple; p is small.
        for i in 1..fs.len() {
            let mut j = i;
            while j > 0 && fs[j - 1] > fs[j] {
                fs.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if fs.windows(2).any(|w| w[0] == w[1]) {
            None
        } else {
            Some((sign, Wedge(fs)))
        }
    }

    pub fn factors(&self) -> &[Necklace] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(Necklace::weight).sum()
    }

    pub fn charge(&self, g: Genus) -> Vec<i32> {
        let mut c = vec![0; g as usize];
        for n in &self.0 {
            for l in n.letters() {
                let (slot, s) = l.charge();
                c[slot] += s;
            }
        }
        c
    }

    /// The factors with position `i` removed.
    pub fn without(&self, i: usize) -> Factors {
        let mut f = self.0.clone();
        f.remove(i);
        f
    }

    /// Antisymmetrized image `Σ_σ sgn(σ) X_{σ(1)}⊗⋯⊗X_{σ(p)}` in `g^{⊗p}`.
    pub fn antisymmetrize(&self) -> LinComb<Vec<Necklace>> {
        fn perms(n: usize) -> Vec<(Vec<usize>, i64)> {
            if n == 0 {
                return vec![(Vec::new(), 1)];
            }
            let mut out = Vec::new();
            for (p, s) in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    let moved = (p.len() - pos) as i64;
                    out.push((q, if moved % 2 == 0 { s } else { -s }));
                }
            }
            out
        }
        let mut out = LinComb::new();
        for (p, s) in perms(self.0.len()) {
            out.add_int(p.iter().map(|&i| self.0[i].clone()).collect(), s);
        }
        out
    }
}

impl fmt::Display for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("^")?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A monomial `m ⊗ ξ` of `T ⊗ Λ^p a_g⁻`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMono {
    pub word: Word,
    pub wedge: Wedge,
}

impl ModMono {
    pub fn new(word: Word, wedge: Wedge) -> Self {
        ModMono { word, wedge }
    }
}

impl fmt::Display for ModMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}]⊗{}", self.word, self.wedge)
    }
}

impl fmt::Debug for ModMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of `Λ^p a_g⁻`, keyed by wedge monomials.
pub type ChainVector = LinComb<Wedge>;
/// An element of `T ⊗ Λ^p a_g⁻`.
pub type ModChainVector = LinComb<ModMono>;

/// Common interface of the two kinds of chain monomials.
pub trait Monomial: Clone + Ord + std::hash::Hash + Send + Sync + fmt::Debug + fmt::Display {
    fn degree(&self) -> usize;
    fn weight(&self) -> usize;
    fn charge(&self, g: Genus) -> Vec<i32>;
}

impl Monomial for Wedge {
    fn degree(&self) -> usize {
        Wedge::degree(self)
    }
    fn weight(&self) -> usize {
        Wedge::weight(self)
    }
    fn charge(&self, g: Genus) -> Vec<i32> {
        Wedge::charge(self, g)
    }
}

impl Monomial for ModMono {
    fn degree(&self) -> usize {
        self.wedge.degree()
    }
    fn weight(&self) -> usize {
        self.word.weight() + self.wedge.weight()
    }
    fn charge(&self, g: Genus) -> Vec<i32> {
        let mut c = self.wedge.charge(g);
        for (a, b) in c.iter_mut().zip(self.word.charge(g)) {
            *a += b;
        }
        c
    }
}

/// Adds `c · (f_1∧⋯∧f_p)` for unsorted factors.
pub fn add_factors(out: &mut ChainVector, fs: Factors, c: &Scalar) {
    if let Some((s, w)) = Wedge::normalize(fs) {
        out.add_term(w, if s > 0 { c.clone() } else { -c });
    }
}

pub fn add_mod_factors(out: &mut ModChainVector, word: Word, fs: Factors, c: &Scalar) {
    if let Some((s, w)) = Wedge::normalize(fs) {
        out.add_term(ModMono::new(word, w), if s > 0 { c.clone() } else { -c });
    }
}

/// `ξ ∧ η`.
pub fn wedge_product(x: &ChainVector, y: &ChainVector) -> ChainVector {
    let mut out = LinComb::new();
    for (a, ca) in x {
        for (b, cb) in y {
            let mut fs = a.0.clone();
            fs.extend(b.0.iter().cloned());
            add_factors(&mut out, fs, &(ca * cb));
        }
    }
    out
}

/// `(m⊗ξ) ∧ η`.
pub fn mod_wedge_product(x: &ModChainVector, y: &ChainVector) -> ModChainVector {
    let mut out = LinComb::new();
    for (a, ca) in x {
        for (b, cb) in y {
            let mut fs = a.wedge.0.clone();
            fs.extend(b.0.iter().cloned());
            add_mod_factors(&mut out, a.word.clone(), fs, &(ca * cb));
        }
    }
    out
}

/// Necklaces of each weight `1..=max`, index `m` holding weight `m`.
pub fn necklaces_by_weight(g: Genus, max: usize) -> Vec<Vec<Necklace>> {
    (0..=max).map(|m| necklace_basis(g, m)).collect()
}

/// All wedge monomials of degree `p` and weight `w`, in increasing order.
pub fn wedge_basis(g: Genus, p: usize, w: usize) -> Vec<Wedge> {
    let by_weight = necklaces_by_weight(g, w);
    let all: Vec<&Necklace> = by_weight.iter().flatten().collect();
    let mut out = Vec::new();
    let mut cur: Factors = SmallVec::new();
    fn rec(all: &[&Necklace], start: usize, left_p: usize, left_w: usize, cur: &mut Factors, out: &mut Vec<Wedge>) {
        if left_p == 0 {
            if left_w == 0 {
                out.push(Wedge(cur.clone()));
            }
            return;
        }
        for i in start..all.len() {
            let wt = all[i].weight();
            // Remaining factors are at least as heavy as this one.
            if wt * left_p > left_w {
                break;
            }
            cur.push(all[i].clone());
            rec(all, i + 1, left_p - 1, left_w - wt, cur, out);
            cur.pop();
        }
    }
    rec(&all, 0, p, w, &mut cur, &mut out);
    out
}

/// All monomials `m⊗ξ` with `ξ` of degree `p` and total weight `w`, sorted.
pub fn mod_basis(g: Genus, p: usize, w: usize) -> Vec<ModMono> {
    let mut out = Vec::new();
    for k in 0..=w {
        let wedges = wedge_basis(g, p, w - k);
        if wedges.is_empty() {
            continue;
        }
        for word in Word::all(g, k) {
            for x in &wedges {
                out.push(ModMono::new(word.clone(), x.clone()));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nk(s: &str) -> Necklace {
        Necklace::of(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn normalize_sign_and_repeats() {
        let (a, b) = (nk("a1"), nk("b1"));
        let (s, w) = Wedge::normalize(smallvec::smallvec![b.clone(), a.clone()]).unwrap();
        assert_eq!(s, -1);
        assert_eq!(w.factors(), &[a.clone(), b]);
        assert!(Wedge::normalize(smallvec::smallvec![a.clone(), a]).is_none());
    }

    #[test]
    fn basis_is_sorted_and_complete() {
        for g in 1..=2 {
            for p in 0..=3 {
                for w in 0..=6 {
                    let b = wedge_basis(g, p, w);
                    assert!(b.windows(2).all(|x| x[0] < x[1]));
                    assert!(b.iter().all(|x| x.degree() == p && x.weight() == w));
                }
            }
        }
        // Pairs of weight 4 for g = 1: weights (1,3) give 2·4, (2,2) give C(3,2).
        assert_eq!(wedge_basis(1, 2, 4).len(), 8 + 3);
        assert_eq!(wedge_basis(1, 0, 0).len(), 1);
        assert!(wedge_basis(1, 0, 2).is_empty());
    }

    #[test]
    fn antisymmetrization_matches_wedge_sign() {
        let (a, b, c) = (nk("a1"), nk("b1"), nk("a1 b1"));
        let (_, w) = Wedge::normalize(smallvec::smallvec![a.clone(), b.clone(), c.clone()]).unwrap();
        let t = w.antisymmetrize();
        assert_eq!(t.len(), 6);
        assert_eq!(t.get(&vec![a.clone(), b.clone(), c.clone()]), Scalar::one());
        assert_eq!(t.get(&vec![b, a, c]), Scalar::from_int(-1));
    }
}
